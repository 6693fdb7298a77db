#ifndef DOQR_DOQR_HPP
#define DOQR_DOQR_HPP

/**
 * @file doqr.hpp
 *
 * @brief Umbrella header for the library.
 */

#include "core_data.hpp"
#include "geometry.hpp"
#include "halfspace_depth.hpp"
#include "projection_outlyingness.hpp"
#include "doqr_induction.hpp"
#include "normal_oracle.hpp"
#include "outlier_lab.hpp"
#include "report_io.hpp"

#endif
