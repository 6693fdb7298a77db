#ifndef DOQR_PROJECTION_OUTLYINGNESS_HPP
#define DOQR_PROJECTION_OUTLYINGNESS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "core_data.hpp"
#include "halfspace_depth.hpp"

/**
 * @file projection_outlyingness.hpp
 *
 * @brief Scaled-deviation outlyingness `|x - median| / MAD` and its projection-pursuit generalization.
 *
 * The MAD is unscaled (no normal consistency factor). Medians of even-sized samples are the
 * average of the two middle order statistics.
 */

namespace doqr {

/**
 * @brief Median and median absolute deviation of a univariate sample.
 */
struct RobustScale {
    double median = 0;
    double mad = 0;
};

inline double sample_median(std::vector<double> values) {
    if (values.empty()) {
        throw PreconditionError("median of an empty sample");
    }
    const std::size_t n = values.size();
    const std::size_t lo = (n - 1) / 2;
    const std::size_t hi = n / 2;
    std::nth_element(values.begin(), values.begin() + hi, values.end());
    const double upper = values[hi];
    if (lo == hi) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), values.begin() + hi);
    return 0.5 * (lower + upper);
}

inline RobustScale robust_scale(std::vector<double> values) {
    RobustScale out;
    out.median = sample_median(values);
    for (auto& v : values) {
        v = std::abs(v - out.median);
    }
    out.mad = sample_median(std::move(values));
    return out;
}

/**
 * @brief Result of a scaled-deviation evaluation.
 *
 * `zero_mad` flags a degenerate scale, in which case `value` is `+inf` away from the median and 0 at it.
 */
struct ScaledDeviation {
    double value = 0;
    bool zero_mad = false;
};

inline ScaledDeviation scaled_deviation(double x, const RobustScale& scale) {
    const double deviation = std::abs(x - scale.median);
    if (scale.mad > 0) {
        return { deviation / scale.mad, false };
    }
    return { deviation == 0 ? 0.0 : std::numeric_limits<double>::infinity(), true };
}

inline ScaledDeviation po_1d(const Dataset& ds, double x) {
    if (ds.dim() != 1) {
        throw DimensionError("po_1d requires d = 1");
    }
    return scaled_deviation(x, robust_scale(ds.values()));
}

/**
 * @brief Every sampled direction had a zero projected MAD.
 */
class DegenerateScaleError : public Error {
public:
    explicit DegenerateScaleError(std::size_t count) :
        Error("all " + std::to_string(count) + " sampled directions have zero projected MAD"), count_(count) {}
    std::size_t count() const { return count_; }

private:
    std::size_t count_;
};

/**
 * @brief Approximate projection outlyingness and how many directions were skipped.
 */
struct ProjectionOutlyingnessValue {
    double value = 0;
    std::size_t skipped = 0;
};

/**
 * @brief Per-direction medians and MADs of a sample, for evaluating many query points.
 *
 * Projection outlyingness is the supremum of the scaled deviation of `u . x` over unit `u`.
 * Here the supremum runs over the sampled directions only, so it approximates from below.
 * Directions along which the projected MAD is zero are skipped.
 */
class ProjectionOutlyingness {
public:
    ProjectionOutlyingness(const Dataset& ds, const DepthConfig& cfg) :
        ProjectionOutlyingness(ds, sample_directions(ds.dim(), cfg.n_directions, cfg.seed)) {}

    ProjectionOutlyingness(const Dataset& ds, std::vector<Direction> directions) : dim_(ds.dim()), directions_(std::move(directions)) {
        if (directions_.empty()) {
            throw PreconditionError("at least one direction is required");
        }
        scales_.reserve(directions_.size());
        std::vector<double> proj(ds.size());
        for (const auto& u : directions_) {
            if (u.dim() != dim_) {
                throw DimensionError("direction dimension does not match the dataset");
            }
            for (std::size_t i = 0; i < ds.size(); ++i) {
                proj[i] = u.dot(ds[i]);
            }
            scales_.push_back(robust_scale(proj));
        }
    }

    std::size_t size() const { return directions_.size(); }

    /** Maximum scaled deviation over the first `limit` directions. */
    ProjectionOutlyingnessValue evaluate(std::span<const double> x, std::size_t limit = std::numeric_limits<std::size_t>::max()) const {
        if (x.size() != dim_) {
            throw DimensionError("query point dimension does not match the dataset");
        }
        limit = std::min(limit, directions_.size());
        ProjectionOutlyingnessValue out;
        bool any = false;
        for (std::size_t k = 0; k < limit; ++k) {
            if (!(scales_[k].mad > 0)) {
                ++out.skipped;
                continue;
            }
            any = true;
            out.value = std::max(out.value, scaled_deviation(directions_[k].dot(x), scales_[k]).value);
        }
        if (!any) {
            throw DegenerateScaleError(out.skipped);
        }
        return out;
    }

private:
    std::size_t dim_;
    std::vector<Direction> directions_;
    std::vector<RobustScale> scales_;
};

inline ProjectionOutlyingnessValue po_approx(const Dataset& ds, std::span<const double> x, const DepthConfig& cfg) {
    if (x.size() != ds.dim()) {
        throw DimensionError("query point dimension does not match the dataset");
    }
    return ProjectionOutlyingness(ds, cfg).evaluate(x);
}

/** `1 / (1 + O)`, with `O = +inf` mapped to 0. */
inline double depth_from_outlyingness(double outlyingness) {
    if (std::isinf(outlyingness)) {
        return 0;
    }
    return 1 / (1 + outlyingness);
}

inline double projection_depth(const Dataset& ds, std::span<const double> x, const DepthConfig& cfg) {
    return depth_from_outlyingness(po_approx(ds, x, cfg).value);
}

}

#endif
