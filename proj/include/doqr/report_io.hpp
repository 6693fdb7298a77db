#ifndef DOQR_REPORT_IO_HPP
#define DOQR_REPORT_IO_HPP

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "outlier_lab.hpp"

/**
 * @file report_io.hpp
 *
 * @brief JSON and CSV serialization of contamination specs, experiment reports and comparison tables.
 */

namespace doqr {

inline nlohmann::ordered_json spec_to_json(const ContaminationSpec& spec) {
    nlohmann::ordered_json out;
    out["n_clean"] = spec.n_clean;
    out["d"] = spec.d;
    out["n_outliers"] = spec.n_outliers;
    out["outlier_center"] = spec.outlier_center;
    out["outlier_spread"] = spec.outlier_spread;
    out["seed"] = spec.seed.master_seed;
    return out;
}

/**
 * @brief Read a `ContaminationSpec` from an object with the same field names.
 *
 * Missing fields keep their defaults; `seed` falls back to `default_seed`.
 */
inline ContaminationSpec spec_from_json(const nlohmann::json& in, std::uint64_t default_seed = 0) {
    if (!in.is_object()) {
        throw ParseError("contamination spec must be a JSON object");
    }
    static const char* known[] = { "n_clean", "d", "n_outliers", "outlier_center", "outlier_spread", "seed" };
    for (const auto& item : in.items()) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return item.key() == k; }) == std::end(known)) {
            throw ParseError("unknown contamination spec field '" + item.key() + "'");
        }
    }
    ContaminationSpec spec;
    try {
        spec.n_clean = in.value("n_clean", spec.n_clean);
        spec.d = in.value("d", spec.d);
        spec.n_outliers = in.value("n_outliers", spec.n_outliers);
        spec.outlier_center = in.value("outlier_center", Point(spec.d, 0.0));
        spec.outlier_spread = in.value("outlier_spread", spec.outlier_spread);
        spec.seed.master_seed = in.value("seed", default_seed);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid contamination spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

namespace detail {

inline nlohmann::ordered_json outcome_to_json(const IdentifierOutcome& outcome) {
    nlohmann::ordered_json out;
    out["threshold"] = outcome.threshold;
    out["detected"] = outcome.detected;
    out["false_positives"] = outcome.false_positives;
    return out;
}

inline nlohmann::ordered_json summary_to_json(const IdentifierSummary& summary) {
    nlohmann::ordered_json out;
    out["masking_rate"] = summary.masking_rate;
    out["fp_rate"] = summary.fp_rate;
    return out;
}

}

inline nlohmann::ordered_json report_to_json(const ExperimentReport& report) {
    nlohmann::ordered_json out;
    out["spec"] = spec_to_json(report.spec);
    out["fpr"] = report.fpr;
    out["n_trials"] = report.n_trials;
    out["n_directions"] = report.cfg.n_directions;
    out["direction_seed"] = report.cfg.seed.master_seed;
    out["halfspace_threshold"] = report.halfspace_threshold;
    out["projection_cutoff"] = report.projection_cutoff;
    out["summary"]["halfspace"] = detail::summary_to_json(report.halfspace);
    out["summary"]["projection"] = detail::summary_to_json(report.projection);
    auto& trials = out["trials"] = nlohmann::ordered_json::array();
    for (const auto& t : report.trials) {
        nlohmann::ordered_json row;
        row["trial"] = t.trial;
        row["seed"] = t.seed;
        row["halfspace"] = detail::outcome_to_json(t.halfspace);
        row["projection"] = detail::outcome_to_json(t.projection);
        trials.push_back(std::move(row));
    }
    return out;
}

/**
 * @brief One line per trial and identifier: `trial,seed,identifier,threshold,detected,missed,false_positives`.
 */
inline void write_report_csv(std::ostream& out, const ExperimentReport& report) {
    out << "trial,seed,identifier,threshold,detected,missed,false_positives\n";
    for (const auto& t : report.trials) {
        for (auto method : { Identifier::halfspace, Identifier::projection }) {
            const auto& outcome = method == Identifier::halfspace ? t.halfspace : t.projection;
            const auto detected = static_cast<std::size_t>(std::count(outcome.detected.begin(), outcome.detected.end(), true));
            out << t.trial << ',' << t.seed << ',' << identifier_name(method) << ',' << format_number(outcome.threshold) << ','
                << detected << ',' << outcome.detected.size() - detected << ',' << outcome.false_positives << '\n';
        }
    }
}

inline void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << "d,n_clean,n_outliers,distance,spread,halfspace_masking_rate,projection_masking_rate,halfspace_fp_rate,projection_fp_rate\n";
    for (const auto& r : rows) {
        out << r.d << ',' << r.n_clean << ',' << r.n_outliers << ',' << format_number(r.distance) << ',' << format_number(r.spread) << ','
            << format_number(r.halfspace.masking_rate) << ',' << format_number(r.projection.masking_rate) << ','
            << format_number(r.halfspace.fp_rate) << ',' << format_number(r.projection.fp_rate) << '\n';
    }
}

}

#endif
