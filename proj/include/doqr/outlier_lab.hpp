#ifndef DOQR_OUTLIER_LAB_HPP
#define DOQR_OUTLIER_LAB_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "core_data.hpp"
#include "halfspace_depth.hpp"
#include "normal_oracle.hpp"
#include "projection_outlyingness.hpp"

/**
 * @file outlier_lab.hpp
 *
 * @brief Contaminated-normal simulations comparing halfspace and projection outlier identifiers.
 *
 * A trial draws a clean standard normal sample with a planted cluster of outliers, flags points
 * whose outlyingness exceeds a threshold, and records which planted outliers went undetected
 * (masked) and how many clean points were flagged.
 */

namespace doqr {

/**
 * @brief Contaminated normal model: `n_clean` standard normal points followed by `n_outliers`
 * points drawn as `outlier_center + outlier_spread * Z`.
 */
struct ContaminationSpec {
    std::size_t n_clean = 100;
    std::size_t d = 2;
    std::size_t n_outliers = 0;
    Point outlier_center;
    double outlier_spread = 0;
    SeedSpec seed;

    void validate() const {
        if (n_clean < 1) {
            throw PreconditionError("n_clean must be at least 1");
        }
        if (d < 1) {
            throw PreconditionError("d must be at least 1");
        }
        if (n_outliers > 0 && outlier_center.size() != d) {
            throw DimensionError("outlier_center must have d coordinates");
        }
        if (!(outlier_spread >= 0) || !std::isfinite(outlier_spread)) {
            throw PreconditionError("outlier_spread must be finite and nonnegative");
        }
        for (double c : outlier_center) {
            if (!std::isfinite(c)) {
                throw PreconditionError("outlier_center must be finite");
            }
        }
    }
};

struct ContaminatedSample {
    Dataset data;
    /** Indices of the planted outliers, which are the last `n_outliers` points. */
    std::vector<std::size_t> outliers;
};

inline ContaminatedSample sample_contaminated(const ContaminationSpec& spec) {
    spec.validate();
    auto engine = spec.seed.engine(0);
    std::normal_distribution<double> normal;

    const std::size_t n = spec.n_clean + spec.n_outliers;
    std::vector<double> values;
    values.reserve(n * spec.d);
    for (std::size_t i = 0; i < spec.n_clean * spec.d; ++i) {
        values.push_back(normal(engine));
    }
    std::vector<std::size_t> outliers;
    for (std::size_t i = 0; i < spec.n_outliers; ++i) {
        for (std::size_t j = 0; j < spec.d; ++j) {
            values.push_back(spec.outlier_center[j] + spec.outlier_spread * normal(engine));
        }
        outliers.push_back(spec.n_clean + i);
    }
    return ContaminatedSample{ Dataset(spec.d, std::move(values)), std::move(outliers) };
}

enum class Identifier { halfspace, projection };

inline const char* identifier_name(Identifier method) {
    return method == Identifier::halfspace ? "halfspace" : "projection";
}

inline Identifier parse_identifier(const std::string& name) {
    if (name == "halfspace") {
        return Identifier::halfspace;
    }
    if (name == "projection") {
        return Identifier::projection;
    }
    throw PreconditionError("unknown identifier '" + name + "'");
}

/**
 * @brief Outlyingness of every sample point with respect to the sample itself (no leave-one-out).
 *
 * Halfspace scores are `1 - 2 depth`, using exact depth when `d = 2` and the direction-sampling
 * approximation otherwise. Projection scores are approximate projection outlyingness.
 */
inline std::vector<double> sample_outlyingness(const Dataset& ds, Identifier method, const DepthConfig& cfg) {
    std::vector<double> out(ds.size());
    if (method == Identifier::halfspace) {
        if (ds.dim() == 2) {
            for (std::size_t i = 0; i < ds.size(); ++i) {
                out[i] = 1 - 2 * depth_2d_exact(ds, ds[i]).value();
            }
        } else {
            ProjectedSample projected(ds, sample_directions(ds.dim(), cfg.n_directions, cfg.seed));
            for (std::size_t i = 0; i < ds.size(); ++i) {
                out[i] = 1 - 2 * projected.depth(ds[i]).value();
            }
        }
    } else {
        ProjectionOutlyingness po(ds, cfg);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            out[i] = po.evaluate(ds[i]).value;
        }
    }
    return out;
}

/**
 * @brief Indices of the sample points whose outlyingness strictly exceeds `threshold`.
 */
inline std::vector<std::size_t> identify(const Dataset& ds, Identifier method, double threshold, const DepthConfig& cfg) {
    if (std::isnan(threshold)) {
        throw PreconditionError("threshold must not be NaN");
    }
    const auto scores = sample_outlyingness(ds, method, cfg);
    std::vector<std::size_t> flagged;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] > threshold) {
            flagged.push_back(i);
        }
    }
    return flagged;
}

struct IdentifierOutcome {
    double threshold = 0;
    /** One flag per planted outlier, in index order. */
    std::vector<bool> detected;
    std::size_t false_positives = 0;

    bool masked() const { return std::find(detected.begin(), detected.end(), false) != detected.end(); }
};

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    IdentifierOutcome halfspace;
    IdentifierOutcome projection;
};

struct IdentifierSummary {
    /** Fraction of trials in which at least one planted outlier went undetected. */
    double masking_rate = 0;
    /** Mean over trials of the fraction of clean points flagged. */
    double fp_rate = 0;
};

struct ExperimentReport {
    ContaminationSpec spec;
    double fpr = 0;
    std::size_t n_trials = 0;
    DepthConfig cfg;
    double halfspace_threshold = 0;
    double projection_cutoff = 0;
    std::vector<TrialRecord> trials;
    IdentifierSummary halfspace;
    IdentifierSummary projection;
};

struct ExperimentOptions {
    /** Worker threads for the trial loop; results do not depend on this. */
    std::size_t threads = 1;
    /** Calibration sample size, as a multiple of `n_clean`. */
    std::size_t calibration_factor = 10;
};

namespace detail {

inline constexpr std::uint64_t kCalibrationStream = 0xCA11B7A7EULL;

inline IdentifierOutcome score_trial(const ContaminatedSample& sample, const std::vector<double>& scores, double threshold, std::size_t n_clean) {
    IdentifierOutcome out;
    out.threshold = threshold;
    for (std::size_t i = 0; i < n_clean; ++i) {
        out.false_positives += (scores[i] > threshold);
    }
    for (auto idx : sample.outliers) {
        out.detected.push_back(scores[idx] > threshold);
    }
    return out;
}

inline IdentifierSummary summarize(const std::vector<TrialRecord>& trials, IdentifierOutcome TrialRecord::*member, std::size_t n_clean) {
    IdentifierSummary out;
    if (trials.empty()) {
        return out;
    }
    std::size_t masked = 0;
    double fp = 0;
    for (const auto& t : trials) {
        const auto& outcome = t.*member;
        masked += outcome.masked();
        fp += static_cast<double>(outcome.false_positives) / static_cast<double>(n_clean);
    }
    out.masking_rate = static_cast<double>(masked) / static_cast<double>(trials.size());
    out.fp_rate = fp / static_cast<double>(trials.size());
    return out;
}

}

/**
 * @brief Empirical cutoff for the projection identifier at false-positive rate `fpr`.
 *
 * A clean calibration sample of `calibration_factor * n_clean` points is drawn from its own
 * substream and scored in consecutive blocks of `n_clean`, each block against itself, so that the
 * scores follow the same law as the clean points of a trial. The cutoff is the order statistic
 * `ceil((1 - fpr) N)` of the `N` scores.
 */
inline double calibrate_projection_cutoff(const ContaminationSpec& spec, double fpr, const DepthConfig& cfg, std::size_t calibration_factor = 10) {
    spec.validate();
    detail::require_open_probability(fpr, "false positive rate");
    if (calibration_factor < 1) {
        throw PreconditionError("calibration factor must be at least 1");
    }
    ContaminationSpec clean = spec;
    clean.n_clean = spec.n_clean * calibration_factor;
    clean.n_outliers = 0;
    clean.seed = spec.seed.derive(detail::kCalibrationStream);
    const auto calibration = sample_contaminated(clean).data;

    std::vector<double> scores;
    scores.reserve(calibration.size());
    for (std::size_t block = 0; block < calibration_factor; ++block) {
        const auto begin = calibration.values().begin() + static_cast<std::ptrdiff_t>(block * spec.n_clean * spec.d);
        Dataset piece(spec.d, std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(spec.n_clean * spec.d)));
        const auto s = sample_outlyingness(piece, Identifier::projection, cfg);
        scores.insert(scores.end(), s.begin(), s.end());
    }
    std::sort(scores.begin(), scores.end());
    const auto rank = static_cast<std::size_t>(std::ceil((1 - fpr) * static_cast<double>(scores.size()) - 1e-9));
    return scores[std::clamp<std::size_t>(rank, 1, scores.size()) - 1];
}

/**
 * @brief Run `n_trials` contaminated-normal trials and score both identifiers.
 *
 * Trial `t` draws its data from `spec.seed.derive(t)`. The halfspace threshold is the
 * normal-model level `oh_threshold(fpr, d)`; the projection cutoff comes from
 * `calibrate_projection_cutoff()`. Records are ordered by trial index.
 */
inline ExperimentReport masking_experiment(const ContaminationSpec& spec, double fpr, std::size_t n_trials, const DepthConfig& cfg, const ExperimentOptions& options = {}) {
    spec.validate();
    detail::require_open_probability(fpr, "false positive rate");
    if (n_trials < 1) {
        throw PreconditionError("at least one trial is required");
    }
    if (cfg.n_directions < 1) {
        throw PreconditionError("at least one direction is required");
    }

    ExperimentReport report;
    report.spec = spec;
    report.fpr = fpr;
    report.n_trials = n_trials;
    report.cfg = cfg;
    report.halfspace_threshold = oh_threshold(fpr, static_cast<int>(spec.d));
    report.projection_cutoff = calibrate_projection_cutoff(spec, fpr, cfg, options.calibration_factor);
    report.trials.resize(n_trials);

    auto run_trial = [&](std::size_t t) {
        ContaminationSpec trial_spec = spec;
        trial_spec.seed = spec.seed.derive(t);
        const auto sample = sample_contaminated(trial_spec);
        TrialRecord record;
        record.trial = t;
        record.seed = trial_spec.seed.master_seed;
        record.halfspace = detail::score_trial(sample, sample_outlyingness(sample.data, Identifier::halfspace, cfg), report.halfspace_threshold, spec.n_clean);
        record.projection = detail::score_trial(sample, sample_outlyingness(sample.data, Identifier::projection, cfg), report.projection_cutoff, spec.n_clean);
        report.trials[t] = std::move(record);
    };

    const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, n_trials));
    if (threads == 1) {
        for (std::size_t t = 0; t < n_trials; ++t) {
            run_trial(t);
        }
    } else {
        std::atomic<std::size_t> next{ 0 };
        std::vector<std::jthread> workers;
        for (std::size_t w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t t = next++; t < n_trials; t = next++) {
                    run_trial(t);
                }
            });
        }
    }

    report.halfspace = detail::summarize(report.trials, &TrialRecord::halfspace, spec.n_clean);
    report.projection = detail::summarize(report.trials, &TrialRecord::projection, spec.n_clean);
    return report;
}

/**
 * @brief One row of an identifier comparison table.
 */
struct ComparisonRow {
    std::size_t d = 0;
    std::size_t n_clean = 0;
    std::size_t n_outliers = 0;
    double distance = 0;
    double spread = 0;
    IdentifierSummary halfspace;
    IdentifierSummary projection;
};

inline ComparisonRow summarize_report(const ExperimentReport& report) {
    ComparisonRow row;
    row.d = report.spec.d;
    row.n_clean = report.spec.n_clean;
    row.n_outliers = report.spec.n_outliers;
    double norm2 = 0;
    for (double c : report.spec.outlier_center) {
        norm2 += c * c;
    }
    row.distance = std::sqrt(norm2);
    row.spread = report.spec.outlier_spread;
    row.halfspace = report.halfspace;
    row.projection = report.projection;
    return row;
}

inline std::vector<ComparisonRow> compare_identifiers(const std::vector<ContaminationSpec>& grid, double fpr, std::size_t n_trials, const DepthConfig& cfg, const ExperimentOptions& options = {}) {
    std::vector<ComparisonRow> rows;
    rows.reserve(grid.size());
    for (const auto& spec : grid) {
        rows.push_back(summarize_report(masking_experiment(spec, fpr, n_trials, cfg, options)));
    }
    return rows;
}

/**
 * @brief The default masking scenario.
 *
 * Bivariate, 100 clean points, 3 or 5 outliers clustered (spread 0.1) on the first axis at
 * 1.25, 2 and 4 times the radius `sqrt(chi2_quantile(1 - fpr, 2))` beyond which a clean point is
 * flagged at the nominal rate.
 */
inline std::vector<ContaminationSpec> default_masking_grid(double fpr = 0.01, const SeedSpec& seed = {}) {
    const double radius = std::sqrt(chi2_quantile(1 - fpr, 2));
    std::vector<ContaminationSpec> grid;
    for (std::size_t n_outliers : { 3, 5 }) {
        for (double factor : { 1.25, 2.0, 4.0 }) {
            ContaminationSpec spec;
            spec.n_clean = 100;
            spec.d = 2;
            spec.n_outliers = n_outliers;
            spec.outlier_center = Point{ factor * radius, 0.0 };
            spec.outlier_spread = 0.1;
            spec.seed = seed;
            grid.push_back(spec);
        }
    }
    return grid;
}

}

#endif
