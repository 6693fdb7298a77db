#ifndef DOQR_DOQR_INDUCTION_HPP
#define DOQR_DOQR_INDUCTION_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "core_data.hpp"
#include "geometry.hpp"
#include "halfspace_depth.hpp"

/**
 * @file doqr_induction.hpp
 *
 * @brief Depth, outlyingness, quantile and rank functions induced by planar halfspace depth contours.
 *
 * Every point `x` other than the Tukey median `M` is indexed by `u = p v`, where `v` is the unit
 * vector from `M` toward `x` and `p` is the probability weight of the central region having `x` on
 * its boundary. The map `x -> u` is the rank function, its inverse is the quantile function,
 * `|u|` is the outlyingness and `1 / (1 + |u|)` the associated depth.
 *
 * Empirical central regions are convex hulls of the sample points whose depth reaches the level,
 * and their weight is the fraction of sample points they contain.
 */

namespace doqr {

/** Largest admissible norm of a rank vector; points of zero depth are mapped onto this sphere. */
inline constexpr double kRankCap = 1 - 1e-9;

/**
 * @brief No sample point reaches the requested depth level.
 */
class EmptyRegionError : public Error {
public:
    using Error::Error;
};

struct CentralRegion {
    double level = 0;
    /** Counterclockwise hull vertices. */
    std::vector<Point> vertices;
    /** Fraction of sample points inside the closed hull. */
    double weight = 0;
};

/**
 * @brief A rank vector `u = p v` together with its factors.
 *
 * At the median `u = 0`, `p = 0` and `v` is empty.
 */
struct RankVector {
    Point u;
    double p = 0;
    Point v;

    /** `|u|`, taken from the factors so that it is monotone in `p` to the last bit. */
    double norm() const { return v.empty() ? 0.0 : std::min(p, kRankCap); }
};

struct SignTestResult {
    RankVector rank;
    double statistic = 0;
};

/**
 * @brief The halfspace DOQR combination of one planar sample.
 *
 * Construction finds the Tukey median and the depth of every sample point, which costs
 * `O(n^2 log n)`; all queries afterwards are read-only, so one instance may be shared by
 * concurrent readers.
 */
class HalfspaceDoqr {
public:
    explicit HalfspaceDoqr(Dataset ds, const MedianOptions& options = {}) : ds_(std::move(ds)) {
        if (ds_.dim() != 2) {
            throw DimensionError("halfspace DOQR functions require d = 2");
        }
        median_ = tukey_median(ds_, options);
        sample_depths_.reserve(ds_.size());
        for (std::size_t i = 0; i < ds_.size(); ++i) {
            sample_depths_.push_back(depth_2d_exact(ds_, ds_[i]).count);
        }
        sorted_depths_ = sample_depths_;
        std::sort(sorted_depths_.begin(), sorted_depths_.end());

        radius_ = 0;
        for (std::size_t i = 0; i < ds_.size(); ++i) {
            radius_ = std::max(radius_, std::hypot(ds_[i][0] - median_.point[0], ds_[i][1] - median_.point[1]));
        }
    }

    const Dataset& data() const { return ds_; }
    const TukeyMedian& median() const { return median_; }
    std::size_t size() const { return ds_.size(); }

    /** Exact depth count of sample point `i`. */
    std::size_t sample_depth(std::size_t i) const { return sample_depths_[i]; }

    /** Distinct depth levels attained by sample points, ascending. */
    std::vector<DepthValue> attained_levels() const {
        std::vector<DepthValue> out;
        for (std::size_t c : sorted_depths_) {
            if (out.empty() || out.back().count != c) {
                out.push_back(DepthValue{ c, size() });
            }
        }
        return out;
    }

    /** Whether a depth count reaches level `alpha` (given as a fraction). */
    bool reaches(std::size_t count, double alpha) const {
        return static_cast<double>(count) + 1e-9 >= alpha * static_cast<double>(size());
    }

    /** Fraction of sample points whose depth count is at least `count`. */
    double weight_at(std::size_t count) const {
        const auto first = std::lower_bound(sorted_depths_.begin(), sorted_depths_.end(), count);
        return static_cast<double>(sorted_depths_.end() - first) / static_cast<double>(size());
    }

    std::vector<std::size_t> members(double alpha) const {
        check_level(alpha);
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < size(); ++i) {
            if (reaches(sample_depths_[i], alpha)) {
                out.push_back(i);
            }
        }
        if (out.empty()) {
            throw EmptyRegionError("no sample point has depth at least " + std::to_string(alpha));
        }
        return out;
    }

    CentralRegion central_region(double alpha) const {
        const auto idx = members(alpha);
        std::vector<Point> pts;
        pts.reserve(idx.size());
        for (auto i : idx) {
            pts.push_back(ds_.point(i));
        }
        CentralRegion out;
        out.level = alpha;
        out.vertices = convex_hull(std::move(pts));
        std::size_t inside = 0;
        for (std::size_t i = 0; i < size(); ++i) {
            inside += polygon_contains(out.vertices, ds_[i]);
        }
        out.weight = static_cast<double>(inside) / static_cast<double>(size());
        return out;
    }

    std::vector<Point> contour_polyline(double alpha) const { return central_region(alpha).vertices; }

    /**
     * @brief Rank vector of `x`.
     *
     * `p` is the weight of the central region at the depth of `x`; points of zero depth get `p = 1`.
     * The result is scaled down if needed so that `|u| <= kRankCap`.
     */
    RankVector rank(std::span<const double> x) const {
        check_point(x);
        const double dx = x[0] - median_.point[0];
        const double dy = x[1] - median_.point[1];
        if (dx == 0 && dy == 0) {
            return RankVector{ Point{ 0.0, 0.0 }, 0.0, {} };
        }
        const double len = std::hypot(dx, dy);
        RankVector out;
        out.v = Point{ dx / len, dy / len };
        out.p = region_weight(x);
        const double scale = std::min(out.p, kRankCap);
        out.u = Point{ scale * out.v[0], scale * out.v[1] };
        return out;
    }

    /**
     * @brief Point with rank vector `u`, found by bisection along the ray from the median toward `u`.
     *
     * The region weight is a nondecreasing step function along the ray. Bisection stops once the
     * weight is within `1/n` of `|u|` or the bracket is narrower than `1e-6` times its initial
     * width, which is twice the sample radius about the median.
     */
    Point quantile(std::span<const double> u) const {
        check_point(u);
        const double target = std::hypot(u[0], u[1]);
        if (!(target < 1)) {
            throw PreconditionError("quantile index must lie in the open unit disc");
        }
        if (target == 0 || radius_ == 0) {
            return median_.point;
        }
        const double vx = u[0] / target;
        const double vy = u[1] / target;
        auto at = [&](double t) { return Point{ median_.point[0] + t * vx, median_.point[1] + t * vy }; };

        const double t_max = 2 * radius_;
        const double resolution = 1.0 / static_cast<double>(size());
        double lo = 0;
        double hi = t_max;
        while (hi - lo > 1e-6 * t_max) {
            const double mid = 0.5 * (lo + hi);
            const Point y = at(mid);
            const double weight = region_weight(y);
            if (std::abs(weight - target) <= resolution) {
                return y;
            }
            if (weight >= target) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return at(hi);
    }

    double outlyingness(std::span<const double> x) const { return rank(x).norm(); }

    double depth(std::span<const double> x) const { return 1 / (1 + outlyingness(x)); }

    /** Rank of the hypothesized center; its norm is the test statistic. No p-value is attached. */
    SignTestResult sign_test(std::span<const double> theta) const {
        SignTestResult out;
        out.rank = rank(theta);
        out.statistic = out.rank.norm();
        return out;
    }

    /** Coordinatewise mean of the sample points with depth at least `alpha`. */
    Point trimmed_mean(double alpha) const {
        if (!(alpha > 0)) {
            throw PreconditionError("depth level must be positive");
        }
        Point sum{ 0.0, 0.0 };
        std::size_t count = 0;
        for (std::size_t i = 0; i < size(); ++i) {
            if (reaches(sample_depths_[i], alpha)) {
                sum[0] += ds_[i][0];
                sum[1] += ds_[i][1];
                ++count;
            }
        }
        if (count == 0) {
            throw EmptyRegionError("no sample point has depth at least " + std::to_string(alpha));
        }
        return Point{ sum[0] / static_cast<double>(count), sum[1] / static_cast<double>(count) };
    }

private:
    double region_weight(std::span<const double> x) const {
        const DepthValue d = depth_2d_exact(ds_, x);
        if (d.count == 0) {
            return 1;
        }
        return weight_at(d.count);
    }

    void check_level(double alpha) const {
        if (!(alpha > 0)) {
            throw PreconditionError("depth level must be positive");
        }
        if (alpha > median_.depth.value() + 1e-12) {
            throw PreconditionError("depth level " + std::to_string(alpha) + " exceeds the maximal depth " + std::to_string(median_.depth.value()));
        }
    }

    static void check_point(std::span<const double> x) {
        if (x.size() != 2) {
            throw DimensionError("expected a planar point");
        }
    }

    Dataset ds_;
    TukeyMedian median_;
    std::vector<std::size_t> sample_depths_;
    std::vector<std::size_t> sorted_depths_;
    double radius_ = 0;
};

inline CentralRegion central_region(const Dataset& ds, double alpha) { return HalfspaceDoqr(ds).central_region(alpha); }
inline RankVector rank_function(const Dataset& ds, std::span<const double> x) { return HalfspaceDoqr(ds).rank(x); }
inline Point quantile_function(const Dataset& ds, std::span<const double> u) { return HalfspaceDoqr(ds).quantile(u); }
inline double outlyingness(const Dataset& ds, std::span<const double> x) { return HalfspaceDoqr(ds).outlyingness(x); }
inline double doqr_depth(const Dataset& ds, std::span<const double> x) { return HalfspaceDoqr(ds).depth(x); }
inline SignTestResult sign_test(const Dataset& ds, std::span<const double> theta) { return HalfspaceDoqr(ds).sign_test(theta); }
inline Point trimmed_mean(const Dataset& ds, double alpha) { return HalfspaceDoqr(ds).trimmed_mean(alpha); }
inline std::vector<Point> contour_polyline(const Dataset& ds, double alpha) { return HalfspaceDoqr(ds).contour_polyline(alpha); }

}

#endif
