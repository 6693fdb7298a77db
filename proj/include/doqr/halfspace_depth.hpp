#ifndef DOQR_HALFSPACE_DEPTH_HPP
#define DOQR_HALFSPACE_DEPTH_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "core_data.hpp"

/**
 * @file halfspace_depth.hpp
 *
 * @brief Halfspace (Tukey) depth of a point with respect to a sample.
 *
 * The depth of `x` is the smallest fraction of sample points contained in a closed halfspace
 * whose boundary passes through `x`. Sample points equal to `x` are counted in every halfspace.
 */

namespace doqr {

/**
 * @brief A sample fraction `count / n` kept as integers so that comparisons are exact.
 */
struct DepthValue {
    std::size_t count = 0;
    std::size_t n = 1;

    double value() const { return static_cast<double>(count) / static_cast<double>(n); }

    friend bool operator==(const DepthValue& a, const DepthValue& b) { return a.count * b.n == b.count * a.n; }
    friend auto operator<=>(const DepthValue& a, const DepthValue& b) { return a.count * b.n <=> b.count * a.n; }
};

/**
 * @brief Budget and seed for the direction-sampling approximations.
 */
struct DepthConfig {
    std::size_t n_directions = 1000;
    SeedSpec seed;
};

/**
 * @brief Unit directions distributed uniformly on the sphere, as normalized Gaussian vectors.
 *
 * The `k`-th direction does not depend on `count`, so a shorter request is a prefix of a longer one.
 */
inline std::vector<Direction> sample_directions(std::size_t dim, std::size_t count, const SeedSpec& seed) {
    if (dim == 0) {
        throw PreconditionError("dimension must be positive");
    }
    auto engine = seed.engine(0);
    std::normal_distribution<double> normal;
    std::vector<Direction> out;
    out.reserve(count);
    Point coords(dim);
    while (out.size() < count) {
        double norm2 = 0;
        for (auto& c : coords) {
            c = normal(engine);
            norm2 += c * c;
        }
        if (norm2 > 1e-300) {
            out.emplace_back(coords);
        }
    }
    return out;
}

/**
 * @brief Depth of `x` within a univariate sample: `min(#{x_i <= x}, #{x_i >= x}) / n`.
 */
inline DepthValue depth_1d(const Dataset& ds, double x) {
    if (ds.dim() != 1) {
        throw DimensionError("depth_1d requires d = 1");
    }
    std::size_t below = 0, above = 0;
    for (double v : ds.values()) {
        below += (v <= x);
        above += (v >= x);
    }
    return DepthValue{ std::min(below, above), ds.size() };
}

namespace detail {

struct Ray {
    double x;
    double y;
    std::size_t count;
};

// 0 for angles in [0, pi), 1 for [pi, 2 pi).
inline int half_plane(double x, double y) {
    return (y < 0 || (y == 0 && x < 0)) ? 1 : 0;
}

inline void check_query(const Dataset& ds, std::span<const double> x) {
    if (x.size() != ds.dim()) {
        throw DimensionError("query point dimension does not match the dataset");
    }
}

}

/**
 * @brief Exact planar halfspace depth by an angular sweep around `x`, in `O(n log n)`.
 *
 * Sample directions from `x` are sorted exactly by angle and equal directions are merged.
 * For every merged direction, a line through `x` along it is rotated by an infinitesimal amount in
 * both senses; the minimal halfplane count is attained next to one of these lines.
 */
inline DepthValue depth_2d_exact(const Dataset& ds, std::span<const double> x) {
    if (ds.dim() != 2) {
        throw DimensionError("depth_2d_exact requires d = 2");
    }
    detail::check_query(ds, x);

    const std::size_t n = ds.size();
    std::size_t coincident = 0;
    std::vector<detail::Ray> rays;
    rays.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = ds[i][0] - x[0];
        const double dy = ds[i][1] - x[1];
        if (dx == 0 && dy == 0) {
            ++coincident;
        } else {
            rays.push_back({ dx, dy, 1 });
        }
    }
    const std::size_t m = rays.size();
    if (m == 0) {
        return DepthValue{ coincident, n };
    }

    std::sort(rays.begin(), rays.end(), [](const detail::Ray& a, const detail::Ray& b) {
        const int ha = detail::half_plane(a.x, a.y);
        const int hb = detail::half_plane(b.x, b.y);
        if (ha != hb) {
            return ha < hb;
        }
        return cross(a.x, a.y, b.x, b.y) > 0;
    });

    // Within one half plane, a zero cross product means the same ray.
    std::vector<detail::Ray> groups;
    groups.reserve(m);
    for (const auto& r : rays) {
        if (!groups.empty()) {
            auto& last = groups.back();
            if (detail::half_plane(last.x, last.y) == detail::half_plane(r.x, r.y) && cross(last.x, last.y, r.x, r.y) == 0) {
                ++last.count;
                continue;
            }
        }
        groups.push_back(r);
    }

    const std::size_t k = groups.size();
    std::size_t best = m;
    std::size_t j = 1;
    std::size_t inside = 0; // points of groups strictly between i and j, all in the open left half of ray i
    for (std::size_t i = 0; i < k; ++i) {
        if (j <= i) {
            j = i + 1;
            inside = 0;
        }
        const auto& gi = groups[i];
        while (j < i + k) {
            const auto& gj = groups[j % k];
            if (cross(gi.x, gi.y, gj.x, gj.y) > 0) {
                inside += gj.count;
                ++j;
            } else {
                break;
            }
        }

        std::size_t opposite = 0;
        if (j < i + k) {
            const auto& gj = groups[j % k];
            if (cross(gi.x, gi.y, gj.x, gj.y) == 0 && gi.x * gj.x + gi.y * gj.y < 0) {
                opposite = gj.count;
            }
        }

        const std::size_t left = inside;
        const std::size_t right = m - left - gi.count - opposite;
        best = std::min(best, std::min(left, right) + std::min(gi.count, opposite));

        if (j > i + 1) {
            inside -= groups[(i + 1) % k].count;
        }
    }

    return DepthValue{ coincident + best, n };
}

/**
 * @brief Brute-force depth for small samples, used as a testing oracle.
 *
 * For `d = 1` this counts both closed half-lines directly. For `d = 2` it examines, for every
 * sample point, the line through `x` and that point rotated slightly either way, classifying all
 * points by orientation, and also every closed halfplane normal to a 3600-angle grid.
 * Runs in `O(n^2)`; `n` may not exceed `max_n`.
 */
inline DepthValue depth_bruteforce(const Dataset& ds, std::span<const double> x, std::size_t max_n = 30) {
    detail::check_query(ds, x);
    const std::size_t n = ds.size();
    if (n > max_n) {
        throw PreconditionError("brute-force depth is limited to " + std::to_string(max_n) + " points");
    }
    if (ds.dim() == 1) {
        std::size_t below = 0, above = 0;
        for (std::size_t i = 0; i < n; ++i) {
            below += (ds[i][0] <= x[0]);
            above += (ds[i][0] >= x[0]);
        }
        return DepthValue{ std::min(below, above), n };
    }
    if (ds.dim() != 2) {
        throw DimensionError("brute-force depth supports d = 1 and d = 2 only");
    }

    std::vector<std::pair<double, double>> v;
    std::size_t coincident = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = ds[i][0] - x[0];
        const double dy = ds[i][1] - x[1];
        if (dx == 0 && dy == 0) {
            ++coincident;
        } else {
            v.emplace_back(dx, dy);
        }
    }

    std::size_t best = v.size();
    for (const auto& [ax, ay] : v) {
        std::size_t left = 0, right = 0, same = 0, opposite = 0;
        for (const auto& [bx, by] : v) {
            const double c = cross(ax, ay, bx, by);
            if (c > 0) {
                ++left;
            } else if (c < 0) {
                ++right;
            } else if (ax * bx + ay * by > 0) {
                ++same;
            } else {
                ++opposite;
            }
        }
        best = std::min({ best, left + same, left + opposite, right + same, right + opposite });
    }

    for (int step = 0; step < 3600; ++step) {
        const double theta = 2 * std::numbers::pi * step / 3600.0;
        const double wx = std::cos(theta), wy = std::sin(theta);
        std::size_t count = 0;
        for (const auto& [bx, by] : v) {
            count += (wx * bx + wy * by >= 0);
        }
        best = std::min(best, count);
    }

    return DepthValue{ coincident + best, n };
}

/**
 * @brief The sample projected on a fixed set of directions, sorted, for repeated 1D depth queries.
 */
class ProjectedSample {
public:
    ProjectedSample(const Dataset& ds, std::vector<Direction> directions) : n_(ds.size()), dim_(ds.dim()), directions_(std::move(directions)) {
        projections_.resize(directions_.size());
        for (std::size_t k = 0; k < directions_.size(); ++k) {
            if (directions_[k].dim() != dim_) {
                throw DimensionError("direction dimension does not match the dataset");
            }
            auto& proj = projections_[k];
            proj.resize(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                proj[i] = directions_[k].dot(ds[i]);
            }
            std::sort(proj.begin(), proj.end());
        }
    }

    std::size_t size() const { return directions_.size(); }
    const std::vector<Direction>& directions() const { return directions_; }

    /** Closed half-line count of direction `k` on the side of `x` with fewer points. */
    std::size_t count(std::size_t k, std::span<const double> x) const {
        const double px = directions_[k].dot(x);
        const auto& proj = projections_[k];
        const auto below = static_cast<std::size_t>(std::upper_bound(proj.begin(), proj.end(), px) - proj.begin());
        const auto above = static_cast<std::size_t>(proj.end() - std::lower_bound(proj.begin(), proj.end(), px));
        return std::min(below, above);
    }

    /** Minimum of `count()` over the first `limit` directions. */
    DepthValue depth(std::span<const double> x, std::size_t limit = std::numeric_limits<std::size_t>::max()) const {
        if (x.size() != dim_) {
            throw DimensionError("query point dimension does not match the dataset");
        }
        limit = std::min(limit, directions_.size());
        std::size_t best = n_;
        for (std::size_t k = 0; k < limit && best > 0; ++k) {
            best = std::min(best, count(k, x));
        }
        return DepthValue{ best, n_ };
    }

private:
    std::size_t n_;
    std::size_t dim_;
    std::vector<Direction> directions_;
    std::vector<std::vector<double>> projections_;
};

/**
 * @brief Halfspace depth approximated from above by the minimum over sampled directions.
 */
inline DepthValue depth_approx(const Dataset& ds, std::span<const double> x, const DepthConfig& cfg) {
    detail::check_query(ds, x);
    if (cfg.n_directions == 0) {
        throw PreconditionError("at least one direction is required");
    }
    ProjectedSample projected(ds, sample_directions(ds.dim(), cfg.n_directions, cfg.seed));
    return projected.depth(x);
}

/**
 * @brief A deepest point and its depth.
 */
struct TukeyMedian {
    Point point;
    DepthValue depth;
};

/**
 * @brief Controls the deepest-point search.
 *
 * Samples of at most `exhaustive_limit` points are searched exhaustively over the vertices of the
 * arrangement of lines through sample pairs, which is exact. Larger samples use a multi-start
 * pattern search on a shrinking grid, which may return a point slightly shallower than the maximum.
 */
struct MedianOptions {
    std::size_t exhaustive_limit = 60;
    std::size_t n_starts = 5;
    SeedSpec seed;
};

namespace detail {

// Ordering among equally deep candidates: smaller norm first, then lexicographic.
inline bool preferred_tie(std::span<const double> a, std::span<const double> b) {
    const double na = a[0] * a[0] + a[1] * a[1];
    const double nb = b[0] * b[0] + b[1] * b[1];
    if (na != nb) {
        return na < nb;
    }
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline std::vector<Direction> axis_fan(std::size_t count) {
    std::vector<Direction> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
        out.emplace_back(Point{ std::cos(theta), std::sin(theta) });
    }
    return out;
}

inline double midpoint_median(std::vector<double> values) {
    const std::size_t n = values.size();
    std::sort(values.begin(), values.end());
    return 0.5 * (values[(n - 1) / 2] + values[n / 2]);
}

class MedianSearch {
public:
    MedianSearch(const Dataset& ds) : ds_(ds), bound_(ds, axis_fan(16)) {}

    void offer(const Point& y) {
        if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
            return;
        }
        if (has_best_) {
            const std::size_t upper = bound_.depth(y).count;
            if (upper < best_.depth.count || (upper == best_.depth.count && !preferred_tie(y, best_.point))) {
                return;
            }
        }
        const DepthValue d = depth_2d_exact(ds_, y);
        if (!has_best_ || d.count > best_.depth.count || (d.count == best_.depth.count && preferred_tie(y, best_.point))) {
            best_ = TukeyMedian{ y, d };
            has_best_ = true;
        }
    }

    const TukeyMedian& best() const { return best_; }

private:
    const Dataset& ds_;
    ProjectedSample bound_;
    TukeyMedian best_;
    bool has_best_ = false;
};

inline TukeyMedian exhaustive_median(const Dataset& ds) {
    const std::size_t n = ds.size();
    MedianSearch search(ds);
    for (std::size_t i = 0; i < n; ++i) {
        search.offer(ds.point(i));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            search.offer(Point{ 0.5 * (ds[i][0] + ds[j][0]), 0.5 * (ds[i][1] + ds[j][1]) });
        }
    }

    struct Line {
        double px, py, dx, dy;
    };
    std::vector<Line> lines;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = ds[j][0] - ds[i][0];
            const double dy = ds[j][1] - ds[i][1];
            if (dx != 0 || dy != 0) {
                lines.push_back({ ds[i][0], ds[i][1], dx, dy });
            }
        }
    }
    for (std::size_t a = 0; a < lines.size(); ++a) {
        const auto& la = lines[a];
        for (std::size_t b = a + 1; b < lines.size(); ++b) {
            const auto& lb = lines[b];
            const double denom = cross(la.dx, la.dy, lb.dx, lb.dy);
            if (denom == 0) {
                continue;
            }
            const double t = cross(lb.px - la.px, lb.py - la.py, lb.dx, lb.dy) / denom;
            search.offer(Point{ la.px + t * la.dx, la.py + t * la.dy });
        }
    }
    return search.best();
}

inline TukeyMedian pattern_search_median(const Dataset& ds, const MedianOptions& options) {
    const std::size_t n = ds.size();
    const auto xs = ds.column(0);
    const auto ys = ds.column(1);

    std::vector<Point> starts;
    starts.push_back(Point{ midpoint_median(xs), midpoint_median(ys) });
    auto engine = options.seed.engine(1);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t s = 1; s < options.n_starts; ++s) {
        starts.push_back(ds.point(pick(engine)));
    }

    const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
    const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
    double initial_step = 0.25 * std::max(*xmax - *xmin, *ymax - *ymin);
    if (!(initial_step > 0)) {
        initial_step = 1;
    }

    MedianSearch search(ds);
    for (const auto& start : starts) {
        Point current = start;
        DepthValue current_depth = depth_2d_exact(ds, current);
        search.offer(current);

        double step = initial_step;
        int moves = 0;
        while (step > 1e-9 * initial_step && moves < 500) {
            Point best_neighbor;
            DepthValue best_depth = current_depth;
            for (int dx = -1; dx <= 1; ++dx) {
                for (int dy = -1; dy <= 1; ++dy) {
                    if (dx == 0 && dy == 0) {
                        continue;
                    }
                    Point candidate{ current[0] + dx * step, current[1] + dy * step };
                    const DepthValue d = depth_2d_exact(ds, candidate);
                    if (d.count > best_depth.count) {
                        best_depth = d;
                        best_neighbor = std::move(candidate);
                    }
                }
            }
            if (best_depth.count > current_depth.count) {
                current = std::move(best_neighbor);
                current_depth = best_depth;
                ++moves;
            } else {
                step *= 0.5;
            }
        }
        search.offer(current);
    }
    return search.best();
}

}

/**
 * @brief A deepest point of a planar sample.
 *
 * Among equally deep candidates the one with the smallest Euclidean norm wins, then the
 * lexicographically smallest. See `MedianOptions` for when the result is exact.
 */
inline TukeyMedian tukey_median(const Dataset& ds, const MedianOptions& options = {}) {
    if (ds.dim() != 2) {
        throw DimensionError("tukey_median requires d = 2");
    }
    if (ds.size() <= options.exhaustive_limit) {
        return detail::exhaustive_median(ds);
    }
    return detail::pattern_search_median(ds, options);
}

inline DepthValue max_depth(const Dataset& ds, const MedianOptions& options = {}) {
    return tukey_median(ds, options).depth;
}

}

#endif
