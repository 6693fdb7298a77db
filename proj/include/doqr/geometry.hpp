#ifndef DOQR_GEOMETRY_HPP
#define DOQR_GEOMETRY_HPP

#include <algorithm>
#include <span>
#include <vector>

#include "core_data.hpp"

/**
 * @file geometry.hpp
 *
 * @brief Planar convex hulls and containment tests.
 */

namespace doqr {

/**
 * @brief Convex hull of planar points by Andrew's monotone chain.
 *
 * Vertices are returned counterclockwise starting from the lexicographically smallest point,
 * without collinear boundary points. A hull of coincident points has one vertex and a hull of
 * collinear points has the two extreme points.
 */
inline std::vector<Point> convex_hull(std::vector<Point> points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() <= 2) {
        return points;
    }

    std::vector<Point> hull(2 * points.size());
    std::size_t k = 0;
    for (const auto& p : points) {
        while (k >= 2 && orientation(hull[k - 2], hull[k - 1], p) <= 0) {
            --k;
        }
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = points.size() - 1; i-- > 0;) {
        const auto& p = points[i];
        while (k >= lower && orientation(hull[k - 2], hull[k - 1], p) <= 0) {
            --k;
        }
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return hull;
}

/**
 * @brief Whether `p` lies in the closed convex polygon `polygon` (counterclockwise, as from `convex_hull`).
 */
inline bool polygon_contains(const std::vector<Point>& polygon, std::span<const double> p) {
    if (polygon.empty()) {
        return false;
    }
    if (polygon.size() == 1) {
        return polygon[0][0] == p[0] && polygon[0][1] == p[1];
    }
    if (polygon.size() == 2) {
        const auto& a = polygon[0];
        const auto& b = polygon[1];
        if (orientation(a, b, p) != 0) {
            return false;
        }
        return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0])
            && std::min(a[1], b[1]) <= p[1] && p[1] <= std::max(a[1], b[1]);
    }
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const auto& a = polygon[i];
        const auto& b = polygon[(i + 1) % polygon.size()];
        if (orientation(a, b, p) < 0) {
            return false;
        }
    }
    return true;
}

/** Whether convex polygon `inner` lies inside convex polygon `outer`. */
inline bool polygon_inside(const std::vector<Point>& inner, const std::vector<Point>& outer) {
    return std::all_of(inner.begin(), inner.end(), [&](const Point& v) { return polygon_contains(outer, v); });
}

}

#endif
