#ifndef DOQR_TESTS_SUPPORT_HPP
#define DOQR_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include "doqr/core_data.hpp"

namespace doqr::fixtures {

inline Dataset normal_sample(std::size_t n, std::size_t d, std::uint64_t seed) {
    auto engine = SeedSpec{ seed }.engine(7);
    std::normal_distribution<double> normal;
    std::vector<double> values(n * d);
    for (auto& v : values) {
        v = normal(engine);
    }
    return Dataset(d, std::move(values));
}

inline Dataset uniform_sample(std::size_t n, std::size_t d, std::uint64_t seed, double lo = -1, double hi = 1) {
    auto engine = SeedSpec{ seed }.engine(8);
    std::uniform_real_distribution<double> unif(lo, hi);
    std::vector<double> values(n * d);
    for (auto& v : values) {
        v = unif(engine);
    }
    return Dataset(d, std::move(values));
}

/** Small integer coordinates, so that ties, collinear triples and duplicates are common. */
inline Dataset lattice_sample(std::size_t n, std::uint64_t seed, int range = 3) {
    auto engine = SeedSpec{ seed }.engine(9);
    std::uniform_int_distribution<int> unif(-range, range);
    std::vector<double> values(2 * n);
    for (auto& v : values) {
        v = unif(engine);
    }
    return Dataset(2, std::move(values));
}

/**
 * Planar sample symmetric about `center`: `pairs` points `center + q` and their reflections,
 * plus `center` itself when `with_center` is set. Coordinates are dyadic so reflections are exact.
 */
inline Dataset centrosymmetric_sample(std::size_t pairs, std::uint64_t seed, bool with_center = false, Point center = { 0, 0 }) {
    auto engine = SeedSpec{ seed }.engine(10);
    std::uniform_int_distribution<int> unif(-4096, 4096);
    std::vector<double> values;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double qx = unif(engine) / 1024.0;
        const double qy = unif(engine) / 1024.0;
        values.insert(values.end(), { center[0] + qx, center[1] + qy, center[0] - qx, center[1] - qy });
    }
    if (with_center) {
        values.insert(values.end(), center.begin(), center.end());
    }
    return Dataset(2, std::move(values));
}

inline Dataset axis4() {
    return Dataset::from_points({ { 1, 0 }, { -1, 0 }, { 0, 1 }, { 0, -1 } });
}

inline Dataset axis4_center() {
    return Dataset::from_points({ { 1, 0 }, { -1, 0 }, { 0, 1 }, { 0, -1 }, { 0, 0 } });
}

inline Matrix random_nonsingular(std::uint64_t seed) {
    auto engine = SeedSpec{ seed }.engine(11);
    std::uniform_real_distribution<double> unif(-2, 2);
    while (true) {
        Matrix a{ 2, { unif(engine), unif(engine), unif(engine), unif(engine) } };
        if (std::abs(determinant(a)) > 0.1) {
            return a;
        }
    }
}

/** Kolmogorov-Smirnov distance between a sample and a continuous c.d.f. */
template<typename Cdf>
double ks_distance(std::vector<double> sample, Cdf cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double out = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        out = std::max({ out, std::abs(f - i / n), std::abs((i + 1) / n - f) });
    }
    return out;
}

}

#endif
