#ifndef DOQR_NORMAL_ORACLE_HPP
#define DOQR_NORMAL_ORACLE_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "core_data.hpp"

/**
 * @file normal_oracle.hpp
 *
 * @brief Closed forms for halfspace depth and outlyingness under the standard d-variate normal model.
 *
 * For `X ~ N(0, I_d)`, the halfspace depth of `x` is `Phi(-|x|)` and the halfspace outlyingness
 * `O_H(x) = 1 - 2 Phi(-|x|)` takes values in `[0, 1)`. The law of `O_H(X)` follows from
 * `|X|^2 ~ chi^2_d`, which gives the c.d.f., density and false-positive thresholds below.
 */

namespace doqr {

namespace detail {

inline void require_dim(int d) {
    if (d < 1) {
        throw PreconditionError("dimension must be at least 1");
    }
}

inline void require_open_probability(double p, const char* name) {
    if (!(p > 0 && p < 1)) {
        throw PreconditionError(std::string(name) + " must lie in (0, 1)");
    }
}

// Lower regularized incomplete gamma by its power series; converges quickly for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma by the modified Lentz continued fraction, for x >= a + 1.
inline double gamma_q_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1 - a;
    double c = 1 / tiny;
    double d = 1 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1) < 1e-16) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}

/** Regularized lower incomplete gamma function `P(a, x)`. */
inline double gamma_p(double a, double x) {
    if (!(a > 0) || x < 0) {
        throw PreconditionError("gamma_p requires a > 0 and x >= 0");
    }
    if (x == 0) {
        return 0;
    }
    if (x < a + 1) {
        return detail::gamma_p_series(a, x);
    }
    return 1 - detail::gamma_q_fraction(a, x);
}

inline double std_normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi);
}

inline double std_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/**
 * @brief Inverse of the standard normal c.d.f.
 *
 * Wichura's AS 241 rational approximation followed by one Newton step against `std_normal_cdf`.
 */
inline double std_normal_quantile(double p) {
    detail::require_open_probability(p, "probability");

    const double q = p - 0.5;
    double z;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        z = q * (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r + 6.7265770927008700853e+4) * r
                    + 4.5921953931549871457e+4) * r + 1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r
                  + 1.3314166789178437745e+2) * r + 3.3871328727963666080e0)
            / (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r + 3.9307895800092710610e+4) * r
                   + 2.1213794301586595867e+4) * r + 5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r
                 + 4.2313330701600911252e+1) * r + 1.0);
    } else {
        double r = q < 0 ? p : 1 - p;
        r = std::sqrt(-std::log(r));
        if (r <= 5) {
            r -= 1.6;
            z = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r + 2.41780725177450611770e-1) * r
                     + 1.27045825245236838258e0) * r + 3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r
                   + 4.63033784615654529590e0) * r + 1.42343711074968357734e0)
                / (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r + 1.51986665636164571966e-2) * r
                       + 1.48103976427480074590e-1) * r + 6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r
                     + 2.05319162663775882187e0) * r + 1.0);
        } else {
            r -= 5;
            z = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 1.24266094738807843860e-3) * r
                     + 2.65321895265761230930e-2) * r + 2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r
                   + 5.46378491116411436990e0) * r + 6.65790464350110377720e0)
                / (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r + 1.84631831751005468180e-5) * r
                       + 7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r
                     + 5.99832206555887937690e-1) * r + 1.0);
        }
        if (q < 0) {
            z = -z;
        }
    }

    const double density = std_normal_pdf(z);
    if (density > 0) {
        z -= (std_normal_cdf(z) - p) / density;
    }
    return z;
}

/** `P(chi^2_d <= t)`. */
inline double chi2_cdf(double t, int d) {
    detail::require_dim(d);
    if (t < 0) {
        throw PreconditionError("chi-square argument must be nonnegative");
    }
    return gamma_p(0.5 * d, 0.5 * t);
}

inline double chi2_pdf(double t, int d) {
    detail::require_dim(d);
    if (t <= 0) {
        return d == 2 ? 0.5 : (d == 1 ? std::numeric_limits<double>::infinity() : 0.0);
    }
    const double a = 0.5 * d;
    return std::exp((a - 1) * std::log(t) - 0.5 * t - a * std::numbers::ln2 - std::lgamma(a));
}

/**
 * @brief Inverse of `chi2_cdf` in its first argument.
 *
 * Wilson-Hilferty start, then Newton steps kept inside a shrinking bisection bracket.
 */
inline double chi2_quantile(double p, int d) {
    detail::require_dim(d);
    detail::require_open_probability(p, "probability");

    const double k = 2.0 / (9.0 * d);
    const double z = std_normal_quantile(p);
    double t = d * std::pow(std::max(1 - k + z * std::sqrt(k), 0.05), 3);

    double lo = 0;
    double hi = std::max(t, 1.0);
    while (chi2_cdf(hi, d) < p) {
        lo = hi;
        hi *= 2;
    }
    if (!(t > lo && t < hi)) {
        t = 0.5 * (lo + hi);
    }

    for (int iter = 0; iter < 200; ++iter) {
        const double f = chi2_cdf(t, d) - p;
        if (f == 0) {
            return t;
        }
        if (f < 0) {
            lo = t;
        } else {
            hi = t;
        }
        const double slope = chi2_pdf(t, d);
        double next = slope > 0 && std::isfinite(slope) ? t - f / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - t) <= 1e-15 * std::max(t, 1e-300) || hi - lo <= 1e-15 * hi) {
            return next;
        }
        t = next;
    }
    return t;
}

/** Halfspace depth of a point at Euclidean norm `x_norm` under `N(0, I_d)`, for any `d`. */
inline double hd_normal(double x_norm) {
    if (x_norm < 0) {
        throw PreconditionError("norm must be nonnegative");
    }
    return std_normal_cdf(-x_norm);
}

/** Halfspace outlyingness `1 - 2 Phi(-|x|)`, in `[0, 1)`. */
inline double oh_normal(double x_norm) {
    return 1 - 2 * hd_normal(x_norm);
}

namespace detail {

inline void require_lambda(double lambda) {
    if (!(lambda >= 0 && lambda < 1)) {
        throw PreconditionError("outlyingness level must lie in [0, 1)");
    }
}

}

/** C.d.f. of `O_H(X)` for `X ~ N(0, I_d)`: `P(chi^2_d <= [Phi^{-1}((1 + lambda) / 2)]^2)`. */
inline double oh_cdf(double lambda, int d) {
    detail::require_lambda(lambda);
    detail::require_dim(d);
    if (lambda == 0) {
        return 0;
    }
    const double q = std_normal_quantile(0.5 * (1 + lambda));
    return chi2_cdf(q * q, d);
}

/**
 * @brief Density of `O_H(X)` for `X ~ N(0, I_d)`.
 *
 * Uniform for `d = 1`; for `d >= 2` it increases without bound as `lambda -> 1`.
 * The formula is evaluated as is near 1, never clipped.
 */
inline double oh_pdf(double lambda, int d) {
    if (!(lambda > 0 && lambda < 1)) {
        throw PreconditionError("outlyingness level must lie in (0, 1)");
    }
    detail::require_dim(d);
    const double q = std_normal_quantile(0.5 * (1 + lambda));
    const double scale = std::sqrt(2 * std::numbers::pi) * std::pow(0.5, 0.5 * d) / std::tgamma(0.5 * d);
    return scale * std::pow(q, d - 1);
}

/**
 * @brief Outlyingness level exceeded with probability `fpr` under the normal model.
 *
 * Solves `oh_cdf(lambda, d) = 1 - fpr`.
 */
inline double oh_threshold(double fpr, int d) {
    detail::require_open_probability(fpr, "false positive rate");
    detail::require_dim(d);
    const double radius = std::sqrt(chi2_quantile(1 - fpr, d));
    return 2 * std_normal_cdf(radius) - 1;
}

}

#endif
