#ifndef DOQR_CORE_DATA_HPP
#define DOQR_CORE_DATA_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/**
 * @file core_data.hpp
 *
 * @brief Dataset representation, CSV input/output, affine maps and seeded random streams.
 */

namespace doqr {

/**
 * @brief Base class for all errors raised by this library.
 */
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief An input file could not be read or parsed.
 *
 * `row()` and `column()` are 1-based and refer to the physical line and field of the file.
 * They are zero when the error is not tied to a location (e.g. the file could not be opened).
 */
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0) :
        Error(format(what, row, column)), row_(row), column_(column) {}

    std::size_t row() const { return row_; }
    std::size_t column() const { return column_; }

private:
    static std::string format(const std::string& what, std::size_t row, std::size_t column) {
        if (row == 0) {
            return what;
        }
        std::string out = what + " at row " + std::to_string(row);
        if (column != 0) {
            out += ", column " + std::to_string(column);
        }
        return out;
    }

    std::size_t row_;
    std::size_t column_;
};

/**
 * @brief An operation was called on data of the wrong dimension.
 */
class DimensionError : public Error {
public:
    using Error::Error;
};

/**
 * @brief A documented precondition of an operation does not hold.
 */
class PreconditionError : public Error {
public:
    using Error::Error;
};

using Point = std::vector<double>;

/**
 * @brief An ordered collection of `n` points in `d` dimensions, stored row-major.
 *
 * Instances are immutable once constructed. All coordinates are finite and `n >= 1`.
 */
class Dataset {
public:
    Dataset(std::size_t dim, std::vector<double> values) : dim_(dim), values_(std::move(values)) {
        if (dim_ == 0) {
            throw PreconditionError("dataset dimension must be positive");
        }
        if (values_.empty()) {
            throw PreconditionError("dataset must contain at least one point");
        }
        if (values_.size() % dim_ != 0) {
            throw DimensionError("dataset storage is not a multiple of the dimension");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw PreconditionError("non-finite coordinate in point " + std::to_string(i / dim_));
            }
        }
    }

    static Dataset from_points(const std::vector<Point>& points) {
        if (points.empty()) {
            throw PreconditionError("dataset must contain at least one point");
        }
        const std::size_t dim = points.front().size();
        std::vector<double> values;
        values.reserve(points.size() * dim);
        for (const auto& p : points) {
            if (p.size() != dim) {
                throw DimensionError("points have inconsistent dimensions");
            }
            values.insert(values.end(), p.begin(), p.end());
        }
        return Dataset(dim, std::move(values));
    }

    std::size_t size() const { return values_.size() / dim_; }
    std::size_t dim() const { return dim_; }

    std::span<const double> operator[](std::size_t i) const {
        return std::span<const double>(values_.data() + i * dim_, dim_);
    }

    Point point(std::size_t i) const {
        auto row = (*this)[i];
        return Point(row.begin(), row.end());
    }

    std::vector<Point> points() const {
        std::vector<Point> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) {
            out.push_back(point(i));
        }
        return out;
    }

    /** Values of coordinate `j` across all points. */
    std::vector<double> column(std::size_t j) const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = values_[i * dim_ + j];
        }
        return out;
    }

    const std::vector<double>& values() const { return values_; }

    bool operator==(const Dataset&) const = default;

private:
    std::size_t dim_;
    std::vector<double> values_;
};

/**
 * @brief A unit vector. Construction normalizes and checks the norm.
 */
class Direction {
public:
    explicit Direction(Point coords) : coords_(std::move(coords)) {
        double norm = 0;
        for (double c : coords_) {
            norm += c * c;
        }
        norm = std::sqrt(norm);
        if (!(norm > 0) || !std::isfinite(norm)) {
            throw PreconditionError("direction must be a nonzero finite vector");
        }
        for (double& c : coords_) {
            c /= norm;
        }
    }

    std::size_t dim() const { return coords_.size(); }
    const Point& coords() const { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }

    double dot(std::span<const double> x) const {
        double out = 0;
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            out += coords_[i] * x[i];
        }
        return out;
    }

private:
    Point coords_;
};

/**
 * @brief Reproducible random streams derived from one 64-bit master seed.
 *
 * Stream `i` is seeded from `(master_seed, i)` through two rounds of the SplitMix64 finalizer.
 * It does not depend on which thread consumes it or on the order in which streams are requested.
 */
struct SeedSpec {
    std::uint64_t master_seed = 0;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /** Seed specification for substream `index`, usable as a master seed in turn. */
    SeedSpec derive(std::uint64_t index) const {
        return SeedSpec{ mix(mix(master_seed) ^ mix(index + 0x632BE59BD9B4E019ULL)) };
    }

    /** Engine for substream `index`. */
    std::mt19937_64 engine(std::uint64_t index = 0) const {
        return std::mt19937_64(derive(index).master_seed);
    }

    bool operator==(const SeedSpec&) const = default;
};

/**
 * @brief Read a comma-separated file of decimal numbers.
 *
 * No quoting is supported; the delimiter is always `,` and the decimal point `.`.
 * Blank lines are skipped. When `has_header` is set, the first non-blank line is discarded.
 */
inline Dataset parse_csv(std::istream& input, bool has_header) {
    std::vector<double> values;
    std::size_t ncols = 0;
    std::size_t row = 0;
    bool header_pending = has_header;
    std::string line;

    while (std::getline(input, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        if (header_pending) {
            header_pending = false;
            continue;
        }

        std::size_t count = 0;
        std::size_t start = 0;
        while (true) {
            std::size_t end = line.find(',', start);
            std::string cell = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
            ++count;

            const auto first = cell.find_first_not_of(" \t");
            const auto last = cell.find_last_not_of(" \t");
            if (first == std::string::npos) {
                throw ParseError("empty cell", row, count);
            }
            cell = cell.substr(first, last - first + 1);

            std::size_t used = 0;
            double value = 0;
            try {
                value = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw ParseError("non-numeric cell '" + cell + "'", row, count);
            }
            if (used != cell.size()) {
                throw ParseError("non-numeric cell '" + cell + "'", row, count);
            }
            if (!std::isfinite(value)) {
                throw ParseError("non-finite cell '" + cell + "'", row, count);
            }
            values.push_back(value);

            if (end == std::string::npos) {
                break;
            }
            start = end + 1;
        }

        if (ncols == 0) {
            ncols = count;
        } else if (count != ncols) {
            throw ParseError("ragged row: expected " + std::to_string(ncols) + " columns, found " + std::to_string(count), row);
        }
    }

    if (values.empty()) {
        throw ParseError("no data rows");
    }
    return Dataset(ncols, std::move(values));
}

inline Dataset load_csv(const std::string& path, bool has_header) {
    std::ifstream input(path);
    if (!input) {
        throw ParseError("cannot open '" + path + "'");
    }
    return parse_csv(input, has_header);
}

/** Shortest-round-trip rendering with 17 significant digits. */
inline std::string format_exact(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

/** Rendering with 12 significant digits, used for reports and command-line output. */
inline std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

inline std::string format_point(std::span<const double> x) {
    std::string out;
    for (std::size_t j = 0; j < x.size(); ++j) {
        out += (j ? "," : "") + format_number(x[j]);
    }
    return out;
}

inline void write_csv(std::ostream& output, const Dataset& ds, const std::vector<std::string>& header = {}) {
    if (!header.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            output << (j ? "," : "") << header[j];
        }
        output << '\n';
    }
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto row = ds[i];
        for (std::size_t j = 0; j < row.size(); ++j) {
            output << (j ? "," : "") << format_exact(row[j]);
        }
        output << '\n';
    }
}

inline void save_csv(const std::string& path, const Dataset& ds, const std::vector<std::string>& header = {}) {
    std::ofstream output(path);
    if (!output) {
        throw ParseError("cannot open '" + path + "' for writing");
    }
    write_csv(output, ds, header);
}

/**
 * @brief A square real matrix stored row-major.
 */
struct Matrix {
    std::size_t dim = 0;
    std::vector<double> values;

    double operator()(std::size_t i, std::size_t j) const { return values[i * dim + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values[i * dim + j]; }

    static Matrix identity(std::size_t d) {
        Matrix out{ d, std::vector<double>(d * d, 0.0) };
        for (std::size_t i = 0; i < d; ++i) {
            out(i, i) = 1;
        }
        return out;
    }

    Point apply(std::span<const double> x) const {
        Point out(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                out[i] += (*this)(i, j) * x[j];
            }
        }
        return out;
    }
};

namespace detail {

// LU with partial pivoting; returns the determinant, or 0 for an exactly singular matrix.
inline double lu_decompose(Matrix& a, std::vector<std::size_t>& perm) {
    const std::size_t d = a.dim;
    perm.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        perm[i] = i;
    }
    double det = 1;
    for (std::size_t k = 0; k < d; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < d; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(pivot, k))) {
                pivot = i;
            }
        }
        if (a(pivot, k) == 0) {
            return 0;
        }
        if (pivot != k) {
            for (std::size_t j = 0; j < d; ++j) {
                std::swap(a(k, j), a(pivot, j));
            }
            std::swap(perm[k], perm[pivot]);
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < d; ++i) {
            a(i, k) /= a(k, k);
            for (std::size_t j = k + 1; j < d; ++j) {
                a(i, j) -= a(i, k) * a(k, j);
            }
        }
    }
    return det;
}

}

inline double determinant(const Matrix& a) {
    Matrix copy = a;
    std::vector<std::size_t> perm;
    return detail::lu_decompose(copy, perm);
}

inline Matrix inverse(const Matrix& a) {
    Matrix lu = a;
    std::vector<std::size_t> perm;
    if (detail::lu_decompose(lu, perm) == 0) {
        throw PreconditionError("matrix is singular");
    }
    const std::size_t d = a.dim;
    Matrix out{ d, std::vector<double>(d * d, 0.0) };
    for (std::size_t col = 0; col < d; ++col) {
        std::vector<double> x(d);
        for (std::size_t i = 0; i < d; ++i) {
            x[i] = perm[i] == col ? 1.0 : 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                x[i] -= lu(i, j) * x[j];
            }
        }
        for (std::size_t i = d; i-- > 0;) {
            for (std::size_t j = i + 1; j < d; ++j) {
                x[i] -= lu(i, j) * x[j];
            }
            x[i] /= lu(i, i);
        }
        for (std::size_t i = 0; i < d; ++i) {
            out(i, col) = x[i];
        }
    }
    return out;
}

/**
 * @brief Replace every point `x` by `A x + b`.
 *
 * `A` must satisfy `|det A| > 1e-12`.
 */
inline Dataset affine_transform(const Dataset& ds, const Matrix& A, const Point& b) {
    if (A.dim != ds.dim() || A.values.size() != A.dim * A.dim || b.size() != ds.dim()) {
        throw DimensionError("affine map does not match the dataset dimension");
    }
    if (!(std::abs(determinant(A)) > 1e-12)) {
        throw PreconditionError("affine map is singular");
    }
    std::vector<double> values;
    values.reserve(ds.values().size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        Point y = A.apply(ds[i]);
        for (std::size_t j = 0; j < y.size(); ++j) {
            values.push_back(y[j] + b[j]);
        }
    }
    return Dataset(ds.dim(), std::move(values));
}

/**
 * @brief Orientation of the triangle (a, b, c): positive if counterclockwise, negative if clockwise, zero if collinear.
 *
 * The two products are formed with their rounding errors recovered by `fma`, so the sign is exact
 * unless the two products agree to within a few units in the last place of their difference.
 */
inline double cross(double ax, double ay, double bx, double by) {
    const double p = ax * by;
    const double q = ay * bx;
    const double ep = std::fma(ax, by, -p);
    const double eq = std::fma(ay, bx, -q);
    return (p - q) + (ep - eq);
}

inline double orientation(std::span<const double> a, std::span<const double> b, std::span<const double> c) {
    return cross(b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1]);
}

/**
 * @brief Whether no three points of a planar dataset are collinear.
 */
inline bool general_position_2d(const Dataset& ds) {
    if (ds.dim() != 2) {
        throw DimensionError("general position test requires d = 2");
    }
    const std::size_t n = ds.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                if (orientation(ds[i], ds[j], ds[k]) == 0) {
                    return false;
                }
            }
        }
    }
    return true;
}

}

#endif
