// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

#include "cli.hpp"
#include "doqr/doqr.hpp"
#include "test_support.hpp"

using namespace doqr;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double time_limit;
    std::function<Outcome()> check;
};

std::string fmt(const char* pattern, double a, double b = 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

Outcome exact_oracle() {
    std::size_t mismatches = 0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        const std::size_t n = 1 + rep % 15;
        const Dataset ds = rep % 2 ? fixtures::lattice_sample(n, rep) : fixtures::normal_sample(n, 2, rep);
        auto engine = SeedSpec{ rep }.engine(1);
        std::uniform_int_distribution<int> grid(-4, 4);
        std::normal_distribution<double> normal;
        for (int q = 0; q < 10; ++q) {
            Point x;
            if (q < 3) {
                x = ds.point(static_cast<std::size_t>(q) % n);
            } else if (rep % 2) {
                x = { grid(engine) * 0.5, grid(engine) * 0.5 };
            } else {
                x = { normal(engine), normal(engine) };
            }
            mismatches += depth_2d_exact(ds, x) != depth_bruteforce(ds, x);
        }
    }
    return { mismatches == 0, std::to_string(mismatches) + " mismatches in 1000 queries" };
}

Outcome affine_invariance() {
    std::size_t mismatches = 0;
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
        const auto ds = fixtures::normal_sample(30, 2, 100 + rep);
        for (std::uint64_t m = 0; m < 20; ++m) {
            const Matrix a = fixtures::random_nonsingular(rep * 100 + m);
            const Point b{ 0.25 * m, -0.5 * rep };
            const auto moved = affine_transform(ds, a, b);
            for (std::size_t i = 0; i < ds.size(); ++i) {
                // Sample points map onto sample points exactly.
                mismatches += depth_2d_exact(moved, moved[i]).count != depth_2d_exact(ds, ds[i]).count;
            }
            for (std::size_t i = 0; i < 5; ++i) {
                const Point x{ 0.3 * i - 0.6, 0.1 * i };
                Point y = a.apply(x);
                y[0] += b[0];
                y[1] += b[1];
                mismatches += depth_2d_exact(moved, y).count != depth_2d_exact(ds, x).count;
            }
        }
    }
    return { mismatches == 0, std::to_string(mismatches) + " mismatches over 200 maps" };
}

Outcome normal_depth_law() {
    const auto ds = fixtures::normal_sample(20000, 2, 2024);
    double worst = 0;
    for (const Point& x : std::vector<Point>{ { 0, 0 }, { 1, 0 }, { 0, 1.5 }, { 2, 0 } }) {
        worst = std::max(worst, std::abs(depth_2d_exact(ds, x).value() - hd_normal(std::hypot(x[0], x[1]))));
    }
    return { worst <= 0.02, fmt("max |error| %.4f", worst) };
}

std::vector<double> normal_outlyingness(std::size_t n, int d, std::uint64_t seed) {
    const auto ds = fixtures::normal_sample(n, static_cast<std::size_t>(d), seed);
    std::vector<double> out;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        double r2 = 0;
        for (double c : ds[i]) {
            r2 += c * c;
        }
        out.push_back(oh_normal(std::sqrt(r2)));
    }
    return out;
}

Outcome uniform_in_one_dimension() {
    double grid_error = 0;
    for (int k = 1; k <= 99; ++k) {
        grid_error = std::max(grid_error, std::abs(oh_cdf(k / 100.0, 1) - k / 100.0));
    }
    const double ks = fixtures::ks_distance(normal_outlyingness(20000, 1, 41), [](double l) { return l; });
    return { grid_error <= 1e-10 && ks <= 0.02, fmt("grid error %.2e, KS %.4f", grid_error, ks) };
}

Outcome outlyingness_law() {
    double worst = 0;
    for (int d : { 2, 3, 5 }) {
        worst = std::max(worst, fixtures::ks_distance(normal_outlyingness(20000, d, 50 + d), [d](double l) { return oh_cdf(l, d); }));
    }
    return { worst <= 0.02, fmt("max KS %.4f", worst) };
}

Outcome density_divergence() {
    bool ok = true;
    double min_ratio = INFINITY;
    for (int d = 2; d <= 5; ++d) {
        for (int k = 2; k <= 99; ++k) {
            ok = ok && oh_pdf(k / 100.0, d) > oh_pdf((k - 1) / 100.0, d);
        }
        min_ratio = std::min(min_ratio, oh_pdf(0.999, d) / oh_pdf(0.5, d));
    }
    double uniform_error = 0;
    for (int k = 1; k <= 999; ++k) {
        uniform_error = std::max(uniform_error, std::abs(oh_pdf(k / 1000.0, 1) - 1));
    }
    ok = ok && min_ratio > 4 && uniform_error <= 1e-10;
    return { ok, fmt("min pdf(0.999)/pdf(0.5) %.3f, d=1 error %.2e", min_ratio, uniform_error) };
}

Outcome cdf_pdf_consistency() {
    const double h = 1e-6;
    double worst = 0;
    for (int d = 1; d <= 5; ++d) {
        for (int k = 1; k <= 9; ++k) {
            const double lambda = k / 10.0;
            const double numeric = (oh_cdf(lambda + h, d) - oh_cdf(lambda - h, d)) / (2 * h);
            const double exact = oh_pdf(lambda, d);
            worst = std::max(worst, std::abs(numeric - exact) / exact);
        }
    }
    return { worst <= 1e-4, fmt("max relative error %.2e", worst) };
}

Outcome doqr_round_trip() {
    const auto ds = fixtures::normal_sample(500, 2, 8);
    const HalfspaceDoqr model(ds);
    const double tolerance = 2.0 / 500 + 1e-3;
    auto engine = SeedSpec{ 8 }.engine(3);
    std::normal_distribution<double> normal(0, 0.7);
    double worst = 0;
    int tested = 0;
    while (tested < 100) {
        const Point x{ normal(engine), normal(engine) };
        if (depth_2d_exact(ds, x).count == 0) {
            continue;
        }
        ++tested;
        const auto u = model.rank(x).u;
        const auto back = model.rank(model.quantile(u)).u;
        worst = std::max({ worst, std::abs(back[0] - u[0]), std::abs(back[1] - u[1]) });
    }
    return { worst <= tolerance, fmt("max sup-norm error %.5f (tolerance %.4f)", worst, tolerance) };
}

Outcome sign_test_at_center() {
    double worst_excess = -INFINITY;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        const Point center{ 0.5 * rep, -0.25 * rep };
        const auto ds = fixtures::centrosymmetric_sample(8 + rep, 900 + rep, rep % 3 == 0, center);
        const double stat = sign_test(ds, center).statistic;
        worst_excess = std::max(worst_excess, stat - 2.0 / ds.size());
    }
    return { worst_excess <= 0, fmt("max statistic - 2/n = %.4f", worst_excess) };
}

Outcome trimmed_mean_symmetry() {
    double worst = 0;
    std::size_t levels = 0;
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
        const Point center{ 1.5 - 0.3 * rep, -2.0 + 0.7 * rep };
        const auto ds = fixtures::centrosymmetric_sample(10 + rep, 700 + rep, rep % 2 == 0, center);
        const HalfspaceDoqr model(ds);
        for (const auto& level : model.attained_levels()) {
            const auto mean = model.trimmed_mean(level.value());
            worst = std::max({ worst, std::abs(mean[0] - center[0]), std::abs(mean[1] - center[1]) });
            ++levels;
        }
    }
    return { worst <= 1e-9, fmt("max deviation %.2e over %.0f levels", worst, static_cast<double>(levels)) };
}

Outcome nesting() {
    std::size_t failures = 0, pairs = 0;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        const auto ds = rep % 2 ? fixtures::lattice_sample(40, 600 + rep, 5) : fixtures::normal_sample(80, 2, 600 + rep);
        const HalfspaceDoqr model(ds);
        std::vector<CentralRegion> regions;
        for (const auto& level : model.attained_levels()) {
            regions.push_back(model.central_region(level.value()));
        }
        for (std::size_t a = 0; a + 1 < regions.size(); ++a) {
            ++pairs;
            failures += !polygon_inside(regions[a + 1].vertices, regions[a].vertices);
        }
    }
    return { failures == 0, std::to_string(failures) + " failures in " + std::to_string(pairs) + " consecutive pairs" };
}

Outcome masking_reproduction() {
    const double fpr = 0.01;
    const std::size_t trials = 200;
    const DepthConfig cfg{ 1000, SeedSpec{ 0 } };
    const ExperimentOptions options{ std::max(1u, std::thread::hardware_concurrency()), 10 };

    const auto rows = compare_identifiers(default_masking_grid(fpr), fpr, trials, cfg, options);
    std::ostringstream table;
    write_comparison_csv(table, rows);
    std::printf("%s", table.str().c_str());
    bool separated = false;
    for (const auto& row : rows) {
        separated = separated || row.halfspace.masking_rate > row.projection.masking_rate;
    }

    ContaminationSpec clean;
    clean.n_clean = 100;
    clean.d = 2;
    const auto report = masking_experiment(clean, fpr, trials, cfg, options);
    const double tolerance = 3 * std::sqrt(fpr * (1 - fpr) / static_cast<double>(clean.n_clean));
    const bool calibrated = std::abs(report.halfspace.fp_rate - fpr) <= tolerance && std::abs(report.projection.fp_rate - fpr) <= tolerance;
    return { separated && calibrated,
             std::string(separated ? "halfspace masks more in some row" : "no row with halfspace masking above projection") + fmt(", FP rates %.4f / %.4f", report.halfspace.fp_rate, report.projection.fp_rate) + fmt(" (tolerance %.4f)", tolerance) };
}

Outcome cli_golden() {
    struct Case {
        std::vector<std::string> args;
        std::string file;
    };
    const std::string data = DOQR_TEST_DATA_DIR;
    const std::vector<Case> cases{
        { { "depth", "--in", data + "/axis4.csv", "--query", "0,0", "--seed", "0" }, "depth_axis4.txt" },
        { { "oracle", "--pdf", "--d", "1", "--lambda", "0.3", "--seed", "0" }, "oracle_pdf_d1.txt" },
        { { "quantile", "--in", data + "/axis4.csv", "--u", "0,0", "--seed", "0" }, "quantile_axis4.txt" },
    };
    std::size_t matched = 0;
    for (const auto& c : cases) {
        std::ifstream in(std::string(DOQR_TEST_GOLDEN_DIR) + "/" + c.file, std::ios::binary);
        std::stringstream expected;
        expected << in.rdbuf();
        std::ostringstream out, err;
        const int code = cli::run(c.args, out, err);
        matched += code == 0 && !expected.str().empty() && out.str() == expected.str();
    }
    return { matched == cases.size(), std::to_string(matched) + "/3 byte-identical" };
}

}

int main() {
    const std::vector<Criterion> criteria{
        { 1, "exact depth equals brute force", 10, exact_oracle },
        { 2, "affine invariance of exact depth", 10, affine_invariance },
        { 3, "normal depth law", 60, normal_depth_law },
        { 4, "uniform outlyingness law in one dimension", 60, uniform_in_one_dimension },
        { 5, "outlyingness law for d = 2, 3, 5", 30, outlyingness_law },
        { 6, "density increases without bound", 60, density_divergence },
        { 7, "density is the derivative of the c.d.f.", 60, cdf_pdf_consistency },
        { 8, "rank/quantile round trip", 60, doqr_round_trip },
        { 9, "sign statistic at the symmetry center", 60, sign_test_at_center },
        { 10, "trimmed mean at the symmetry center", 60, trimmed_mean_symmetry },
        { 11, "central regions nest", 60, nesting },
        { 12, "masking reproduction and calibration", 300, masking_reproduction },
        { 13, "CLI golden files", 60, cli_golden },
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.check();
        } catch (const std::exception& e) {
            outcome = { false, std::string("exception: ") + e.what() };
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds < c.time_limit;
        const bool pass = outcome.pass && in_time;
        failed += !pass;
        std::printf("%s [%d] %s (%.2fs, limit %.0fs): %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds, c.time_limit,
                    outcome.detail.c_str(), in_time ? "" : ", over time limit");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
