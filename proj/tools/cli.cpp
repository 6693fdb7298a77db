#include "cli.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "doqr/doqr.hpp"

namespace doqr::cli {

namespace {

using json = nlohmann::ordered_json;

struct Options {
    std::string in;
    bool header = false;
    std::string query;
    std::string u;
    std::string theta;
    std::optional<double> alpha;
    std::size_t directions = 1000;
    std::uint64_t seed = 0;
    std::optional<double> fpr;
    std::optional<std::size_t> trials;
    std::string out;
    bool as_json = false;

    // oracle
    int d = 2;
    std::optional<double> lambda;
    bool cdf = false;
    bool pdf = false;
    bool threshold = false;

    // masking
    std::string config;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Point parse_vector(const std::string& text, const char* flag) {
    Point out;
    std::stringstream stream(text);
    std::string cell;
    while (std::getline(stream, cell, ',')) {
        std::size_t used = 0;
        double value = 0;
        try {
            value = std::stod(cell, &used);
        } catch (const std::exception&) {
            throw UsageError(std::string("invalid number '") + cell + "' in " + flag);
        }
        if (used != cell.size() || !std::isfinite(value)) {
            throw UsageError(std::string("invalid number '") + cell + "' in " + flag);
        }
        out.push_back(value);
    }
    if (out.empty()) {
        throw UsageError(std::string(flag) + " requires comma-separated numbers");
    }
    return out;
}

Point require_vector(const std::string& text, const char* flag, std::size_t dim) {
    if (text.empty()) {
        throw UsageError(std::string(flag) + " is required");
    }
    Point p = parse_vector(text, flag);
    if (p.size() != dim) {
        throw DimensionError(std::string(flag) + " has " + std::to_string(p.size()) + " coordinates, expected " + std::to_string(dim));
    }
    return p;
}

double require_alpha(const Options& opt) {
    if (!opt.alpha) {
        throw UsageError("--alpha is required");
    }
    return *opt.alpha;
}

Dataset load(const Options& opt) {
    if (opt.in.empty()) {
        throw UsageError("--in is required");
    }
    return load_csv(opt.in, opt.header);
}

DepthConfig depth_config(const Options& opt) {
    if (opt.directions < 1) {
        throw UsageError("--directions must be positive");
    }
    return DepthConfig{ opt.directions, SeedSpec{ opt.seed } };
}

MedianOptions median_options(const Options& opt) {
    MedianOptions m;
    m.seed = SeedSpec{ opt.seed };
    return m;
}

HalfspaceDoqr planar_model(const Options& opt) {
    Dataset ds = load(opt);
    if (ds.dim() != 2) {
        throw DimensionError("this command requires planar (d = 2) data");
    }
    return HalfspaceDoqr(std::move(ds), median_options(opt));
}

json point_json(std::span<const double> x) {
    return json(std::vector<double>(x.begin(), x.end()));
}

std::vector<std::string> coordinate_names(std::size_t dim) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < dim; ++j) {
        out.push_back("x" + std::to_string(j));
    }
    return out;
}

// Writes one value per sample point as CSV (coordinates then value) or JSON.
void emit_table(std::ostream& out, const Options& opt, const Dataset& ds, const std::string& column, const std::vector<double>& values) {
    if (opt.as_json) {
        json rows = json::array();
        for (std::size_t i = 0; i < ds.size(); ++i) {
            rows.push_back({ { "point", point_json(ds[i]) }, { column, values[i] } });
        }
        out << rows.dump(2) << '\n';
        return;
    }
    for (const auto& name : coordinate_names(ds.dim())) {
        out << name << ',';
    }
    out << column << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out << format_point(ds[i]) << ',' << format_number(values[i]) << '\n';
    }
}

void emit_scalar(std::ostream& out, const Options& opt, const std::string& name, double value) {
    if (opt.as_json) {
        out << json{ { name, value } }.dump(2) << '\n';
    } else {
        out << format_number(value) << '\n';
    }
}

void emit_point(std::ostream& out, const Options& opt, const std::string& name, std::span<const double> x) {
    if (opt.as_json) {
        out << json{ { name, point_json(x) } }.dump(2) << '\n';
    } else {
        out << format_point(x) << '\n';
    }
}

double halfspace_depth_any(const Dataset& ds, std::span<const double> x, const DepthConfig& cfg) {
    if (ds.dim() == 1) {
        return depth_1d(ds, x[0]).value();
    }
    if (ds.dim() == 2) {
        return depth_2d_exact(ds, x).value();
    }
    return depth_approx(ds, x, cfg).value();
}

void cmd_depth(std::ostream& out, const Options& opt) {
    const Dataset ds = load(opt);
    const auto cfg = depth_config(opt);
    if (!opt.query.empty()) {
        const Point x = require_vector(opt.query, "--query", ds.dim());
        emit_scalar(out, opt, "depth", halfspace_depth_any(ds, x, cfg));
        return;
    }
    std::vector<double> values(ds.size());
    if (ds.dim() <= 2) {
        for (std::size_t i = 0; i < ds.size(); ++i) {
            values[i] = halfspace_depth_any(ds, ds[i], cfg);
        }
    } else {
        ProjectedSample projected(ds, sample_directions(ds.dim(), cfg.n_directions, cfg.seed));
        for (std::size_t i = 0; i < ds.size(); ++i) {
            values[i] = projected.depth(ds[i]).value();
        }
    }
    emit_table(out, opt, ds, "depth", values);
}

void cmd_projout(std::ostream& out, const Options& opt) {
    const Dataset ds = load(opt);
    const ProjectionOutlyingness po(ds, depth_config(opt));
    if (!opt.query.empty()) {
        const Point x = require_vector(opt.query, "--query", ds.dim());
        emit_scalar(out, opt, "outlyingness", po.evaluate(x).value);
        return;
    }
    std::vector<double> values(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        values[i] = po.evaluate(ds[i]).value;
    }
    emit_table(out, opt, ds, "outlyingness", values);
}

void cmd_median(std::ostream& out, const Options& opt) {
    const Dataset ds = load(opt);
    if (ds.dim() != 2) {
        throw DimensionError("median requires planar (d = 2) data");
    }
    const auto m = tukey_median(ds, median_options(opt));
    if (opt.as_json) {
        out << json{ { "point", point_json(m.point) }, { "depth", m.depth.value() } }.dump(2) << '\n';
    } else {
        out << format_point(m.point) << '\n';
    }
}

json rank_json(const RankVector& r) {
    return json{ { "u", point_json(r.u) }, { "p", r.p }, { "v", point_json(r.v) } };
}

void cmd_rank(std::ostream& out, const Options& opt) {
    const auto model = planar_model(opt);
    const auto r = model.rank(require_vector(opt.query, "--query", 2));
    if (opt.as_json) {
        out << rank_json(r).dump(2) << '\n';
    } else {
        out << format_point(r.u) << '\n';
    }
}

void cmd_quantile(std::ostream& out, const Options& opt) {
    const auto model = planar_model(opt);
    emit_point(out, opt, "point", model.quantile(require_vector(opt.u, "--u", 2)));
}

void cmd_outly(std::ostream& out, const Options& opt) {
    const auto model = planar_model(opt);
    if (!opt.query.empty()) {
        emit_scalar(out, opt, "outlyingness", model.outlyingness(require_vector(opt.query, "--query", 2)));
        return;
    }
    std::vector<double> values(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        values[i] = model.outlyingness(model.data()[i]);
    }
    emit_table(out, opt, model.data(), "outlyingness", values);
}

void cmd_contour(std::ostream& out, const Options& opt) {
    const auto model = planar_model(opt);
    const auto region = model.central_region(require_alpha(opt));
    if (opt.as_json) {
        json vertices = json::array();
        for (const auto& v : region.vertices) {
            vertices.push_back(point_json(v));
        }
        out << json{ { "level", region.level }, { "weight", region.weight }, { "vertices", vertices } }.dump(2) << '\n';
        return;
    }
    out << "x,y\n";
    for (const auto& v : region.vertices) {
        out << format_point(v) << '\n';
    }
}

void cmd_trimmed_mean(std::ostream& out, const Options& opt) {
    const auto model = planar_model(opt);
    emit_point(out, opt, "mean", model.trimmed_mean(require_alpha(opt)));
}

void cmd_signtest(std::ostream& out, const Options& opt) {
    const auto model = planar_model(opt);
    const auto result = model.sign_test(require_vector(opt.theta, "--theta", 2));
    if (opt.as_json) {
        json j = rank_json(result.rank);
        j["statistic"] = result.statistic;
        out << j.dump(2) << '\n';
    } else {
        out << format_point(result.rank.u) << ',' << format_number(result.statistic) << '\n';
    }
}

void cmd_oracle(std::ostream& out, const Options& opt) {
    const int modes = opt.cdf + opt.pdf + opt.threshold;
    if (modes > 1) {
        throw UsageError("choose at most one of --cdf, --pdf, --threshold");
    }
    if (opt.threshold) {
        emit_scalar(out, opt, "threshold", oh_threshold(opt.fpr.value_or(0.01), opt.d));
        return;
    }
    if (opt.cdf || opt.pdf) {
        if (!opt.lambda) {
            throw UsageError("--lambda is required");
        }
        if (opt.cdf) {
            emit_scalar(out, opt, "cdf", oh_cdf(*opt.lambda, opt.d));
        } else {
            emit_scalar(out, opt, "pdf", oh_pdf(*opt.lambda, opt.d));
        }
        return;
    }
    out << "lambda,cdf,pdf\n";
    for (int k = 1; k <= 99; ++k) {
        const double lambda = k / 100.0;
        out << format_number(lambda) << ',' << format_number(oh_cdf(lambda, opt.d)) << ',' << format_number(oh_pdf(lambda, opt.d)) << '\n';
    }
}

void cmd_masking(std::ostream& out, const Options& opt) {
    if (opt.config.empty()) {
        throw UsageError("--config is required");
    }
    std::ifstream input(opt.config);
    if (!input) {
        throw ParseError("cannot open '" + opt.config + "'");
    }
    nlohmann::json config;
    try {
        config = nlohmann::json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON in '") + opt.config + "': " + e.what());
    }
    if (!config.is_object()) {
        throw ParseError("masking config must be a JSON object");
    }

    double fpr = 0.01;
    std::size_t trials = 200;
    std::size_t directions = opt.directions;
    try {
        fpr = config.value("fpr", fpr);
        trials = config.value("n_trials", trials);
        directions = config.value("n_directions", directions);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid masking config: ") + e.what());
    }
    if (opt.fpr) {
        fpr = *opt.fpr;
    }
    if (opt.trials) {
        trials = *opt.trials;
    }
    const DepthConfig cfg{ directions, SeedSpec{ opt.seed } };

    if (config.contains("grid")) {
        std::vector<ContaminationSpec> grid;
        if (config["grid"] == "default") {
            grid = default_masking_grid(fpr, SeedSpec{ opt.seed });
        } else if (config["grid"].is_array()) {
            for (const auto& item : config["grid"]) {
                grid.push_back(spec_from_json(item, opt.seed));
            }
        } else {
            throw ParseError("'grid' must be \"default\" or an array of contamination specs");
        }
        const auto rows = compare_identifiers(grid, fpr, trials, cfg);
        if (opt.as_json) {
            json j = json::array();
            for (const auto& r : rows) {
                j.push_back({ { "d", r.d }, { "n_clean", r.n_clean }, { "n_outliers", r.n_outliers }, { "distance", r.distance }, { "spread", r.spread },
                    { "halfspace", { { "masking_rate", r.halfspace.masking_rate }, { "fp_rate", r.halfspace.fp_rate } } },
                    { "projection", { { "masking_rate", r.projection.masking_rate }, { "fp_rate", r.projection.fp_rate } } } });
            }
            out << j.dump(2) << '\n';
        } else {
            write_comparison_csv(out, rows);
        }
        return;
    }

    nlohmann::json spec_fields = config;
    for (const char* key : { "fpr", "n_trials", "n_directions" }) {
        spec_fields.erase(key);
    }
    const auto report = masking_experiment(spec_from_json(spec_fields, opt.seed), fpr, trials, cfg);
    if (opt.as_json) {
        out << report_to_json(report).dump(2) << '\n';
    } else {
        write_report_csv(out, report);
    }
}

void add_data_flags(CLI::App* sub, Options& opt) {
    sub->add_option("--in", opt.in, "input CSV file");
    sub->add_flag("--header", opt.header, "skip the first row of the input");
    sub->add_option("--out", opt.out, "write output to this file instead of standard output");
    sub->add_flag("--json", opt.as_json, "emit JSON instead of CSV");
    sub->add_option("--seed", opt.seed, "master seed (default 0)");
}

}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{ "Halfspace and projection depth, outlyingness, quantile and rank functions", "doqr" };
    app.require_subcommand(1, 1);

    std::vector<std::pair<CLI::App*, std::function<void(std::ostream&, const Options&)>>> commands;
    auto add = [&](const char* name, const char* help, std::function<void(std::ostream&, const Options&)> fn) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_data_flags(sub, opt);
        commands.emplace_back(sub, std::move(fn));
        return sub;
    };

    auto depth = add("depth", "halfspace depth (exact for d <= 2, sampled directions otherwise)", cmd_depth);
    depth->add_option("--query", opt.query, "query point X,Y[,...]");
    depth->add_option("--directions", opt.directions, "directions for d >= 3 (default 1000)");

    auto projout = add("projout", "projection outlyingness over sampled directions", cmd_projout);
    projout->add_option("--query", opt.query, "query point X,Y[,...]");
    projout->add_option("--directions", opt.directions, "number of directions (default 1000)");

    add("median", "Tukey median of planar data", cmd_median);

    add("rank", "rank vector u = p v of a planar query point", cmd_rank)->add_option("--query", opt.query, "query point X,Y");
    add("quantile", "point with a given rank vector", cmd_quantile)->add_option("--u", opt.u, "quantile index U1,U2 with norm < 1");
    add("outly", "DOQR outlyingness |u|", cmd_outly)->add_option("--query", opt.query, "query point X,Y");
    add("contour", "central region boundary at a depth level", cmd_contour)->add_option("--alpha", opt.alpha, "depth level");
    add("trimmed-mean", "mean of sample points with depth >= alpha", cmd_trimmed_mean)->add_option("--alpha", opt.alpha, "depth level");
    add("signtest", "multivariate sign statistic at a hypothesized center", cmd_signtest)->add_option("--theta", opt.theta, "hypothesized center X,Y");

    auto oracle = add("oracle", "normal-model law of halfspace outlyingness", cmd_oracle);
    oracle->add_option("--d", opt.d, "dimension (default 2)")->check(CLI::PositiveNumber);
    oracle->add_option("--lambda", opt.lambda, "outlyingness level");
    oracle->add_option("--fpr", opt.fpr, "false positive rate for --threshold (default 0.01)");
    oracle->add_flag("--cdf", opt.cdf, "c.d.f. at --lambda");
    oracle->add_flag("--pdf", opt.pdf, "density at --lambda");
    oracle->add_flag("--threshold", opt.threshold, "outlyingness threshold for --fpr");

    auto masking = add("masking", "masking experiment from a JSON config", cmd_masking);
    masking->add_option("--config", opt.config, "JSON contamination spec, or {\"grid\": [...]}");
    masking->add_option("--fpr", opt.fpr, "false positive rate (default 0.01)");
    masking->add_option("--trials", opt.trials, "number of trials (default 200)");
    masking->add_option("--directions", opt.directions, "projection directions (default 1000)");

    std::vector<const char*> argv{ "doqr" };
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        for (auto& [sub, fn] : commands) {
            if (!sub->parsed()) {
                continue;
            }
            if (opt.out.empty()) {
                fn(out, opt);
            } else {
                std::ostringstream buffer;
                fn(buffer, opt);
                std::ofstream file(opt.out);
                if (!file) {
                    throw ParseError("cannot open '" + opt.out + "' for writing");
                }
                file << buffer.str();
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}
