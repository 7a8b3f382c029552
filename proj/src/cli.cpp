#include "hetdist/cli.hpp"

#include "hetdist/classifier.hpp"
#include "hetdist/dataset.hpp"
#include "hetdist/eval.hpp"
#include "hetdist/metrics.hpp"
#include "hetdist/vdm_stats.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hetdist::cli {

namespace {

/// Raised for bad flag values that CLI11 cannot catch on its own.
struct usage_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct options {
    std::string data_path;
    std::string schema_path;
    std::string metrics;
    std::size_t k = 1;
    std::optional<std::size_t> folds;
    std::uint64_t seed = 0;
    std::optional<int> s;
    std::size_t attr = 0;
    std::size_t grid = 256;
    std::string percent = "1,2,5,10,20,30,40,50,60,70,80,90,100";
    std::size_t from = 0;
    std::size_t to = 0;
    std::string out_path;
    std::string format = "text";
    std::size_t threads = 1;
};

const char* const all_metrics = "euclid,heom,hvdm,dvdm,ivdm,wvdm";

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        if (end > start) {
            out.push_back(text.substr(start, end - start));
        }
        start = end + 1;
    }
    return out;
}

std::vector<metric_kind> parse_metrics(const std::string& text) {
    std::vector<metric_kind> kinds;
    for (const auto& name : split_list(text)) {
        const auto kind = metric_kind::parse(name);
        if (!kind) {
            throw usage_failure("unknown metric '" + name + "' (expected one of euclid, heom, hvdm, hvdm-n1, "
                                "hvdm-n3, dvdm, ivdm, wvdm)");
        }
        kinds.push_back(*kind);
    }
    if (kinds.empty()) {
        throw usage_failure("no metric given");
    }
    return kinds;
}

metric_kind single_metric(const std::string& text) {
    const auto kinds = parse_metrics(text);
    if (kinds.size() != 1) {
        throw usage_failure("this subcommand takes exactly one metric");
    }
    return kinds.front();
}

std::vector<double> parse_percentages(const std::string& text) {
    std::vector<double> out;
    for (const auto& token : split_list(text)) {
        double p = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), p);
        if (ec != std::errc{} || ptr != token.data() + token.size() || !(p > 0.0 && p <= 100.0)) {
            throw usage_failure("invalid percentage '" + token + "' (expected values in (0, 100])");
        }
        out.push_back(p);
    }
    if (out.empty()) {
        throw usage_failure("no percentages given");
    }
    return out;
}

report_format parse_format(const std::string& text) {
    return text == "csv" ? report_format::csv : report_format::text;
}

discretization_config discretization(const options& opt) { return {opt.s}; }

eval_options eval_settings(const options& opt) {
    eval_options e;
    e.k = opt.k;
    e.discretization = discretization(opt);
    e.threads = opt.threads;
    return e;
}

fold_plan plan_for(const dataset& data, const options& opt, std::size_t default_folds) {
    const auto folds = opt.folds.value_or(default_folds);
    if (folds < 2 || folds > data.size()) {
        throw usage_failure(fmt::format("--folds must lie in [2, {}]", data.size()));
    }
    return make_folds(data.size(), folds, opt.seed);
}

void check_k(const dataset& data, const options& opt, std::size_t folds) {
    // Smallest training split is n - ceil(n / folds).
    const auto smallest = data.size() - (data.size() + folds - 1) / folds;
    if (opt.k > smallest) {
        throw usage_failure(fmt::format("--k {} exceeds the smallest training split ({})", opt.k, smallest));
    }
}

std::string cmd_eval(const dataset& data, const options& opt) {
    const auto kinds = parse_metrics(opt.metrics.empty() ? "hvdm" : opt.metrics);
    const auto plan = plan_for(data, opt, 10);
    check_k(data, opt, plan.fold_count);
    const auto report = cross_validate(data, kinds, plan, eval_settings(opt));
    return format_summary(report, parse_format(opt.format));
}

std::string cmd_compare(const dataset& data, const options& opt) {
    const auto kinds = parse_metrics(opt.metrics.empty() ? all_metrics : opt.metrics);
    const auto plan = plan_for(data, opt, 10);
    check_k(data, opt, plan.fold_count);
    const auto report = cross_validate(data, kinds, plan, eval_settings(opt));
    return format_comparison(report, parse_format(opt.format));
}

std::string cmd_dist(const dataset& data, const options& opt) {
    const auto kind = single_metric(opt.metrics.empty() ? "hvdm" : opt.metrics);
    if (opt.from >= data.size() || opt.to >= data.size()) {
        throw usage_failure(fmt::format("--from/--to must be instance indices below {}", data.size()));
    }
    const auto metric = prepared_metric::prepare(kind, data, discretization(opt));
    const double d = present_distance(metric.distance(data[opt.from], data[opt.to]));
    if (parse_format(opt.format) == report_format::csv) {
        return fmt::format("metric,from,to,distance\n{},{},{},{:.6g}\n", kind.name(), opt.from, opt.to, d);
    }
    return fmt::format("{:.6g}\n", d);
}

std::string cmd_probmap(const dataset& data, const options& opt) {
    const auto kind = single_metric(opt.metrics.empty() ? "ivdm" : opt.metrics);
    landscape shape = landscape::interpolated;
    switch (kind.tag) {
    case metric_tag::dvdm:
        shape = landscape::discretized;
        break;
    case metric_tag::ivdm:
        shape = landscape::interpolated;
        break;
    case metric_tag::wvdm:
        shape = landscape::windowed;
        break;
    default:
        throw usage_failure("probmap takes --metric dvdm, ivdm or wvdm");
    }
    const auto& sch = data.schema();
    if (opt.attr >= sch.attribute_count() || sch.attributes[opt.attr].kind != attribute_kind::continuous) {
        throw usage_failure("--attr must name a continuous attribute");
    }
    if (opt.grid < 2) {
        throw usage_failure("--grid needs at least two points");
    }
    const auto vdm = vdm_table::learn(data, discretization(opt));
    std::optional<window_table> windows;
    if (shape == landscape::windowed) {
        windows = window_table::learn(data, discretization(opt));
    }
    return probability_map(vdm, windows ? &*windows : nullptr, opt.attr, shape, opt.grid);
}

std::string cmd_curve(const dataset& data, const options& opt) {
    const auto kinds = parse_metrics(opt.metrics.empty() ? all_metrics : opt.metrics);
    const auto percentages = parse_percentages(opt.percent);
    const auto plan = plan_for(data, opt, 10);
    const auto report = learning_curve(data, kinds, percentages, plan, opt.seed, eval_settings(opt));
    return format_learning_curve(report, parse_format(opt.format));
}

std::string cmd_stats(const dataset& data, const options& opt) {
    if (!opt.metrics.empty()) {
        throw usage_failure("stats compares the N1, N2 and N3 normalizations; --metric does not apply");
    }
    const auto plan = plan_for(data, opt, 5);
    std::vector<attribute_distance_report> reports;
    for (const auto norm : {vdm_norm::n1, vdm_norm::n2, vdm_norm::n3}) {
        reports.push_back(avg_attribute_distance(data, plan, norm, discretization(opt)));
    }
    return format_attribute_distances(data, reports, parse_format(opt.format));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heterogeneous distance functions for nearest-neighbor classification", "hetdist"};
    app.require_subcommand(1, 1);
    options opt;

    struct entry {
        const char* name;
        const char* help;
        std::string (*fn)(const dataset&, const options&);
    };
    const entry entries[] = {
        {"eval", "Cross-validated accuracy of one or more metrics", cmd_eval},
        {"compare", "Accuracy table with paired t-test marks against the last metric", cmd_compare},
        {"dist", "Distance between two instances of the data file", cmd_dist},
        {"probmap", "Class probability landscape of a continuous attribute", cmd_probmap},
        {"curve", "Learning curve over percentages of each training fold", cmd_curve},
        {"stats", "Average attribute distance under the N1, N2 and N3 normalizations", cmd_stats},
    };

    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        sub->add_option("--data", opt.data_path, "Comma-separated data file")->required();
        sub->add_option("--schema", opt.schema_path, "Schema file")->required();
        sub->add_option("--metric", opt.metrics, "Metric name or comma-separated list");
        sub->add_option("--k", opt.k, "Number of neighbors")->check(CLI::PositiveNumber);
        sub->add_option("--folds", opt.folds, "Cross-validation folds (10; 5 for stats)");
        sub->add_option("--seed", opt.seed, "Seed for fold assignment and subsampling");
        sub->add_option("--s", opt.s, "Intervals per continuous attribute (default max(5, C))")
            ->check(CLI::PositiveNumber);
        sub->add_option("--attr", opt.attr, "Attribute index for probmap");
        sub->add_option("--grid", opt.grid, "Grid points for probmap");
        sub->add_option("--percent", opt.percent, "Comma-separated training percentages for curve");
        sub->add_option("--from", opt.from, "First instance index for dist");
        sub->add_option("--to", opt.to, "Second instance index for dist");
        sub->add_option("--out", opt.out_path, "Write the report to this file");
        sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "csv"}));
        sub->add_option("--threads", opt.threads, "Folds evaluated concurrently")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage_error;
    }

    const entry* chosen = nullptr;
    for (const auto& e : entries) {
        if (app.got_subcommand(e.name)) {
            chosen = &e;
        }
    }

    std::string report;
    try {
        if (!opt.metrics.empty()) {
            parse_metrics(opt.metrics);
        }
        const auto data = load_dataset(opt.data_path, opt.schema_path);
        report = chosen->fn(data, opt);
    } catch (const usage_failure& e) {
        err << "error: " << e.what() << "\n" << app.get_subcommand(chosen->name)->help();
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    }

    if (opt.out_path.empty()) {
        out << report;
        return ok;
    }
    std::ofstream file(opt.out_path, std::ios::binary);
    if (!file || !(file << report)) {
        err << "error: cannot write '" << opt.out_path << "'\n";
        return data_error;
    }
    return ok;
}

}  // namespace hetdist::cli
