#include "hetdist/eval.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

#include <fmt/format.h>

namespace hetdist {

namespace {

std::string percent(double fraction) { return fmt::format("{:.2f}", 100.0 * fraction); }

std::string format_t(double t) {
    if (std::isinf(t)) {
        return t > 0 ? "inf" : "-inf";
    }
    return fmt::format("{:.3f}", t);
}

// Renders rows as an aligned table: first column left-aligned, the rest right-aligned.
std::string render(const std::vector<std::vector<std::string>>& rows, report_format format) {
    std::string out;
    if (format == report_format::csv) {
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out += (i == 0 ? "" : ",") + row[i];
            }
            out += '\n';
        }
        return out;
    }
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        widths.resize(std::max(widths.size(), row.size()), 0);
        for (std::size_t i = 0; i < row.size(); ++i) {
            widths[i] = std::max(widths[i], row[i].size());
        }
    }
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i == 0) {
                line += fmt::format("{:<{}}", row[i], widths[i]);
            } else {
                line += fmt::format("  {:>{}}", row[i], widths[i]);
            }
        }
        while (!line.empty() && line.back() == ' ') {
            line.pop_back();
        }
        out += line + '\n';
    }
    return out;
}

}  // namespace

std::string format_comparison(const eval_report& report, report_format format) {
    std::vector<std::vector<std::string>> rows;
    const auto M = report.metrics.size();
    if (M == 0) {
        return {};
    }
    const auto folds = report.metrics.front().fold_accuracy.size();
    const auto ref = M - 1;
    const bool text = format == report_format::text;

    std::vector<std::string> header{"fold"};
    for (const auto& m : report.metrics) {
        header.push_back(m.kind.name());
    }
    rows.push_back(std::move(header));
    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::string> row{std::to_string(f + 1)};
        for (const auto& m : report.metrics) {
            row.push_back(percent(m.fold_accuracy[f]));
        }
        rows.push_back(std::move(row));
    }

    std::vector<std::string> mean_row{"mean"};
    std::vector<std::string> t_row{"t"};
    std::vector<std::string> mark_row{"mark"};
    for (std::size_t i = 0; i < M; ++i) {
        std::string mark;
        std::string t;
        if (i != ref) {
            const auto res = report.compare(i, ref);
            t = format_t(res.t);
            if (res.significant) {
                mark = res.t > 0 ? "*" : "<";
            }
        }
        if (text) {
            mean_row.push_back(percent(report.metrics[i].mean_accuracy) + (mark.empty() ? " " : mark));
        } else {
            mean_row.push_back(percent(report.metrics[i].mean_accuracy));
            mark_row.push_back(mark);
        }
        t_row.push_back(t);
    }
    if (text) {
        // Every other metric cell gets a blank where the mean row carries its mark.
        rows.push_back(t_row);
        for (auto& row : rows) {
            for (std::size_t i = 1; i < row.size(); ++i) {
                row[i] += ' ';
            }
        }
        t_row = std::move(rows.back());
        rows.pop_back();
    }
    rows.push_back(std::move(mean_row));
    rows.push_back(std::move(t_row));
    if (!text) {
        rows.push_back(std::move(mark_row));
    }

    auto out = render(rows, format);
    if (text && M > 1) {
        out += fmt::format("t: paired two-tailed t vs {}; * significantly higher, < significantly lower ({:.0f}% "
                           "confidence)\n",
                           report.metrics[ref].kind.name(), 100.0 * report.confidence);
    }
    return out;
}

std::string format_summary(const eval_report& report, report_format format) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"metric", "accuracy", "folds"});
    for (const auto& m : report.metrics) {
        rows.push_back({m.kind.name(), percent(m.mean_accuracy), std::to_string(m.fold_accuracy.size())});
    }
    return render(rows, format);
}

std::string format_attribute_distances(const dataset& data, std::span<const attribute_distance_report> reports,
                                       report_format format) {
    const auto& sch = data.schema();
    const auto norm_name = [](vdm_norm n) -> std::string_view {
        switch (n) {
        case vdm_norm::n1:
            return "N1";
        case vdm_norm::n2:
            return "N2";
        case vdm_norm::n3:
            return "N3";
        }
        return "N2";
    };
    const auto num = [](double x) { return fmt::format("{:.4f}", x); };

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"attribute", "kind"};
    for (const auto& r : reports) {
        header.emplace_back(norm_name(r.norm));
    }
    rows.push_back(std::move(header));
    for (std::size_t a = 0; a < sch.attribute_count(); ++a) {
        std::vector<std::string> row{sch.attributes[a].name, std::string(to_keyword(sch.attributes[a].kind))};
        for (const auto& r : reports) {
            row.push_back(num(r.per_attribute[a]));
        }
        rows.push_back(std::move(row));
    }
    std::vector<std::string> lin{"avgLin", ""};
    std::vector<std::string> nom{"avgNom", ""};
    for (const auto& r : reports) {
        lin.push_back(r.avg_lin ? num(*r.avg_lin) : "-");
        nom.push_back(r.avg_nom ? num(*r.avg_nom) : "-");
    }
    rows.push_back(std::move(lin));
    rows.push_back(std::move(nom));
    return render(rows, format);
}

std::string format_learning_curve(const learning_curve_report& report, report_format format) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"percent"};
    for (const auto& k : report.kinds) {
        header.push_back(k.name());
    }
    rows.push_back(std::move(header));
    for (std::size_t p = 0; p < report.percentages.size(); ++p) {
        std::vector<std::string> row{fmt::format("{:g}", report.percentages[p])};
        for (std::size_t m = 0; m < report.kinds.size(); ++m) {
            const auto& cell = report.accuracy[m][p];
            row.push_back(cell ? percent(*cell) : "-");
        }
        rows.push_back(std::move(row));
    }
    return render(rows, format);
}

}  // namespace hetdist
