#include "hetdist/vdm_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

namespace hetdist {

int discretization_config::effective_s(std::size_t class_count) const {
    if (s_override) {
        if (*s_override < 1) {
            throw std::invalid_argument("interval count must be positive");
        }
        return *s_override;
    }
    return std::max(5, static_cast<int>(class_count));
}

double interval_width(const attribute_stats& stats, int s) {
    if (s < 1) {
        throw std::invalid_argument("interval count must be positive");
    }
    if (stats.max == stats.min) {
        return 0.0;
    }
    return std::abs(stats.max - stats.min) / s;
}

std::optional<int> discretize(std::optional<double> x, const attribute_stats& stats, int s, double width) {
    if (!x) {
        return std::nullopt;
    }
    if (width <= 0.0) {
        return 1;
    }
    if (*x == stats.max) {
        return s;
    }
    const double v = std::floor((*x - stats.min) / width) + 1.0;
    return static_cast<int>(std::clamp(v, 1.0, static_cast<double>(s)));
}

double midpoint(const attribute_stats& stats, double width, int u) {
    return stats.min + width * (u - 0.5);
}

void interpolate_p(double x, const attribute_stats& stats, int s, double width, std::span<const double> interval_probs,
                   std::span<double> out) {
    const auto C = out.size();
    if (interval_probs.size() != static_cast<std::size_t>(s) * C) {
        throw std::invalid_argument("interval probability table must hold s rows of C values");
    }
    const auto row = [&](int u) -> std::span<const double> {
        if (u < 1 || u > s) {
            return {};
        }
        return interval_probs.subspan(static_cast<std::size_t>(u - 1) * C, C);
    };
    if (width <= 0.0) {
        const auto p = row(1);
        std::copy(p.begin(), p.end(), out.begin());
        return;
    }
    int u = *discretize(x, stats, s, width);
    if (x < midpoint(stats, width, u)) {
        --u;
    }
    const double lo = midpoint(stats, width, u);
    const double hi = midpoint(stats, width, u + 1);
    // Clamping keeps values beyond the virtual outer midpoints at 0 instead of going negative.
    const double t = std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
    const auto p_lo = row(u);
    const auto p_hi = row(u + 1);
    for (std::size_t c = 0; c < C; ++c) {
        const double a = p_lo.empty() ? 0.0 : p_lo[c];
        const double b = p_hi.empty() ? 0.0 : p_hi[c];
        out[c] = a + t * (b - a);
    }
}

vdm_table vdm_table::learn(const dataset& train, const discretization_config& config) {
    const auto& sch = train.schema();
    const auto C = sch.class_count();
    const int s = config.effective_s(C);

    vdm_table table;
    table.class_count_ = C;
    table.zeros_.assign(C, 0.0);
    table.attributes_.resize(sch.attribute_count());

    for (std::size_t a = 0; a < sch.attribute_count(); ++a) {
        auto& at = table.attributes_[a];
        at.kind = sch.attributes[a].kind;
        at.stats = train.stats(a);

        std::size_t known_rows = 0;
        switch (at.kind) {
        case attribute_kind::continuous:
            at.s = s;
            at.width = interval_width(at.stats, s);
            known_rows = static_cast<std::size_t>(s);
            break;
        case attribute_kind::linear_discrete:
            for (const auto& inst : train.instances()) {
                if (inst.values[a].is_number()) {
                    at.discrete_rows.emplace(inst.values[a].as_number(), 0);
                }
            }
            for (auto& [x, row] : at.discrete_rows) {
                row = known_rows++;
            }
            break;
        case attribute_kind::nominal:
            for (const auto& inst : train.instances()) {
                if (inst.values[a].is_code()) {
                    known_rows = std::max<std::size_t>(known_rows, inst.values[a].as_code() + 1);
                }
            }
            break;
        }
        at.unknown_row = known_rows;
        const auto rows = known_rows + 1;
        at.counts.assign(rows * C, 0);
        at.totals.assign(rows, 0);
        at.probs.assign(rows * C, 0.0);
    }

    for (const auto& inst : train.instances()) {
        for (std::size_t a = 0; a < sch.attribute_count(); ++a) {
            auto& at = table.attributes_[a];
            const auto row = *table.row_of(a, inst.values[a]);
            ++at.counts[row * C + inst.class_index];
            ++at.totals[row];
        }
    }

    for (auto& at : table.attributes_) {
        for (std::size_t row = 0; row < at.totals.size(); ++row) {
            for (std::size_t c = 0; c < C; ++c) {
                const auto n = at.counts[row * C + c];
                at.probs[row * C + c] = n == 0 ? 0.0 : static_cast<double>(n) / at.totals[row];
            }
        }
    }
    return table;
}

std::optional<std::size_t> vdm_table::row_of(std::size_t a, const value& v) const {
    const auto& at = attributes_.at(a);
    if (v.is_unknown()) {
        return at.unknown_row;
    }
    switch (at.kind) {
    case attribute_kind::continuous: {
        const auto u = discretize(v.as_number(), at.stats, at.s, at.width);
        return static_cast<std::size_t>(*u - 1);
    }
    case attribute_kind::linear_discrete: {
        const auto it = at.discrete_rows.find(v.as_number());
        if (it == at.discrete_rows.end()) {
            return std::nullopt;
        }
        return it->second;
    }
    case attribute_kind::nominal:
        if (v.as_code() >= at.unknown_row) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(v.as_code());
    }
    return std::nullopt;
}

std::span<const double> vdm_table::probabilities(std::size_t a, const value& v) const {
    const auto row = row_of(a, v);
    if (!row) {
        return zeros();
    }
    return row_probabilities(a, *row);
}

std::span<const double> vdm_table::interval_probabilities(std::size_t a, int u) const {
    const auto& at = attributes_.at(a);
    if (at.kind != attribute_kind::continuous) {
        throw std::logic_error("interval probabilities requested for a non-continuous attribute");
    }
    if (u < 1 || u > at.s) {
        return zeros();
    }
    return row_probabilities(a, static_cast<std::size_t>(u - 1));
}

std::span<const double> vdm_table::unknown_probabilities(std::size_t a) const {
    return row_probabilities(a, attributes_.at(a).unknown_row);
}

std::uint32_t vdm_table::count(std::size_t a, const value& v, std::size_t c) const {
    const auto row = row_of(a, v);
    return row ? row_counts(a, *row)[c] : 0;
}

std::uint32_t vdm_table::total(std::size_t a, const value& v) const {
    const auto row = row_of(a, v);
    return row ? row_total(a, *row) : 0;
}

std::span<const double> vdm_table::row_probabilities(std::size_t a, std::size_t row) const {
    const auto& at = attributes_.at(a);
    return std::span<const double>(at.probs).subspan(row * class_count_, class_count_);
}

std::span<const std::uint32_t> vdm_table::row_counts(std::size_t a, std::size_t row) const {
    const auto& at = attributes_.at(a);
    return std::span<const std::uint32_t>(at.counts).subspan(row * class_count_, class_count_);
}

void vdm_table::interpolate(std::size_t a, double x, std::span<double> out) const {
    const auto& at = attributes_.at(a);
    if (at.kind != attribute_kind::continuous) {
        throw std::logic_error("interpolation requested for a non-continuous attribute");
    }
    if (out.size() != class_count_) {
        throw std::invalid_argument("output span does not match the class count");
    }
    const auto intervals = std::span<const double>(at.probs).first(static_cast<std::size_t>(at.s) * class_count_);
    interpolate_p(x, at.stats, at.s, at.width, intervals, out);
}

std::vector<double> vdm_table::interpolate(std::size_t a, double x) const {
    std::vector<double> out(class_count_);
    interpolate(a, x, out);
    return out;
}

window_table window_table::learn(const dataset& train, const discretization_config& config) {
    const auto& sch = train.schema();
    const int s = config.effective_s(sch.class_count());
    std::vector<double> widths(sch.attribute_count(), 0.0);
    for (std::size_t a = 0; a < sch.attribute_count(); ++a) {
        widths[a] = interval_width(train.stats(a), s);
    }
    return learn_with_widths(train, widths);
}

window_table window_table::learn_with_widths(const dataset& train, std::span<const double> widths) {
    const auto& sch = train.schema();
    const auto C = sch.class_count();
    if (widths.size() != sch.attribute_count()) {
        throw std::invalid_argument("one window width per attribute is required");
    }

    window_table table;
    table.class_count_ = C;
    table.attributes_.resize(sch.attribute_count());

    std::vector<std::pair<double, std::size_t>> sorted;
    std::vector<std::size_t> window_counts(C);
    for (std::size_t a = 0; a < sch.attribute_count(); ++a) {
        if (sch.attributes[a].kind != attribute_kind::continuous) {
            continue;
        }
        sorted.clear();
        for (const auto& inst : train.instances()) {
            if (inst.values[a].is_number()) {
                sorted.emplace_back(inst.values[a].as_number(), inst.class_index);
            }
        }
        if (sorted.empty()) {
            continue;
        }
        std::sort(sorted.begin(), sorted.end());

        auto& aw = table.attributes_[a];
        aw.present = true;
        aw.width = widths[a];
        aw.min = sorted.front().first;
        aw.max = sorted.back().first;
        const double half = aw.width / 2.0;
        const std::size_t n = sorted.size();

        std::fill(window_counts.begin(), window_counts.end(), 0);
        std::size_t in = 0;
        std::size_t out = 0;
        std::size_t total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = sorted[i].first;
            if (i > 0 && x == sorted[i - 1].first) {
                continue;
            }
            // The center is always inside the window, even when x + w/2 rounds to x.
            while (out < n && (sorted[out].first < x + half || sorted[out].first == x)) {
                ++window_counts[sorted[out].second];
                ++total;
                ++out;
            }
            while (in < out && sorted[in].first < x - half) {
                --window_counts[sorted[in].second];
                --total;
                ++in;
            }
            aw.values.push_back(x);
            for (std::size_t c = 0; c < C; ++c) {
                aw.probs.push_back(static_cast<double>(window_counts[c]) / static_cast<double>(total));
            }
        }
    }
    return table;
}

std::size_t window_table::stored_entries() const {
    std::size_t total = 0;
    for (const auto& aw : attributes_) {
        total += aw.values.size();
    }
    return total;
}

std::span<const double> window_table::probabilities(std::size_t a, std::size_t i) const {
    const auto& aw = attributes_.at(a);
    return std::span<const double>(aw.probs).subspan(i * class_count_, class_count_);
}

void window_table::find_p(std::size_t a, double x, std::span<double> out) const {
    const auto& aw = attributes_.at(a);
    if (out.size() != class_count_) {
        throw std::invalid_argument("output span does not match the class count");
    }
    std::fill(out.begin(), out.end(), 0.0);
    if (!aw.present) {
        return;
    }
    const auto it = std::lower_bound(aw.values.begin(), aw.values.end(), x);
    const auto i = static_cast<std::size_t>(it - aw.values.begin());
    if (it != aw.values.end() && *it == x) {
        const auto p = probabilities(a, i);
        std::copy(p.begin(), p.end(), out.begin());
        return;
    }

    const double half = aw.width / 2.0;
    const std::size_t k = aw.values.size();
    double x1 = 0.0;
    double x2 = 0.0;
    std::span<const double> p1;
    std::span<const double> p2;
    if (i == 0) {
        x1 = aw.min - half;
        x2 = aw.values.front();
        if (x <= x1) {
            return;
        }
        p2 = probabilities(a, 0);
    } else if (i == k) {
        x1 = aw.values.back();
        x2 = aw.max + half;
        if (x >= x2) {
            return;
        }
        p1 = probabilities(a, k - 1);
    } else {
        x1 = aw.values[i - 1];
        x2 = aw.values[i];
        p1 = probabilities(a, i - 1);
        p2 = probabilities(a, i);
    }
    const double t = (x - x1) / (x2 - x1);
    for (std::size_t c = 0; c < class_count_; ++c) {
        const double lo = p1.empty() ? 0.0 : p1[c];
        const double hi = p2.empty() ? 0.0 : p2[c];
        out[c] = lo + t * (hi - lo);
    }
}

std::vector<double> window_table::find_p(std::size_t a, double x) const {
    std::vector<double> out(class_count_);
    find_p(a, x, out);
    return out;
}

std::string probability_map(const vdm_table& vdm, const window_table* windows, std::size_t a, landscape kind,
                            std::size_t grid) {
    if (vdm.kind(a) != attribute_kind::continuous) {
        throw std::invalid_argument("probability maps are only defined for continuous attributes");
    }
    if (grid < 2) {
        throw std::invalid_argument("grid needs at least two points");
    }
    if (kind == landscape::windowed && windows == nullptr) {
        throw std::invalid_argument("windowed landscape requires a window table");
    }
    const auto& st = vdm.stats(a);
    const double w = vdm.width(a);
    const double lo = st.min - w;
    const double hi = st.max + w;
    std::vector<double> p(vdm.class_count());
    std::string out;
    for (std::size_t g = 0; g < grid; ++g) {
        const double x = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(grid - 1);
        switch (kind) {
        case landscape::discretized: {
            const auto row = vdm.probabilities(a, value::number(x));
            std::copy(row.begin(), row.end(), p.begin());
            break;
        }
        case landscape::interpolated:
            vdm.interpolate(a, x, p);
            break;
        case landscape::windowed:
            windows->find_p(a, x, p);
            break;
        }
        out += fmt::format("{:.6f}", x);
        for (const double pc : p) {
            out += fmt::format(",{:.6f}", pc);
        }
        out += '\n';
    }
    return out;
}

}  // namespace hetdist
