#include "hetdist/metrics.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace hetdist {

namespace {

constexpr std::array<std::string_view, 8> names = {"euclid", "heom", "hvdm", "hvdm-n1",
                                                   "hvdm-n3", "dvdm", "ivdm", "wvdm"};

// Shared degenerate rule for a zero normalizer.
double scaled_difference(double x, double y, double scale) noexcept {
    if (scale == 0.0) {
        return x == y ? 0.0 : 1.0;
    }
    return std::abs(x - y) / scale;
}

}  // namespace

std::optional<metric_kind> metric_kind::parse(std::string_view name) {
    if (name == "euclid") {
        return metric_kind{metric_tag::euclidean_sigma};
    }
    if (name == "heom") {
        return metric_kind{metric_tag::heom};
    }
    if (name == "hvdm" || name == "hvdm-n2") {
        return metric_kind{metric_tag::hvdm, vdm_norm::n2};
    }
    if (name == "hvdm-n1") {
        return metric_kind{metric_tag::hvdm, vdm_norm::n1};
    }
    if (name == "hvdm-n3") {
        return metric_kind{metric_tag::hvdm, vdm_norm::n3};
    }
    if (name == "dvdm") {
        return metric_kind{metric_tag::dvdm};
    }
    if (name == "ivdm") {
        return metric_kind{metric_tag::ivdm};
    }
    if (name == "wvdm") {
        return metric_kind{metric_tag::wvdm};
    }
    return std::nullopt;
}

std::string metric_kind::name() const {
    switch (tag) {
    case metric_tag::euclidean_sigma:
        return "euclid";
    case metric_tag::heom:
        return "heom";
    case metric_tag::hvdm:
        switch (norm) {
        case vdm_norm::n1:
            return "hvdm-n1";
        case vdm_norm::n2:
            return "hvdm";
        case vdm_norm::n3:
            return "hvdm-n3";
        }
        break;
    case metric_tag::dvdm:
        return "dvdm";
    case metric_tag::ivdm:
        return "ivdm";
    case metric_tag::wvdm:
        return "wvdm";
    }
    return "hvdm";
}

bool metric_kind::operator==(const metric_kind& other) const noexcept {
    if (tag != other.tag) {
        return false;
    }
    return tag != metric_tag::hvdm || norm == other.norm;
}

std::span<const std::string_view> metric_names() noexcept { return names; }

double vdm_a(std::span<const double> p_x, std::span<const double> p_y) {
    if (p_x.size() != p_y.size()) {
        throw std::invalid_argument("probability vectors differ in length");
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < p_x.size(); ++c) {
        const double d = p_x[c] - p_y[c];
        sum += d * d;
    }
    return sum;
}

double normalized_vdm(std::span<const double> p_x, std::span<const double> p_y, vdm_norm norm,
                      std::size_t class_count) {
    switch (norm) {
    case vdm_norm::n1: {
        if (p_x.size() != p_y.size()) {
            throw std::invalid_argument("probability vectors differ in length");
        }
        double sum = 0.0;
        for (std::size_t c = 0; c < p_x.size(); ++c) {
            sum += std::abs(p_x[c] - p_y[c]);
        }
        return sum;
    }
    case vdm_norm::n2:
        return std::sqrt(vdm_a(p_x, p_y));
    case vdm_norm::n3:
        return std::sqrt(static_cast<double>(class_count) * vdm_a(p_x, p_y));
    }
    throw std::invalid_argument("unknown normalization variant");
}

double rn_diff(double x, double y, double range) noexcept { return scaled_difference(x, y, range); }

double normalized_diff(double x, double y, double sigma) noexcept { return scaled_difference(x, y, 4.0 * sigma); }

double present_distance(double squared_sum) {
    if (squared_sum < 0.0) {
        throw std::domain_error("squared distance is negative");
    }
    return std::sqrt(squared_sum);
}

prepared_metric prepared_metric::prepare(metric_kind kind, const dataset& train, const discretization_config& config) {
    if (train.empty()) {
        throw std::invalid_argument("cannot prepare a metric on an empty training set");
    }
    prepared_metric m;
    m.kind_ = kind;
    m.schema_ = train.schema();
    m.stats_.assign(train.stats().begin(), train.stats().end());
    if (kind.uses_vdm()) {
        m.vdm_ = vdm_table::learn(train, config);
    }
    if (kind.tag == metric_tag::wvdm) {
        m.windows_ = window_table::learn(train, config);
    }
    return m;
}

std::span<const double> prepared_metric::profile(std::size_t a, const value& v, std::span<double> scratch) const {
    const bool continuous = schema_.attributes[a].kind == attribute_kind::continuous;
    if (continuous && v.is_number()) {
        if (kind_.tag == metric_tag::ivdm) {
            vdm_->interpolate(a, v.as_number(), scratch);
            return scratch;
        }
        if (kind_.tag == metric_tag::wvdm) {
            windows_->find_p(a, v.as_number(), scratch);
            return scratch;
        }
    }
    return vdm_->probabilities(a, v);
}

double prepared_metric::attribute_contribution(std::size_t a, const value& x, const value& y) const {
    const auto& attr = schema_.attributes.at(a);
    const auto& st = stats_[a];

    switch (kind_.tag) {
    case metric_tag::euclidean_sigma: {
        if (x.is_unknown() || y.is_unknown()) {
            return 1.0;
        }
        const double d = scaled_difference(x.numeric(), y.numeric(), st.sigma);
        return d * d;
    }
    case metric_tag::heom: {
        if (x.is_unknown() || y.is_unknown()) {
            return 1.0;
        }
        const double d =
            attr.kind == attribute_kind::nominal ? overlap(x.as_code(), y.as_code()) : rn_diff(x.as_number(), y.as_number(), st.range);
        return d * d;
    }
    case metric_tag::hvdm: {
        if (x.is_unknown() || y.is_unknown()) {
            return 1.0;
        }
        if (attr.kind == attribute_kind::nominal) {
            const auto px = vdm_->probabilities(a, x);
            const auto py = vdm_->probabilities(a, y);
            switch (kind_.norm) {
            case vdm_norm::n1: {
                const double d = normalized_vdm(px, py, vdm_norm::n1, vdm_->class_count());
                return d * d;
            }
            case vdm_norm::n2:
                // The square of the N2 root is the plain sum, so the root is never taken.
                return vdm_a(px, py);
            case vdm_norm::n3:
                return static_cast<double>(vdm_->class_count()) * vdm_a(px, py);
            }
        }
        const double d = normalized_diff(x.as_number(), y.as_number(), st.sigma);
        return d * d;
    }
    case metric_tag::dvdm:
    case metric_tag::ivdm:
    case metric_tag::wvdm: {
        const auto C = vdm_->class_count();
        std::vector<double> scratch(2 * C);
        const auto px = profile(a, x, std::span<double>(scratch).first(C));
        const auto py = profile(a, y, std::span<double>(scratch).last(C));
        return vdm_a(px, py);
    }
    }
    throw std::logic_error("unhandled metric kind");
}

double prepared_metric::distance(const instance& x, const instance& y) const {
    const auto m = schema_.attribute_count();
    if (x.values.size() != m || y.values.size() != m) {
        throw std::invalid_argument("instance does not match the schema the metric was prepared on");
    }
    double sum = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        sum += attribute_contribution(a, x.values[a], y.values[a]);
    }
    return sum;
}

}  // namespace hetdist
