#ifndef HETDIST_TESTS_SUPPORT_HPP
#define HETDIST_TESTS_SUPPORT_HPP

// Fixtures, random generators and brute-force oracles shared by the test binaries.
// Oracles here are written from the textbook definitions and do not call into the code they check.

#include "hetdist/classifier.hpp"
#include "hetdist/dataset.hpp"
#include "hetdist/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace hetdist::testing {

inline schema make_schema(const std::vector<attribute_kind>& kinds, std::size_t classes) {
    schema s;
    for (std::size_t a = 0; a < kinds.size(); ++a) {
        s.attributes.push_back({"a" + std::to_string(a), kinds[a]});
    }
    s.class_name = "class";
    for (std::size_t c = 0; c < classes; ++c) {
        s.class_labels.push_back("c" + std::to_string(c));
    }
    return s;
}

/// One continuous attribute whose first two intervals (s = 5 over [4.3, 7.9]) hold class counts
/// 26/3/1 and 16/15/2, i.e. probabilities 0.867/0.100/0.033 and 0.485/0.455/0.061 to three places.
inline dataset sepal_length_fixture() {
    std::vector<instance> rows;
    const auto add = [&](double x, std::size_t c, int times) {
        for (int i = 0; i < times; ++i) {
            rows.push_back({{value::number(x)}, c});
        }
    };
    // Interval 1: [4.30, 5.02)
    add(4.3, 0, 1);
    add(4.5, 0, 10);
    add(4.8, 0, 10);
    add(5.0, 0, 5);
    add(4.9, 1, 3);
    add(4.9, 2, 1);
    // Interval 2: [5.02, 5.74)
    add(5.1, 0, 8);
    add(5.4, 0, 8);
    add(5.5, 1, 8);
    add(5.6, 1, 7);
    add(5.7, 2, 2);
    // Intervals 3-5
    add(6.0, 1, 10);
    add(6.2, 2, 5);
    add(6.8, 1, 4);
    add(6.9, 2, 12);
    add(7.5, 2, 6);
    add(7.9, 2, 1);
    return dataset(make_schema({attribute_kind::continuous}, 3), std::move(rows));
}

struct random_spec {
    std::size_t n = 50;
    std::vector<attribute_kind> kinds;
    std::size_t classes = 3;
    /// Distinct codes per nominal attribute.
    std::uint32_t nominal_values = 4;
    double unknown_rate = 0.0;
    /// Continuous values are rounded to this many decimals, which creates duplicates.
    int decimals = 1;
};

inline dataset random_dataset(std::mt19937_64& rng, const random_spec& spec) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<instance> rows;
    const double scale = std::pow(10.0, spec.decimals);
    for (std::size_t i = 0; i < spec.n; ++i) {
        instance inst;
        inst.class_index = static_cast<std::size_t>(rng() % spec.classes);
        for (const auto kind : spec.kinds) {
            if (unit(rng) < spec.unknown_rate) {
                inst.values.push_back(value::unknown());
                continue;
            }
            switch (kind) {
            case attribute_kind::continuous:
                // Class-dependent shift so neighbors carry some signal.
                inst.values.push_back(value::number(
                    std::round((unit(rng) * 10.0 + static_cast<double>(inst.class_index)) * scale) / scale));
                break;
            case attribute_kind::linear_discrete:
                inst.values.push_back(value::number(static_cast<double>(rng() % 6)));
                break;
            case attribute_kind::nominal:
                inst.values.push_back(value::code(static_cast<nominal_code>(rng() % spec.nominal_values)));
                break;
            }
        }
        rows.push_back(std::move(inst));
    }
    return dataset(make_schema(spec.kinds, spec.classes), std::move(rows));
}

inline std::vector<attribute_kind> random_kinds(std::mt19937_64& rng, std::size_t m) {
    std::vector<attribute_kind> kinds;
    for (std::size_t a = 0; a < m; ++a) {
        kinds.push_back(static_cast<attribute_kind>(rng() % 3));
    }
    return kinds;
}

/// Window probabilities at center x recounted from scratch over [x - w/2, x + w/2).
/// The center itself always counts, matching the learner when x + w/2 rounds to x.
inline std::vector<double> brute_window(const std::vector<std::pair<double, std::size_t>>& samples, double x,
                                        double width, std::size_t classes) {
    std::vector<double> counts(classes, 0.0);
    double total = 0.0;
    const double lo = x - width / 2.0;
    const double hi = x + width / 2.0;
    for (const auto& [v, c] : samples) {
        if (v >= lo && (v < hi || v == x)) {
            counts[c] += 1.0;
            total += 1.0;
        }
    }
    for (auto& p : counts) {
        p /= total;
    }
    return counts;
}

/// Full ranking of every training index by (distance, index) using a plain sort.
inline std::vector<neighbor> brute_ranking(const prepared_metric& metric, const dataset& train, const instance& q) {
    std::vector<neighbor> all;
    for (std::size_t i = 0; i < train.size(); ++i) {
        all.push_back({i, metric.distance(q, train[i])});
    }
    std::stable_sort(all.begin(), all.end(), [](const neighbor& a, const neighbor& b) { return a.distance < b.distance; });
    return all;
}

/// Paired t statistic straight from the textbook formula.
inline double textbook_t(const std::vector<double>& a, const std::vector<double>& b) {
    const auto n = static_cast<double>(a.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += a[i] - b[i];
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i] - mean;
        ss += d * d;
    }
    const double var = ss / (n - 1.0);
    return mean / std::sqrt(var / n);
}

}  // namespace hetdist::testing

#endif
