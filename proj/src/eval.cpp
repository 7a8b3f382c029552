#include "hetdist/eval.hpp"

#include "hetdist/classifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace hetdist {

namespace {

// Two-tailed critical values of Student's t for df = 1..30.
constexpr std::array<double, 30> t90 = {6.314, 2.920, 2.353, 2.132, 2.015, 1.943, 1.895, 1.860, 1.833, 1.812,
                                        1.796, 1.782, 1.771, 1.761, 1.753, 1.746, 1.740, 1.734, 1.729, 1.725,
                                        1.721, 1.717, 1.714, 1.711, 1.708, 1.706, 1.703, 1.701, 1.699, 1.697};
constexpr std::array<double, 30> t95 = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                                        2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
                                        2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
constexpr std::array<double, 30> t99 = {63.657, 9.925, 5.841, 4.604, 4.032, 3.707, 3.499, 3.355, 3.250, 3.169,
                                        3.106,  3.055, 3.012, 2.977, 2.947, 2.921, 2.898, 2.878, 2.861, 2.845,
                                        2.831,  2.819, 2.807, 2.797, 2.787, 2.779, 2.771, 2.763, 2.756, 2.750};

// Unbiased draw from [0, bound) by rejection.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r = 0;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

std::vector<std::size_t> permutation(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(bounded(rng, i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

// Runs fn(f) for every fold, on up to `threads` workers. Each fold writes only its own slot.
template <typename Fn>
void for_each_fold(std::size_t folds, std::size_t threads, Fn&& fn) {
    threads = std::clamp<std::size_t>(threads, 1, folds);
    if (threads == 1) {
        for (std::size_t f = 0; f < folds; ++f) {
            fn(f);
        }
        return;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            try {
                for (std::size_t f = t; f < folds; f += threads) {
                    fn(f);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) {
        w.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

void check_plan(const dataset& data, const fold_plan& plan) {
    if (plan.size() != data.size()) {
        throw std::invalid_argument("fold plan was made for a dataset of a different size");
    }
}

double accuracy(const knn_model& model, const dataset& data, std::span<const std::size_t> test) {
    if (test.empty()) {
        return 0.0;
    }
    std::size_t correct = 0;
    for (const auto i : test) {
        if (model.classify(data[i]) == data[i].class_index) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

double mean(std::span<const double> xs) {
    // Fixed left-to-right reduction keeps results identical however folds were scheduled.
    double sum = 0.0;
    for (const double x : xs) {
        sum += x;
    }
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

}  // namespace

std::vector<std::size_t> fold_plan::test_indices(std::size_t f) const {
    std::vector<std::size_t> out;
    for (const auto i : order) {
        if (assignment[i] == f) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> fold_plan::train_indices(std::size_t f) const {
    std::vector<std::size_t> out;
    for (const auto i : order) {
        if (assignment[i] != f) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return permutation(n, rng);
}

fold_plan make_folds(std::size_t n, std::size_t fold_count, std::uint64_t seed) {
    if (fold_count < 2) {
        throw std::invalid_argument("at least two folds are required");
    }
    if (fold_count > n) {
        throw std::invalid_argument("more folds than instances");
    }
    fold_plan plan;
    plan.seed = seed;
    plan.fold_count = fold_count;
    plan.assignment.resize(n);
    plan.order = seeded_permutation(n, seed);
    for (std::size_t pos = 0; pos < n; ++pos) {
        plan.assignment[plan.order[pos]] = pos % fold_count;
    }
    return plan;
}

double t_critical(std::size_t df, double confidence) {
    if (df == 0) {
        throw std::invalid_argument("degrees of freedom must be positive");
    }
    const std::array<double, 30>* table = nullptr;
    if (std::abs(confidence - 0.90) < 1e-12) {
        table = &t90;
    } else if (std::abs(confidence - 0.95) < 1e-12) {
        table = &t95;
    } else if (std::abs(confidence - 0.99) < 1e-12) {
        table = &t99;
    } else {
        throw std::invalid_argument("supported confidence levels are 0.90, 0.95 and 0.99");
    }
    return (*table)[std::min<std::size_t>(df, 30) - 1];
}

t_test_result paired_t_test(std::span<const double> acc_a, std::span<const double> acc_b, double confidence) {
    if (acc_a.size() != acc_b.size()) {
        throw std::invalid_argument("paired t-test needs equally long accuracy lists");
    }
    const auto f = acc_a.size();
    if (f < 2) {
        throw std::invalid_argument("paired t-test needs at least two folds");
    }
    std::vector<double> d(f);
    for (std::size_t i = 0; i < f; ++i) {
        d[i] = acc_a[i] - acc_b[i];
    }
    const double md = mean(d);
    double ss = 0.0;
    for (const double x : d) {
        ss += (x - md) * (x - md);
    }
    const double sd = std::sqrt(ss / static_cast<double>(f - 1));
    if (sd == 0.0) {
        if (md == 0.0) {
            return {0.0, false};
        }
        return {std::copysign(std::numeric_limits<double>::infinity(), md), true};
    }
    const double t = md / (sd / std::sqrt(static_cast<double>(f)));
    return {t, std::abs(t) > t_critical(f - 1, confidence)};
}

t_test_result eval_report::compare(std::size_t i, std::size_t j) const {
    for (const auto& p : tests) {
        if (p.first == i && p.second == j) {
            return p.result;
        }
        if (p.first == j && p.second == i) {
            return {-p.result.t, p.result.significant};
        }
    }
    throw std::out_of_range("no test recorded for this metric pair");
}

eval_report cross_validate(const dataset& data, std::span<const metric_kind> kinds, const fold_plan& plan,
                           const eval_options& options) {
    check_plan(data, plan);
    const auto folds = plan.fold_count;
    std::vector<std::vector<double>> acc(kinds.size(), std::vector<double>(folds, 0.0));

    for_each_fold(folds, options.threads, [&](std::size_t f) {
        const auto train_idx = plan.train_indices(f);
        const auto test_idx = plan.test_indices(f);
        const auto train = data.subset(train_idx);
        for (std::size_t m = 0; m < kinds.size(); ++m) {
            const auto model = knn_model::fit(train, kinds[m], options.discretization, options.k);
            acc[m][f] = accuracy(model, data, test_idx);
        }
    });

    eval_report report;
    report.confidence = options.confidence;
    for (std::size_t m = 0; m < kinds.size(); ++m) {
        report.metrics.push_back({kinds[m], acc[m], mean(acc[m])});
    }
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        for (std::size_t j = i + 1; j < kinds.size(); ++j) {
            report.tests.push_back({i, j, paired_t_test(acc[i], acc[j], options.confidence)});
        }
    }
    return report;
}

attribute_distance_report avg_attribute_distance(const dataset& data, const fold_plan& plan, vdm_norm norm,
                                                 const discretization_config& config) {
    check_plan(data, plan);
    const auto& sch = data.schema();
    const auto m = sch.attribute_count();
    const auto C = sch.class_count();
    std::vector<double> sums(m, 0.0);
    std::size_t comparisons = 0;

    for (std::size_t f = 0; f < plan.fold_count; ++f) {
        const auto train = data.subset(plan.train_indices(f));
        const auto vdm = vdm_table::learn(train, config);
        for (const auto i : plan.test_indices(f)) {
            const auto& x = data[i];
            for (const auto& y : train.instances()) {
                for (std::size_t a = 0; a < m; ++a) {
                    const auto& xa = x.values[a];
                    const auto& ya = y.values[a];
                    if (xa.is_unknown() || ya.is_unknown()) {
                        sums[a] += 1.0;
                    } else if (sch.attributes[a].kind == attribute_kind::nominal) {
                        sums[a] += normalized_vdm(vdm.probabilities(a, xa), vdm.probabilities(a, ya), norm, C);
                    } else {
                        sums[a] += normalized_diff(xa.as_number(), ya.as_number(), train.stats(a).sigma);
                    }
                }
                ++comparisons;
            }
        }
    }

    attribute_distance_report report;
    report.norm = norm;
    report.per_attribute.resize(m, 0.0);
    double lin = 0.0;
    double nom = 0.0;
    std::size_t lin_count = 0;
    std::size_t nom_count = 0;
    for (std::size_t a = 0; a < m; ++a) {
        report.per_attribute[a] = comparisons == 0 ? 0.0 : sums[a] / static_cast<double>(comparisons);
        if (is_linear(sch.attributes[a].kind)) {
            lin += report.per_attribute[a];
            ++lin_count;
        } else {
            nom += report.per_attribute[a];
            ++nom_count;
        }
    }
    if (lin_count > 0) {
        report.avg_lin = lin / static_cast<double>(lin_count);
    }
    if (nom_count > 0) {
        report.avg_nom = nom / static_cast<double>(nom_count);
    }
    return report;
}

learning_curve_report learning_curve(const dataset& data, std::span<const metric_kind> kinds,
                                     std::span<const double> percentages, const fold_plan& plan, std::uint64_t seed,
                                     const eval_options& options) {
    check_plan(data, plan);
    for (const double p : percentages) {
        if (!(p > 0.0 && p <= 100.0)) {
            throw std::invalid_argument("percentages must lie in (0, 100]");
        }
    }
    const auto folds = plan.fold_count;
    const auto P = percentages.size();
    // acc[m][p][f]; absent[p] when any fold's subsample is empty.
    std::vector<std::vector<std::vector<double>>> acc(
        kinds.size(), std::vector<std::vector<double>>(P, std::vector<double>(folds, 0.0)));
    std::vector<std::vector<char>> empty_cell(P, std::vector<char>(folds, 0));

    for_each_fold(folds, options.threads, [&](std::size_t f) {
        const auto train_idx = plan.train_indices(f);
        const auto test_idx = plan.test_indices(f);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(f)};
        std::mt19937_64 rng(seq);
        const auto order = permutation(train_idx.size(), rng);

        for (std::size_t p = 0; p < P; ++p) {
            const auto count = static_cast<std::size_t>(
                std::floor(percentages[p] * static_cast<double>(train_idx.size()) / 100.0 + 1e-9));
            if (count == 0) {
                empty_cell[p][f] = 1;
                continue;
            }
            // Keep the chosen instances in training-set order.
            std::vector<std::size_t> positions(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
            std::sort(positions.begin(), positions.end());
            std::vector<std::size_t> chosen;
            chosen.reserve(count);
            for (const auto pos : positions) {
                chosen.push_back(train_idx[pos]);
            }
            const auto train = data.subset(chosen);
            const auto k = std::min(options.k, count);
            for (std::size_t m = 0; m < kinds.size(); ++m) {
                const auto model = knn_model::fit(train, kinds[m], options.discretization, k);
                acc[m][p][f] = accuracy(model, data, test_idx);
            }
        }
    });

    learning_curve_report report;
    report.percentages.assign(percentages.begin(), percentages.end());
    report.kinds.assign(kinds.begin(), kinds.end());
    report.accuracy.assign(kinds.size(), std::vector<std::optional<double>>(P));
    for (std::size_t p = 0; p < P; ++p) {
        const bool absent = std::any_of(empty_cell[p].begin(), empty_cell[p].end(), [](char e) { return e != 0; });
        if (absent) {
            continue;
        }
        for (std::size_t m = 0; m < kinds.size(); ++m) {
            report.accuracy[m][p] = mean(acc[m][p]);
        }
    }
    return report;
}

}  // namespace hetdist
