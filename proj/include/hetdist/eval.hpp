#ifndef HETDIST_EVAL_HPP
#define HETDIST_EVAL_HPP

#include "hetdist/dataset.hpp"
#include "hetdist/metrics.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

/**
 * @file eval.hpp
 *
 * @brief Cross-validation, paired t-tests, attribute-distance averages and learning curves.
 */

namespace hetdist {

/**
 * @brief Seeded, unstratified assignment of instances to folds. Fold sizes differ by at most one.
 *
 * Instances are shuffled once and dealt round-robin. Training and test sets list their instances
 * in shuffled order, so nearest-neighbor distance ties do not follow the file order.
 */
struct fold_plan {
    std::uint64_t seed = 0;
    std::size_t fold_count = 0;
    /// Fold of each instance.
    std::vector<std::size_t> assignment;
    /// The shuffled instance order.
    std::vector<std::size_t> order;

    std::size_t size() const noexcept { return assignment.size(); }
    /// Instances of fold f, in shuffled order.
    std::vector<std::size_t> test_indices(std::size_t f) const;
    /// Instances of every other fold, in shuffled order.
    std::vector<std::size_t> train_indices(std::size_t f) const;
};

fold_plan make_folds(std::size_t n, std::size_t fold_count, std::uint64_t seed);

/// Deterministic Fisher-Yates permutation of 0..n-1 driven by mt19937_64.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

struct t_test_result {
    /// +/-infinity when every difference is the same nonzero value.
    double t = 0.0;
    bool significant = false;
};

/// Two-tailed critical t value from the built-in table (df 1..30; larger df use the df = 30 row).
/// Supported confidences are 0.90, 0.95 and 0.99.
double t_critical(std::size_t df, double confidence);

/// Two-tailed paired t-test on per-fold accuracies of two metrics.
t_test_result paired_t_test(std::span<const double> acc_a, std::span<const double> acc_b, double confidence = 0.90);

struct eval_options {
    std::size_t k = 1;
    discretization_config discretization;
    double confidence = 0.90;
    /// Folds evaluated concurrently; results do not depend on this.
    std::size_t threads = 1;
};

struct metric_result {
    metric_kind kind;
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
};

struct eval_report {
    struct pair_test {
        std::size_t first = 0;
        std::size_t second = 0;
        t_test_result result;
    };

    std::vector<metric_result> metrics;
    /// One entry per unordered metric pair (first < second), testing first against second.
    std::vector<pair_test> tests;
    double confidence = 0.90;

    /// Test of metric i against metric j; t(i, j) = -t(j, i).
    t_test_result compare(std::size_t i, std::size_t j) const;
};

/// All metrics are fitted and scored on the same splits.
eval_report cross_validate(const dataset& data, std::span<const metric_kind> kinds, const fold_plan& plan,
                           const eval_options& options = {});

struct attribute_distance_report {
    vdm_norm norm = vdm_norm::n2;
    /// Mean unsquared attribute distance over all (test, train) comparisons.
    std::vector<double> per_attribute;
    /// Mean of per_attribute over linear attributes; absent when there are none.
    std::optional<double> avg_lin;
    /// Mean of per_attribute over nominal attributes; absent when there are none.
    std::optional<double> avg_nom;
};

/**
 * @brief For every fold, compares each test instance to each training instance attribute by attribute
 * with the HVDM attribute distance under `norm` (unknown = 1).
 */
attribute_distance_report avg_attribute_distance(const dataset& data, const fold_plan& plan, vdm_norm norm,
                                                 const discretization_config& config = {});

struct learning_curve_report {
    std::vector<double> percentages;
    std::vector<metric_kind> kinds;
    /// accuracy[metric][percentage]; absent when some fold's subsample is empty.
    std::vector<std::vector<std::optional<double>>> accuracy;
};

/**
 * @brief Accuracy when each fold's training set is cut down to a percentage of its size.
 *
 * Subsamples are nested: a smaller percentage keeps a prefix of the same seeded permutation.
 * Chosen instances keep their training-set order, so 100% reproduces cross_validate(). k is capped at
 * the subsample size.
 */
learning_curve_report learning_curve(const dataset& data, std::span<const metric_kind> kinds,
                                     std::span<const double> percentages, const fold_plan& plan, std::uint64_t seed,
                                     const eval_options& options = {});

enum class report_format { text, csv };

/**
 * @brief Metrics as columns, one row per fold plus a mean row. The last metric is the reference:
 * a mean marked `*` is significantly higher than the reference, `<` significantly lower.
 */
std::string format_comparison(const eval_report& report, report_format format);

/// One line per metric: name, mean accuracy and fold count.
std::string format_summary(const eval_report& report, report_format format);

std::string format_attribute_distances(const dataset& data, std::span<const attribute_distance_report> reports,
                                       report_format format);

std::string format_learning_curve(const learning_curve_report& report, report_format format);

}  // namespace hetdist

#endif
