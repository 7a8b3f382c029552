#ifndef HETDIST_CLASSIFIER_HPP
#define HETDIST_CLASSIFIER_HPP

#include "hetdist/dataset.hpp"
#include "hetdist/metrics.hpp"

#include <cstddef>
#include <vector>

namespace hetdist {

struct neighbor {
    std::size_t index = 0;
    /// Squared-sum distance.
    double distance = 0.0;

    bool operator==(const neighbor&) const = default;
};

/// k-nearest-neighbor classifier over a prepared metric.
class knn_model {
public:
    /// Statistics and tables come from `train` only.
    static knn_model fit(dataset train, metric_kind kind, const discretization_config& config = {}, std::size_t k = 1);

    const dataset& train() const noexcept { return train_; }
    const prepared_metric& metric() const noexcept { return metric_; }
    std::size_t k() const noexcept { return k_; }

    /// The `count` closest training instances, ascending by distance, ties by ascending index.
    std::vector<neighbor> nearest(const instance& query, std::size_t count) const;

    /**
     * Majority vote over the k nearest. A tied vote goes to the tied class whose closest
     * neighbor ranks first.
     */
    std::size_t classify(const instance& query) const;

private:
    knn_model(dataset train, prepared_metric metric, std::size_t k);

    dataset train_;
    prepared_metric metric_;
    std::size_t k_;
};

}  // namespace hetdist

#endif
