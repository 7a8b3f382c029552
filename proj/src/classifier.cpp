#include "hetdist/classifier.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace hetdist {

knn_model::knn_model(dataset train, prepared_metric metric, std::size_t k)
    : train_(std::move(train)), metric_(std::move(metric)), k_(k) {}

knn_model knn_model::fit(dataset train, metric_kind kind, const discretization_config& config, std::size_t k) {
    if (train.empty()) {
        throw std::invalid_argument("training set is empty");
    }
    if (k == 0 || k > train.size()) {
        throw std::invalid_argument("k must lie in [1, n]");
    }
    auto metric = prepared_metric::prepare(kind, train, config);
    return knn_model(std::move(train), std::move(metric), k);
}

std::vector<neighbor> knn_model::nearest(const instance& query, std::size_t count) const {
    if (count > train_.size()) {
        throw std::invalid_argument("more neighbors requested than training instances");
    }
    std::vector<neighbor> all(train_.size());
    for (std::size_t i = 0; i < train_.size(); ++i) {
        all[i] = {i, metric_.distance(query, train_[i])};
    }
    const auto closer = [](const neighbor& a, const neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    };
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count), all.end(), closer);
    all.resize(count);
    return all;
}

std::size_t knn_model::classify(const instance& query) const {
    const auto neighbors = nearest(query, k_);
    const auto C = train_.schema().class_count();
    std::vector<std::size_t> votes(C, 0);
    // Rank of each class's closest neighbor; neighbors are already in rank order.
    std::vector<std::size_t> first_rank(C, std::numeric_limits<std::size_t>::max());
    for (std::size_t r = 0; r < neighbors.size(); ++r) {
        const auto c = train_[neighbors[r].index].class_index;
        ++votes[c];
        first_rank[c] = std::min(first_rank[c], r);
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < C; ++c) {
        if (votes[c] > votes[best] || (votes[c] == votes[best] && first_rank[c] < first_rank[best])) {
            best = c;
        }
    }
    return best;
}

}  // namespace hetdist
