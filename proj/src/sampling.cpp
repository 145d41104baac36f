#include "sstb/sampling.hpp"

#include "sstb/error.hpp"

#include <algorithm>
#include <iterator>

namespace sstb {

namespace {

std::vector<std::size_t> class_pool(const OneHotLabels& labels, int cls) {
    std::vector<std::size_t> pool;
    for (std::size_t n = 0; n < labels.size(); ++n) {
        if (labels.classes[n] == cls) {
            pool.push_back(n);
        }
    }
    return pool;
}

BatchIndexSet weighted_from_class(const std::vector<std::size_t>& pool,
                                  std::span<const double> weights, std::size_t bs, Rng& rng) {
    std::vector<double> w(pool.size());
    std::transform(pool.begin(), pool.end(), w.begin(), [&](std::size_t n) { return weights[n]; });
    return weighted_sample(pool, w, bs, rng);
}

}  // namespace

BatchIndexSet weighted_sample(std::span<const double> weights, std::size_t bs, Rng& rng) {
    if (weights.empty()) {
        throw ValidationError("weighted_sample: empty pool");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw ValidationError("weighted_sample: weights must be non-negative");
        }
        total += w;
    }
    BatchIndexSet out(bs);
    if (total > 0.0) {
        std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
        std::generate(out.begin(), out.end(), [&] { return dist(rng); });
    } else {
        std::uniform_int_distribution<std::size_t> dist(0, weights.size() - 1);
        std::generate(out.begin(), out.end(), [&] { return dist(rng); });
    }
    return out;
}

BatchIndexSet weighted_sample(std::span<const std::size_t> pool, std::span<const double> weights,
                              std::size_t bs, Rng& rng) {
    if (pool.size() != weights.size()) {
        throw ValidationError("weighted_sample: pool and weights differ in length");
    }
    BatchIndexSet out = weighted_sample(weights, bs, rng);
    for (auto& i : out) {
        i = pool[i];
    }
    return out;
}

BatchIndexSet down_sample(std::span<const std::size_t> indices, std::size_t bs, Rng& rng) {
    if (indices.size() < bs) {
        throw ValidationError("down_sample: cannot take " + std::to_string(bs) + " from " +
                              std::to_string(indices.size()));
    }
    BatchIndexSet out;
    out.reserve(bs);
    std::sample(indices.begin(), indices.end(), std::back_inserter(out), bs, rng);
    return out;
}

BatchIndexSet sample_negatives(const OneHotLabels& labels, std::span<const double> weights,
                               int positive_class, std::size_t bs, Rng& rng) {
    BatchIndexSet negatives;
    for (int j = 0; j < labels.num_classes; ++j) {
        if (j == positive_class) {
            continue;
        }
        const auto pool = class_pool(labels, j);
        if (pool.empty()) {
            continue;
        }
        const auto drawn = weighted_from_class(pool, weights, bs, rng);
        negatives.insert(negatives.end(), drawn.begin(), drawn.end());
    }
    if (negatives.empty()) {
        return negatives;
    }
    return down_sample(negatives, bs, rng);
}

BatchIndexSet balanced_sample(const OneHotLabels& labels, std::span<const double> weights,
                              int positive_class, std::size_t bs, Rng& rng) {
    if (weights.size() != labels.size()) {
        throw ValidationError("balanced_sample: weights and labels differ in length");
    }
    if (bs < 1) {
        throw ConfigError("balanced_sample: batch size must be at least 1");
    }
    const auto positives_pool = class_pool(labels, positive_class);
    if (positives_pool.empty()) {
        throw ValidationError("balanced_sample: class " + std::to_string(positive_class) +
                              " has no samples");
    }
    BatchIndexSet out = weighted_from_class(positives_pool, weights, bs, rng);
    const auto negatives = sample_negatives(labels, weights, positive_class, bs, rng);
    out.insert(out.end(), negatives.begin(), negatives.end());
    return out;
}

}  // namespace sstb
