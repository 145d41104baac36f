#pragma once

#include "sstb/types.hpp"

#include <span>

namespace sstb {

/// Multiset of row indices into a parent dataset; duplicates allowed.
using BatchIndexSet = std::vector<std::size_t>;

/// `bs` draws with replacement from `pool`, index pool[i] with probability
/// w_i / sum(w). An all-zero weight vector falls back to uniform.
BatchIndexSet weighted_sample(std::span<const std::size_t> pool, std::span<const double> weights,
                              std::size_t bs, Rng& rng);

/// Pool-relative form: returns positions in [0, weights.size()).
BatchIndexSet weighted_sample(std::span<const double> weights, std::size_t bs, Rng& rng);

/// Uniform `bs`-subset of the multiset without replacement.
BatchIndexSet down_sample(std::span<const std::size_t> indices, std::size_t bs, Rng& rng);

/// Negative half of balanced sampling: `bs` weighted draws from every class
/// other than `positive_class` that is present, pooled and down-sampled to
/// `bs`. Empty when no other class is present.
BatchIndexSet sample_negatives(const OneHotLabels& labels, std::span<const double> weights,
                               int positive_class, std::size_t bs, Rng& rng);

/// Balanced sampling: `bs` weighted draws from the positive class plus
/// `sample_negatives`. `weights[n]` is sample n's weight in the binary
/// problem of `positive_class`. Throws if the positive class is absent.
BatchIndexSet balanced_sample(const OneHotLabels& labels, std::span<const double> weights,
                              int positive_class, std::size_t bs, Rng& rng);

}  // namespace sstb
