#pragma once

#include "sstb/ridge.hpp"
#include "sstb/types.hpp"

namespace sstb {

/// J x (J * n_per_class) soft labels; column c * n_per_class + i belongs to class c.
struct SoftLabelMatrix {
    Matrix values;
    int n_per_class = 0;

    int num_classes() const noexcept { return static_cast<int>(values.rows()); }
    /// The class each column was generated for.
    std::vector<int> classes() const;
};

/// Each column puts alpha = max(beta, 1 - beta), beta ~ Beta(a, b), on its own
/// class and 1 - alpha on a uniformly chosen other class.
SoftLabelMatrix generate_soft_labels(int num_classes, int n_per_class, double a, double b,
                                     Rng& rng);

/// Least-norm features z with theta z = y - bias, regularized:
/// z = theta' (theta theta' + lambda I)^-1 (y - bias). Returns one row per soft-label column.
FeatureMatrix reconstruct_features(const LinearModel& theta, const SoftLabelMatrix& soft_labels,
                                   double lambda);

/// Per column: (x - mean_s) * std_t / std_s + mean_t. Constant columns map to mean_t.
FeatureMatrix align_moments(const FeatureMatrix& synth, const FeatureMatrix& target);

struct SynthesizedSource {
    LabeledSet data;
    /// Reconstruction before moment alignment.
    FeatureMatrix unaligned;
    SoftLabelMatrix soft_labels;
};

struct SourceSynthesisConfig {
    int n_per_class = 100;
    double beta_a = 0.75;
    double beta_b = 0.75;
    double lambda = 1e-6;
};

/// Soft labels -> reconstruction -> alignment to `target_features`.
SynthesizedSource synthesize_source(const LinearModel& theta, const FeatureMatrix& target_features,
                                    const SourceSynthesisConfig& cfg, Rng& rng);

}  // namespace sstb
