#pragma once

#include "sstb/types.hpp"

#include <filesystem>
#include <optional>
#include <ostream>

namespace sstb {

struct LoadedFeatures {
    FeatureMatrix features;
    std::optional<OneHotLabels> labels;
};

/// Reads a feature CSV: header f0..f{d-1}[,label], then one sample per line.
/// With `has_labels` the final column is a 0-based class index; J is
/// `num_classes` when given, otherwise max index + 1.
LoadedFeatures load_features(const std::filesystem::path& path, bool has_labels,
                             std::optional<int> num_classes = std::nullopt);
LoadedFeatures parse_features(std::istream& in, bool has_labels,
                              std::optional<int> num_classes = std::nullopt);

/// Writes features (and labels, when given) with 17 significant digits.
void write_features(std::ostream& out, const FeatureMatrix& features,
                    const OneHotLabels* labels = nullptr);
void save_features(const std::filesystem::path& path, const FeatureMatrix& features,
                   const OneHotLabels* labels = nullptr);

/// Parameters of the synthetic Gaussian-cluster domain-shift benchmark.
struct ShiftBenchmarkConfig {
    int num_classes = 4;
    int dims = 20;
    int n_source = 400;
    int n_target = 600;
    double shift = 0.5;
    std::uint64_t seed = 0;
    int n_shot = 3;
    /// Norm of each class mean (within-class std is 1).
    double class_separation = 3.0;
    /// Fraction of source samples whose label is replaced by a different random class.
    double source_label_noise = 0.0;
};

struct ShiftBenchmark {
    DomainBundle bundle;
    LabeledSet test;
};

/// Source: J Gaussian clusters. Target: the same clusters rotated in a random
/// 2-plane by `shift` radians and translated by `shift` along a random unit
/// direction. The non-labeled target remainder is split evenly into the
/// unlabeled pool and the test set. Pure function of the config.
ShiftBenchmark make_shift_benchmark(const ShiftBenchmarkConfig& cfg);

}  // namespace sstb
