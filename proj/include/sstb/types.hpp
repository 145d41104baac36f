#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace sstb {

/// Rows are samples, columns are features.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// The single seeded stream every stochastic step draws from.
using Rng = std::mt19937_64;

/// N x d feature table; all values finite.
using FeatureMatrix = Matrix;

/// Integer class labels in [0, J) together with the class count J.
/// The one-hot indicator is derived on demand.
struct OneHotLabels {
    std::vector<int> classes;
    int num_classes = 0;

    std::size_t size() const noexcept { return classes.size(); }

    /// N x J indicator matrix with exactly one 1 per row.
    Matrix indicator() const;

    /// Number of samples in each class.
    std::vector<std::size_t> counts() const;
};

struct LabeledSet {
    FeatureMatrix features;
    OneHotLabels labels;

    std::size_t size() const noexcept { return static_cast<std::size_t>(features.rows()); }
};

/// Labeled source, labeled target and unlabeled target features sharing one feature space.
struct DomainBundle {
    LabeledSet source;
    LabeledSet target_labeled;
    FeatureMatrix target_unlabeled;

    int num_classes() const noexcept { return source.labels.num_classes; }
    Eigen::Index dims() const noexcept { return source.features.cols(); }

    /// Throws ValidationError when the shared-dimension, shared-J or n-shot invariants fail.
    void validate() const;
};

/// Throws ValidationError naming the first non-finite entry.
void require_finite(const Matrix& m, const char* what);

/// Row argmax; ties go to the lowest index.
int argmax(const Eigen::Ref<const RowVector>& row);
std::vector<int> row_argmax(const Matrix& scores);

/// Column means and population standard deviations.
RowVector column_mean(const Matrix& m);
RowVector column_std(const Matrix& m);

}  // namespace sstb
