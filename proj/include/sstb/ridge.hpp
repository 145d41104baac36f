#pragma once

#include "sstb/sampling.hpp"
#include "sstb/types.hpp"

namespace sstb {

/// Linear scores X W' + b. Row j of `weights` and entry j of `bias` form output j.
struct LinearModel {
    Matrix weights;  ///< outputs x inputs
    Vector bias;     ///< outputs

    Eigen::Index outputs() const noexcept { return weights.rows(); }
    Eigen::Index inputs() const noexcept { return weights.cols(); }
};

struct RidgeDiagnostics {
    /// True when the normal equations were singular and the jitter floor was added.
    bool jittered = false;
};

inline constexpr double kRidgeJitter = 1e-10;

/// Minimizes sum (x b + c - y)^2 + lambda |b|^2 with an unpenalized intercept c.
LinearModel fit_ridge(const Matrix& x, const Vector& y, double lambda,
                      RidgeDiagnostics* diagnostics = nullptr);

/// Weighted form: sum w_n (x_n b + c - y_n)^2 + lambda |b|^2. Weights must be
/// non-negative with a positive sum.
LinearModel fit_ridge_weighted(const Matrix& x, const Vector& y, const Vector& weights,
                               double lambda, RidgeDiagnostics* diagnostics = nullptr);

/// Fits one ridge learner per class. Learner j is trained on the rows of
/// `mapped` listed in batches[j] (duplicates repeat the row) against column j
/// of `responses`. Returns the learners stacked as a J-output model.
/// Up to `threads` fits run concurrently; results do not depend on it.
LinearModel fit_block_learners(const Matrix& mapped, const Matrix& responses,
                               const std::vector<BatchIndexSet>& batches, double lambda,
                               int threads = 1);

/// N x outputs scores.
Matrix predict_linear(const LinearModel& model, const Matrix& features);

}  // namespace sstb

namespace sstb {

/// One-vs-rest ridge classifier on +1/-1 coded targets: J x d weights.
LinearModel fit_ridge_classifier(const Matrix& x, const OneHotLabels& y, double lambda);

}  // namespace sstb
