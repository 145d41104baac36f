#include "sstb/ridge.hpp"

#include "sstb/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace sstb {

namespace {

// Solves (A + lambda I) beta = rhs, adding the jitter floor when the system
// is numerically singular.
Vector solve_spd(Matrix a, const Vector& rhs, double lambda, RidgeDiagnostics* diagnostics) {
    const Eigen::Index m = a.rows();
    const double scale = std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());
    a.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    bool singular = llt.info() != Eigen::Success;
    if (!singular && m > 0) {
        const double min_pivot = llt.matrixL().toDenseMatrix().diagonal().cwiseAbs().minCoeff();
        singular = min_pivot * min_pivot < 1e-14 * scale;
    }
    if (singular) {
        a.diagonal().array() += kRidgeJitter * scale;
        llt.compute(a);
        if (llt.info() != Eigen::Success) {
            throw ValidationError("ridge: normal equations not positive definite");
        }
        if (diagnostics) {
            diagnostics->jittered = true;
        }
    }
    return llt.solve(rhs);
}

}  // namespace

LinearModel fit_ridge_weighted(const Matrix& x, const Vector& y, const Vector& weights,
                               double lambda, RidgeDiagnostics* diagnostics) {
    if (x.rows() < 1) {
        throw ValidationError("ridge: need at least one sample");
    }
    if (y.size() != x.rows() || weights.size() != x.rows()) {
        throw ValidationError("ridge: sample counts of X, y and weights differ");
    }
    if (!(lambda >= 0.0)) {
        throw ConfigError("ridge: lambda must be non-negative");
    }
    if ((weights.array() < 0.0).any()) {
        throw ValidationError("ridge: negative sample weight");
    }
    const double total = weights.sum();
    if (!(total > 0.0)) {
        throw ValidationError("ridge: sample weights sum to zero");
    }
    if (diagnostics) {
        *diagnostics = {};
    }

    const RowVector x_mean = (weights.transpose() * x) / total;
    const double y_mean = weights.dot(y) / total;
    const Matrix xc = x.rowwise() - x_mean;
    const Vector yc = y.array() - y_mean;

    const Matrix wx = xc.array().colwise() * weights.array();
    const Matrix gram = xc.transpose() * wx;
    const Vector rhs = wx.transpose() * yc;
    const Vector beta = solve_spd(gram, rhs, lambda, diagnostics);

    LinearModel model;
    model.weights = beta.transpose();
    model.bias = Vector::Constant(1, y_mean - x_mean.dot(beta));
    return model;
}

LinearModel fit_ridge(const Matrix& x, const Vector& y, double lambda,
                      RidgeDiagnostics* diagnostics) {
    return fit_ridge_weighted(x, y, Vector::Ones(x.rows()), lambda, diagnostics);
}

LinearModel fit_block_learners(const Matrix& mapped, const Matrix& responses,
                               const std::vector<BatchIndexSet>& batches, double lambda,
                               int threads) {
    const auto J = static_cast<Eigen::Index>(batches.size());
    if (responses.cols() != J || responses.rows() != mapped.rows()) {
        throw ValidationError("fit_block_learners: responses must be N x J");
    }
    LinearModel stacked{Matrix(J, mapped.cols()), Vector(J)};

    auto fit_one = [&](Eigen::Index j) {
        const auto& batch = batches[static_cast<std::size_t>(j)];
        if (batch.empty()) {
            throw ValidationError("fit_block_learners: empty batch for class " +
                                  std::to_string(j));
        }
        std::vector<Eigen::Index> rows(batch.begin(), batch.end());
        const Matrix x = mapped(rows, Eigen::all);
        const Vector y = responses(rows, j);
        const LinearModel learner = fit_ridge(x, y, lambda);
        stacked.weights.row(j) = learner.weights.row(0);
        stacked.bias(j) = learner.bias(0);
    };

    const auto workers = static_cast<Eigen::Index>(std::clamp<int>(threads, 1, static_cast<int>(J)));
    if (workers <= 1) {
        for (Eigen::Index j = 0; j < J; ++j) {
            fit_one(j);
        }
        return stacked;
    }

    std::atomic<Eigen::Index> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    {
        std::vector<std::jthread> pool;
        for (Eigen::Index t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (Eigen::Index j = next++; j < J; j = next++) {
                        fit_one(j);
                    }
                } catch (...) {
                    errors[static_cast<std::size_t>(t)] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return stacked;
}

Matrix predict_linear(const LinearModel& model, const Matrix& features) {
    if (features.cols() != model.inputs()) {
        throw ValidationError("linear model expects " + std::to_string(model.inputs()) +
                              " inputs, got " + std::to_string(features.cols()));
    }
    Matrix scores = features * model.weights.transpose();
    scores.rowwise() += model.bias.transpose();
    return scores;
}

}  // namespace sstb

namespace sstb {

LinearModel fit_ridge_classifier(const Matrix& x, const OneHotLabels& y, double lambda) {
    if (static_cast<std::size_t>(x.rows()) != y.size()) {
        throw ValidationError("ridge classifier: feature rows and label count differ");
    }
    const Matrix targets = 2.0 * y.indicator().array() - 1.0;
    LinearModel out{Matrix(y.num_classes, x.cols()), Vector(y.num_classes)};
    for (int j = 0; j < y.num_classes; ++j) {
        const LinearModel col = fit_ridge(x, targets.col(j), lambda);
        out.weights.row(j) = col.weights.row(0);
        out.bias(j) = col.bias(0);
    }
    return out;
}

}  // namespace sstb
