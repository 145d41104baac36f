#include "sstb/sourcegen.hpp"

#include "sstb/error.hpp"

#include <cmath>

namespace sstb {

std::vector<int> SoftLabelMatrix::classes() const {
    std::vector<int> out(static_cast<std::size_t>(values.cols()));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<int>(i) / n_per_class;
    }
    return out;
}

SoftLabelMatrix generate_soft_labels(int num_classes, int n_per_class, double a, double b,
                                     Rng& rng) {
    if (num_classes < 2 || n_per_class < 1) {
        throw ConfigError("soft labels need at least 2 classes and 1 sample per class");
    }
    if (!(a > 0.0) || !(b > 0.0)) {
        throw ConfigError("Beta parameters must be positive");
    }
    std::gamma_distribution<double> gamma_a(a, 1.0);
    std::gamma_distribution<double> gamma_b(b, 1.0);
    std::uniform_int_distribution<int> other(1, num_classes - 1);

    SoftLabelMatrix out{Matrix::Zero(num_classes, num_classes * n_per_class), n_per_class};
    for (int c = 0; c < num_classes; ++c) {
        for (int i = 0; i < n_per_class; ++i) {
            const double x = gamma_a(rng);
            const double y = gamma_b(rng);
            const double beta = x + y > 0.0 ? x / (x + y) : 0.5;
            const double alpha = std::max(beta, 1.0 - beta);
            const int r = (c + other(rng)) % num_classes;
            const int col = c * n_per_class + i;
            out.values(c, col) = alpha;
            out.values(r, col) += 1.0 - alpha;
        }
    }
    return out;
}

FeatureMatrix reconstruct_features(const LinearModel& theta, const SoftLabelMatrix& soft_labels,
                                   double lambda) {
    const auto J = theta.outputs();
    if (J > theta.inputs()) {
        throw ValidationError("reconstruction needs classes <= feature dimension");
    }
    if (soft_labels.values.rows() != J) {
        throw ValidationError("soft labels and linear layer disagree on the class count");
    }
    if (!(lambda >= 0.0)) {
        throw ConfigError("reconstruction lambda must be non-negative");
    }
    Eigen::MatrixXd gram = theta.weights * theta.weights.transpose();
    gram.diagonal().array() += lambda;
    const Eigen::MatrixXd rhs = soft_labels.values.colwise() - theta.bias;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success) {
        throw ValidationError("reconstruction: Gram matrix factorization failed");
    }
    const Eigen::MatrixXd coeffs = ldlt.solve(rhs);  // J x M
    return (theta.weights.transpose() * coeffs).transpose();
}

FeatureMatrix align_moments(const FeatureMatrix& synth, const FeatureMatrix& target) {
    if (synth.cols() != target.cols()) {
        throw ValidationError("align_moments: feature dimensions differ");
    }
    if (synth.rows() < 2 || target.rows() < 2) {
        throw ValidationError("align_moments: need at least 2 rows on each side");
    }
    const RowVector mean_s = column_mean(synth);
    const RowVector std_s = column_std(synth);
    const RowVector mean_t = column_mean(target);
    const RowVector std_t = column_std(target);
    FeatureMatrix out(synth.rows(), synth.cols());
    for (Eigen::Index c = 0; c < synth.cols(); ++c) {
        if (std_s(c) == 0.0) {
            out.col(c).setConstant(mean_t(c));
        } else {
            const double scale = std_t(c) / std_s(c);
            out.col(c) = synth.col(c).array() * scale + (mean_t(c) - mean_s(c) * scale);
        }
    }
    return out;
}

SynthesizedSource synthesize_source(const LinearModel& theta, const FeatureMatrix& target_features,
                                    const SourceSynthesisConfig& cfg, Rng& rng) {
    if (target_features.cols() != theta.inputs()) {
        throw ValidationError("target features and linear layer disagree on the dimension");
    }
    SynthesizedSource out;
    out.soft_labels = generate_soft_labels(static_cast<int>(theta.outputs()), cfg.n_per_class,
                                           cfg.beta_a, cfg.beta_b, rng);
    out.unaligned = reconstruct_features(theta, out.soft_labels, cfg.lambda);
    out.data.features = align_moments(out.unaligned, target_features);
    out.data.labels = {out.soft_labels.classes(), static_cast<int>(theta.outputs())};
    return out;
}

}  // namespace sstb
