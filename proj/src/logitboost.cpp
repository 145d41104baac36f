#include "sstb/logitboost.hpp"

#include "sstb/error.hpp"

#include <cmath>

namespace sstb {

namespace {

constexpr double kDegenerateNorm = 1e-12;

}  // namespace

Vector softmax_prob(const Vector& logits) {
    if (!logits.allFinite()) {
        throw ValidationError("softmax_prob: non-finite logit");
    }
    const Vector e = (logits.array() - logits.maxCoeff()).exp();
    return e / e.sum();
}

double pseudo_label(double y_indicator, double p, double w) {
    if (!(w > 0.0)) {
        throw ValidationError("pseudo_label: weight must be positive");
    }
    const double raw = (y_indicator - p) / w;
    return std::max(-kResponseClamp, std::min(kResponseClamp, raw));
}

DerivativePair logit_derivatives(const Vector& logits, const Vector& y_onehot) {
    if (logits.size() != y_onehot.size()) {
        throw ValidationError("logit_derivatives: logits and labels differ in length");
    }
    const Vector p = softmax_prob(logits);
    return {p - y_onehot, (p.array() * (1.0 - p.array())).matrix()};
}

double cross_entropy(const Vector& logits, int label) {
    const double m = logits.maxCoeff();
    const double lse = m + std::log((logits.array() - m).exp().sum());
    return lse - logits(label);
}

Vector normalize_initial(const Vector& raw) {
    const Vector centered = raw.array() - raw.mean();
    const double norm = centered.norm();
    if (norm < kDegenerateNorm) {
        return Vector::Zero(raw.size());
    }
    return centered / norm;
}

Vector norm_learner(const Vector& raw) {
    const double J = static_cast<double>(raw.size());
    Vector f = (J - 1.0) / J * (raw.array() - raw.mean());
    f = f.cwiseMax(-kResponseClamp).cwiseMin(kResponseClamp);
    const double norm = f.norm();
    if (norm < kDegenerateNorm) {
        return Vector::Zero(raw.size());
    }
    return f / norm;
}

Matrix normalize_initial_rows(const Matrix& raw) {
    Matrix out(raw.rows(), raw.cols());
    for (Eigen::Index n = 0; n < raw.rows(); ++n) {
        out.row(n) = normalize_initial(raw.row(n).transpose()).transpose();
    }
    return out;
}

Matrix norm_learner_rows(const Matrix& raw) {
    Matrix out(raw.rows(), raw.cols());
    for (Eigen::Index n = 0; n < raw.rows(); ++n) {
        out.row(n) = norm_learner(raw.row(n).transpose()).transpose();
    }
    return out;
}

WorkingResponses working_responses(const Matrix& logits, const OneHotLabels& y) {
    WorkingResponses out{Matrix(logits.rows(), logits.cols()), Matrix(logits.rows(), logits.cols())};
    for (Eigen::Index n = 0; n < logits.rows(); ++n) {
        const Vector p = softmax_prob(logits.row(n).transpose());
        const int label = y.classes[static_cast<std::size_t>(n)];
        for (Eigen::Index j = 0; j < logits.cols(); ++j) {
            const double pc = clip_prob(p(j));
            const double w = sample_weight(pc);
            out.weight(n, j) = w;
            out.response(n, j) = pseudo_label(j == label ? 1.0 : 0.0, pc, w);
        }
    }
    return out;
}

}  // namespace sstb
