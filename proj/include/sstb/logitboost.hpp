#pragma once

#include "sstb/types.hpp"

#include <algorithm>

namespace sstb {

/// Probability clip bounds and the working-response clamp.
inline constexpr double kProbFloor = 0.0001;
inline constexpr double kProbCeil = 0.9999;
inline constexpr double kResponseClamp = 4.0;

/// Numerically stable softmax (max-subtraction). Throws on non-finite logits.
Vector softmax_prob(const Vector& logits);

inline double clip_prob(double p) { return std::max(kProbFloor, std::min(p, kProbCeil)); }

/// LogitBoost sample weight p(1 - p).
inline double sample_weight(double p) { return p * (1.0 - p); }

/// Working response (y - p) / w clamped to [-4, 4], with y the 0/1 class indicator.
/// This is the Newton step -g/q on the cross-entropy. `w` must be positive.
double pseudo_label(double y_indicator, double p, double w);

struct DerivativePair {
    Vector g;  ///< p - y
    Vector q;  ///< p (1 - p)
};

/// First and second derivatives of the softmax cross-entropy with respect to the logits.
DerivativePair logit_derivatives(const Vector& logits, const Vector& y_onehot);

/// Softmax cross-entropy -log p_y, computed via log-sum-exp.
double cross_entropy(const Vector& logits, int label);

/// Center, then scale to unit L2 norm. A constant vector maps to zeros.
Vector normalize_initial(const Vector& raw);

/// Base-learner output transform: scale the centered vector by (J-1)/J, clamp
/// to [-4, 4], then divide by the L2 norm. A constant vector maps to zeros.
Vector norm_learner(const Vector& raw);

/// Row-wise versions over an N x J score matrix.
Matrix normalize_initial_rows(const Matrix& raw);
Matrix norm_learner_rows(const Matrix& raw);

/// Per-sample, per-class weights and working responses for a set of samples.
struct WorkingResponses {
    Matrix weight;    ///< N x J, w in (0, 0.25] or 0 after removal
    Matrix response;  ///< N x J, in [-4, 4]
};

/// Clipped softmax probabilities of `logits` against 0/1 targets `y`.
WorkingResponses working_responses(const Matrix& logits, const OneHotLabels& y);

}  // namespace sstb
