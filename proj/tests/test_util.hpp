#pragma once

#include "sstb/types.hpp"

#include <random>

namespace sstb::testing {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double lo = -1.0,
                            double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = u(rng);
        }
    }
    return m;
}

inline Vector random_vector(Eigen::Index n, Rng& rng, double lo = -1.0, double hi = 1.0) {
    return random_matrix(n, 1, rng, lo, hi).col(0);
}

inline int random_int(int lo, int hi, Rng& rng) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Relative error with an absolute floor.
inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace sstb::testing
