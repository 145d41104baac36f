#pragma once

#include "sstb/types.hpp"

#include <string>
#include <string_view>

namespace sstb {

enum class Activation { Tanh, Sigmoid, Relu };

std::string_view to_string(Activation a);
/// Throws ConfigError on an unknown name.
Activation parse_activation(std::string_view name);

inline constexpr double kSigmaFloor = 1e-8;

/// Frozen random nonlinear map h(z) = act((z M - mu) / sigma), with mu and
/// sigma the column statistics of the construction set projected through M.
class RandomFeatureMap {
public:
    RandomFeatureMap(Matrix projection, RowVector mu, RowVector sigma, Activation activation,
                     std::uint64_t seed_tag);

    const Matrix& projection() const noexcept { return projection_; }
    const RowVector& mu() const noexcept { return mu_; }
    const RowVector& sigma() const noexcept { return sigma_; }
    Activation activation() const noexcept { return activation_; }
    std::uint64_t seed_tag() const noexcept { return seed_tag_; }

    Eigen::Index input_dims() const noexcept { return projection_.rows(); }
    Eigen::Index node_size() const noexcept { return projection_.cols(); }

    /// Standardized projection before the activation.
    Matrix pre_activation(const FeatureMatrix& features) const;
    /// N x ns mapped features.
    Matrix apply(const FeatureMatrix& features) const;

private:
    Matrix projection_;
    RowVector mu_;
    RowVector sigma_;
    Activation activation_;
    std::uint64_t seed_tag_;
};

/// Draws an i.i.d. N(0, 1) d x ns projection from `rng` and fits mu/sigma on `source`.
RandomFeatureMap build_map(const FeatureMatrix& source, int node_size, Activation activation,
                           Rng& rng);

inline Matrix apply_map(const RandomFeatureMap& map, const FeatureMatrix& features) {
    return map.apply(features);
}

}  // namespace sstb
