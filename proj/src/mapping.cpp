#include "sstb/mapping.hpp"

#include "sstb/error.hpp"

#include <cmath>

namespace sstb {

std::string_view to_string(Activation a) {
    switch (a) {
    case Activation::Tanh:
        return "tanh";
    case Activation::Sigmoid:
        return "sigmoid";
    case Activation::Relu:
        return "relu";
    }
    return "tanh";
}

Activation parse_activation(std::string_view name) {
    if (name == "tanh") {
        return Activation::Tanh;
    }
    if (name == "sigmoid") {
        return Activation::Sigmoid;
    }
    if (name == "relu") {
        return Activation::Relu;
    }
    throw ConfigError("unknown activation '" + std::string(name) + "' (tanh, sigmoid, relu)");
}

RandomFeatureMap::RandomFeatureMap(Matrix projection, RowVector mu, RowVector sigma,
                                   Activation activation, std::uint64_t seed_tag)
    : projection_(std::move(projection)),
      mu_(std::move(mu)),
      sigma_(std::move(sigma)),
      activation_(activation),
      seed_tag_(seed_tag) {
    if (mu_.size() != projection_.cols() || sigma_.size() != projection_.cols()) {
        throw ValidationError("feature map: mu/sigma length must equal the node size");
    }
    if ((sigma_.array() < kSigmaFloor).any()) {
        throw ValidationError("feature map: sigma below floor");
    }
}

Matrix RandomFeatureMap::pre_activation(const FeatureMatrix& features) const {
    if (features.cols() != projection_.rows()) {
        throw ValidationError("feature map expects " + std::to_string(projection_.rows()) +
                              " features, got " + std::to_string(features.cols()));
    }
    Matrix z = features * projection_;
    z.rowwise() -= mu_;
    return z.array().rowwise() / sigma_.array();
}

Matrix RandomFeatureMap::apply(const FeatureMatrix& features) const {
    Matrix z = pre_activation(features);
    switch (activation_) {
    case Activation::Tanh:
        z = z.array().tanh();
        break;
    case Activation::Sigmoid:
        z = 1.0 / (1.0 + (-z.array()).exp());
        break;
    case Activation::Relu:
        z = z.cwiseMax(0.0);
        break;
    }
    return z;
}

RandomFeatureMap build_map(const FeatureMatrix& source, int node_size, Activation activation,
                           Rng& rng) {
    if (source.rows() == 0) {
        throw ValidationError("build_map: construction set is empty");
    }
    if (node_size < 1) {
        throw ConfigError("build_map: node size must be at least 1");
    }
    const std::uint64_t tag = rng();
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix projection(source.cols(), node_size);
    for (Eigen::Index r = 0; r < projection.rows(); ++r) {
        for (Eigen::Index c = 0; c < projection.cols(); ++c) {
            projection(r, c) = normal(rng);
        }
    }
    const Matrix projected = source * projection;
    RowVector mu = column_mean(projected);
    RowVector sigma = column_std(projected).cwiseMax(kSigmaFloor);
    return {std::move(projection), std::move(mu), std::move(sigma), activation, tag};
}

}  // namespace sstb
