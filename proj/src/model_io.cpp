#include "sstb/model_io.hpp"

#include "sstb/error.hpp"

#include <fstream>

namespace sstb {

using nlohmann::json;

namespace {

json flat(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out.push_back(m(r, c));
        }
    }
    return out;
}

template <typename V>
json flat_vector(const V& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

Matrix read_matrix(const json& values, Eigen::Index rows, Eigen::Index cols, const char* what) {
    if (!values.is_array() || static_cast<Eigen::Index>(values.size()) != rows * cols) {
        throw ValidationError(std::string("model file: '") + what + "' must hold " +
                              std::to_string(rows * cols) + " numbers");
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows * cols; ++i) {
        m(i / cols, i % cols) = values[static_cast<std::size_t>(i)].get<double>();
    }
    return m;
}

RowVector read_row(const json& values, Eigen::Index n, const char* what) {
    return read_matrix(values, 1, n, what).row(0);
}

json map_to_json(const RandomFeatureMap& map) {
    return {{"rows", map.input_dims()},
            {"cols", map.node_size()},
            {"projection", flat(map.projection())},
            {"mu", flat_vector(map.mu())},
            {"sigma", flat_vector(map.sigma())},
            {"activation", std::string(to_string(map.activation()))},
            {"seed_tag", map.seed_tag()}};
}

RandomFeatureMap map_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    return {read_matrix(j.at("projection"), rows, cols, "projection"),
            read_row(j.at("mu"), cols, "mu"), read_row(j.at("sigma"), cols, "sigma"),
            parse_activation(j.at("activation").get<std::string>()),
            j.at("seed_tag").get<std::uint64_t>()};
}

}  // namespace

json to_json(const LinearModel& model) {
    return {{"outputs", model.outputs()},
            {"inputs", model.inputs()},
            {"weights", flat(model.weights)},
            {"bias", flat_vector(model.bias)}};
}

LinearModel linear_model_from_json(const json& j) {
    const auto outputs = j.at("outputs").get<Eigen::Index>();
    const auto inputs = j.at("inputs").get<Eigen::Index>();
    LinearModel m;
    m.weights = read_matrix(j.at("weights"), outputs, inputs, "weights");
    m.bias = read_row(j.at("bias"), outputs, "bias").transpose();
    require_finite(m.weights, "linear model weights");
    return m;
}

json to_json(const EnsembleModel& model) {
    json blocks = json::array();
    for (const auto& b : model.blocks) {
        blocks.push_back({{"kind", std::string(to_string(b.kind))},
                          {"map", map_to_json(b.map)},
                          {"learners", to_json(b.learners)}});
    }
    const Eigen::Index ns = model.blocks.empty() ? 0 : model.blocks.front().map.node_size();
    const Activation act =
        model.blocks.empty() ? Activation::Tanh : model.blocks.front().map.activation();
    return {{"format_version", kModelFormatVersion},
            {"J", model.num_classes()},
            {"d", model.dims()},
            {"ns", ns},
            {"lr", model.lr},
            {"activation", std::string(to_string(act))},
            {"initial", to_json(model.initial)},
            {"blocks", std::move(blocks)}};
}

EnsembleModel ensemble_from_json(const json& j) {
    try {
        if (j.at("format_version").get<int>() != kModelFormatVersion) {
            throw ValidationError("unsupported model format_version " +
                                  j.at("format_version").dump());
        }
        EnsembleModel model;
        model.lr = j.at("lr").get<double>();
        model.initial = linear_model_from_json(j.at("initial"));
        const auto J = j.at("J").get<Eigen::Index>();
        const auto d = j.at("d").get<Eigen::Index>();
        if (model.initial.outputs() != J || model.initial.inputs() != d) {
            throw ValidationError("model file: initial layer does not match J and d");
        }
        for (const auto& b : j.at("blocks")) {
            FineTuneBlock block{parse_block_kind(b.at("kind").get<std::string>()),
                                map_from_json(b.at("map")),
                                linear_model_from_json(b.at("learners"))};
            if (block.map.input_dims() != d || block.learners.outputs() != J ||
                block.learners.inputs() != block.map.node_size()) {
                throw ValidationError("model file: block dimensions are inconsistent");
            }
            model.blocks.push_back(std::move(block));
        }
        return model;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("model file: ") + e.what());
    }
}

std::string dump_model(const EnsembleModel& model) { return to_json(model).dump() + "\n"; }

void save_model(const std::filesystem::path& path, const EnsembleModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write " + path.string());
    }
    out << dump_model(model);
}

EnsembleModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    return ensemble_from_json(j);
}

}  // namespace sstb
