#include "sstb/model_io.hpp"

#include "sstb/dataset.hpp"
#include "sstb/error.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <filesystem>

using namespace sstb;

namespace {

EnsembleModel trained_model() {
    ShiftBenchmarkConfig data;
    data.dims = 8;
    data.n_source = 80;
    data.n_target = 100;
    data.seed = 4;
    const auto b = make_shift_benchmark(data);
    TrainConfig cfg;
    cfg.blocks = 2;
    cfg.batch_size = 8;
    cfg.node_size = 12;
    const auto init = fit_ridge_classifier(b.bundle.source.features, b.bundle.source.labels, 1e-3);
    return train(b.bundle, init, cfg).model;
}

}  // namespace

TEST_CASE("model JSON round trip preserves predictions bit-exactly") {
    const EnsembleModel model = trained_model();
    const EnsembleModel back = ensemble_from_json(nlohmann::json::parse(dump_model(model)));
    REQUIRE(back.blocks.size() == model.blocks.size());
    Rng rng(1);
    const Matrix x = sstb::testing::random_matrix(100, 8, rng, -4, 4);
    const auto a = predict(model, x);
    const auto b = predict(back, x);
    CHECK(a.scores == b.scores);
    CHECK(a.labels == b.labels);
    CHECK(dump_model(back) == dump_model(model));
}

TEST_CASE("model file on disk") {
    const auto path = std::filesystem::temp_directory_path() / "sstb_model_io_test.json";
    const EnsembleModel model = trained_model();
    save_model(path, model);
    const auto j = nlohmann::json::parse(dump_model(model));
    CHECK(j["format_version"] == 1);
    CHECK(j["J"] == 4);
    CHECK(j["d"] == 8);
    CHECK(j["ns"] == 12);
    CHECK(j["activation"] == "tanh");
    CHECK(j["blocks"][0]["kind"] == "DA");
    CHECK(j["blocks"][1]["kind"] == "SSL");
    CHECK(load_model(path).blocks.size() == 4);
    std::filesystem::remove(path);
}

TEST_CASE("linear-only model files") {
    LinearModel layer{Matrix::Identity(3, 5), Vector::Zero(3)};
    const auto j = to_json(linear_only(layer));
    CHECK(j["blocks"].empty());
    const auto back = ensemble_from_json(j);
    CHECK(back.initial.weights == layer.weights);
}

TEST_CASE("malformed model files are rejected") {
    auto j = to_json(linear_only(LinearModel{Matrix::Identity(3, 5), Vector::Zero(3)}));
    auto bad_version = j;
    bad_version["format_version"] = 99;
    CHECK_THROWS_AS(ensemble_from_json(bad_version), ValidationError);
    auto short_weights = j;
    short_weights["initial"]["weights"].erase(0);
    CHECK_THROWS_AS(ensemble_from_json(short_weights), ValidationError);
    auto missing = j;
    missing.erase("lr");
    CHECK_THROWS_AS(ensemble_from_json(missing), ValidationError);
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), ValidationError);
}
