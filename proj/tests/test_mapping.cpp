#include "sstb/mapping.hpp"

#include "sstb/error.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace sstb;
using sstb::testing::random_matrix;

TEST_CASE("build_map") {
    Rng data_rng(1);
    const Matrix source = random_matrix(50, 6, data_rng, -3, 3);

    SUBCASE("deterministic given the stream") {
        Rng a(42), b(42);
        const auto m1 = build_map(source, 10, Activation::Tanh, a);
        const auto m2 = build_map(source, 10, Activation::Tanh, b);
        CHECK(m1.projection() == m2.projection());
        CHECK(m1.mu() == m2.mu());
        CHECK(m1.sigma() == m2.sigma());
        CHECK(m1.seed_tag() == m2.seed_tag());
    }
    SUBCASE("single row floors sigma") {
        Rng rng(2);
        const auto m = build_map(source.topRows(1), 5, Activation::Tanh, rng);
        CHECK((m.sigma().array() == kSigmaFloor).all());
    }
    SUBCASE("default node size shape") {
        Rng rng(3);
        const auto m = build_map(source.leftCols(2), 100, Activation::Tanh, rng);
        CHECK(m.projection().rows() == 2);
        CHECK(m.projection().cols() == 100);
    }
    SUBCASE("empty construction set") {
        Rng rng(4);
        CHECK_THROWS_AS(build_map(Matrix(0, 6), 5, Activation::Tanh, rng), ValidationError);
    }
}

TEST_CASE("apply_map") {
    Rng data_rng(5);
    const Matrix source = random_matrix(80, 4, data_rng, -2, 5);
    Rng rng(6);
    const auto map = build_map(source, 25, Activation::Tanh, rng);

    SUBCASE("construction set is standardized before activation") {
        const Matrix z = map.pre_activation(source);
        CHECK(z.colwise().mean().cwiseAbs().maxCoeff() <= 1e-9);
        CHECK((column_std(z).array() - 1.0).abs().maxCoeff() <= 1e-9);
    }
    SUBCASE("tanh range") {
        const Matrix h = apply_map(map, random_matrix(30, 4, data_rng, -100, 100));
        CHECK((h.array().abs() < 1.0 + 1e-15).all());
        CHECK(h.allFinite());
    }
    SUBCASE("pure") { CHECK(apply_map(map, source) == apply_map(map, source)); }
    SUBCASE("dimension mismatch") { CHECK_THROWS_AS(apply_map(map, Matrix(3, 5)), ValidationError); }
    SUBCASE("other activations") {
        const RandomFeatureMap sig(map.projection(), map.mu(), map.sigma(), Activation::Sigmoid, 0);
        const RandomFeatureMap relu(map.projection(), map.mu(), map.sigma(), Activation::Relu, 0);
        const Matrix s = sig.apply(source);
        const Matrix r = relu.apply(source);
        CHECK((s.array() > 0.0).all());
        CHECK((s.array() < 1.0).all());
        CHECK((r.array() >= 0.0).all());
        CHECK(r == map.pre_activation(source).cwiseMax(0.0));
    }
}

TEST_CASE("activation names") {
    for (auto a : {Activation::Tanh, Activation::Sigmoid, Activation::Relu}) {
        CHECK(parse_activation(to_string(a)) == a);
    }
    CHECK_THROWS_AS(parse_activation("gelu"), ConfigError);
}
