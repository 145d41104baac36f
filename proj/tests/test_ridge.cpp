#include "sstb/ridge.hpp"

#include "sstb/error.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace sstb;
using sstb::testing::random_int;
using sstb::testing::random_matrix;
using sstb::testing::random_vector;

namespace {

// Independent route: augmented design [X 1] with penalty diag(lambda, ..., lambda, 0),
// solved by full-pivot LU.
Vector dense_ridge(const Matrix& x, const Vector& y, double lambda) {
    Eigen::MatrixXd a(x.rows(), x.cols() + 1);
    a << x, Eigen::VectorXd::Ones(x.rows());
    Eigen::MatrixXd penalty = Eigen::MatrixXd::Identity(a.cols(), a.cols()) * lambda;
    penalty(a.cols() - 1, a.cols() - 1) = 0.0;
    const Eigen::MatrixXd lhs = a.transpose() * a + penalty;
    return lhs.fullPivLu().solve(a.transpose() * y);
}

}  // namespace

TEST_CASE("fit_ridge closed forms") {
    SUBCASE("line through origin, lambda = 0") {
        Matrix x(2, 1);
        x << 1, 2;
        Vector y(2);
        y << 1, 2;
        const auto m = fit_ridge(x, y, 0.0);
        CHECK(m.weights(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.bias(0) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("centered 1-D normal equation") {
        Matrix x(2, 1);
        x << -0.5, 0.5;
        Vector y(2);
        y << -0.5, 0.5;
        const auto m = fit_ridge(x, y, 1.0);
        CHECK(m.weights(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(std::abs(m.bias(0)) < 1e-15);
    }
    SUBCASE("constant target") {
        Rng rng(1);
        const Matrix x = random_matrix(15, 4, rng);
        for (double lambda : {0.0, 0.01, 10.0}) {
            const auto m = fit_ridge(x, Vector::Constant(15, 2.5), lambda);
            CHECK(m.weights.cwiseAbs().maxCoeff() < 1e-10);
            CHECK(m.bias(0) == doctest::Approx(2.5).epsilon(1e-12));
        }
    }
}

TEST_CASE("fit_ridge matches the dense oracle and stationarity") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = random_int(1, 50, rng);
        const int m = random_int(1, 20, rng);
        const double lambda = std::uniform_real_distribution<double>(0.01, 2.0)(rng);
        const Matrix x = random_matrix(n, m, rng, -2, 2);
        const Vector y = random_vector(n, rng, -4, 4);
        const auto model = fit_ridge(x, y, lambda);
        const Vector oracle = dense_ridge(x, y, lambda);
        for (int c = 0; c < m; ++c) {
            REQUIRE(std::abs(model.weights(0, c) - oracle(c)) <= 1e-8);
        }
        REQUIRE(std::abs(model.bias(0) - oracle(m)) <= 1e-8);

        const Vector beta = model.weights.row(0).transpose();
        const Vector resid = (x * beta).array() + model.bias(0) - y.array();
        const double stationarity = (x.transpose() * resid + lambda * beta).cwiseAbs().maxCoeff();
        REQUIRE(stationarity <= 1e-6 * (1.0 + y.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("ridge shrinkage is monotone in lambda") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix x = random_matrix(30, 6, rng);
        x.rowwise() -= x.colwise().mean();
        const Vector y = random_vector(30, rng, -3, 3);
        double prev = fit_ridge(x, y, 1e-4).weights.norm();
        for (double lambda : {0.01, 0.1, 1.0, 10.0}) {
            const double cur = fit_ridge(x, y, lambda).weights.norm();
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("rank-deficient lambda = 0 adds the jitter floor") {
    Matrix x(3, 2);
    x << 1, 2, 2, 4, 3, 6;  // second column = 2 * first
    Vector y(3);
    y << 1, 2, 3;
    RidgeDiagnostics diag;
    const auto m = fit_ridge(x, y, 0.0, &diag);
    CHECK(diag.jittered);
    CHECK(m.weights.allFinite());
    const Vector pred = predict_linear(m, x).col(0);
    CHECK((pred - y).cwiseAbs().maxCoeff() < 1e-6);

    RidgeDiagnostics clean;
    fit_ridge(x, y, 0.1, &clean);
    CHECK_FALSE(clean.jittered);
}

TEST_CASE("weighted ridge equals row duplication") {
    Rng rng(29);
    const Matrix x = random_matrix(6, 3, rng);
    const Vector y = random_vector(6, rng);
    Vector w(6);
    w << 1, 2, 0, 3, 1, 1;
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < 6; ++i) {
        for (int k = 0; k < static_cast<int>(w(i)); ++k) {
            rows.push_back(i);
        }
    }
    const auto weighted = fit_ridge_weighted(x, y, w, 0.05);
    const auto duplicated = fit_ridge(x(rows, Eigen::all), y(rows), 0.05);
    CHECK((weighted.weights - duplicated.weights).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(weighted.bias(0) == doctest::Approx(duplicated.bias(0)).epsilon(1e-10));
    CHECK_THROWS_AS(fit_ridge_weighted(x, y, Vector::Zero(6), 0.1), ValidationError);
}

TEST_CASE("fit_block_learners") {
    Rng rng(31);
    const Matrix mapped = random_matrix(20, 5, rng);
    Matrix responses = random_matrix(20, 3, rng, -4, 4);
    responses.col(1) = responses.col(0);

    std::vector<BatchIndexSet> batches(3);
    for (auto& b : batches) {
        for (int i = 0; i < 12; ++i) {
            b.push_back(static_cast<std::size_t>(random_int(0, 19, rng)));
        }
    }
    batches[1] = batches[0];

    SUBCASE("identical batches and responses give identical learners") {
        const auto m = fit_block_learners(mapped, responses, batches, 0.01);
        CHECK(m.weights.row(0) == m.weights.row(1));
        CHECK(m.bias(0) == m.bias(1));
    }
    SUBCASE("single repeated index fits the constant") {
        std::vector<BatchIndexSet> single(3, BatchIndexSet(8, 7));
        const auto m = fit_block_learners(mapped, responses, single, 0.5);
        for (int j = 0; j < 3; ++j) {
            CHECK(m.weights.row(j).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(m.bias(j) == doctest::Approx(responses(7, j)).epsilon(1e-12));
        }
    }
    SUBCASE("matches a dense solve per class") {
        const auto m = fit_block_learners(mapped, responses, batches, 0.01);
        for (int j = 0; j < 3; ++j) {
            std::vector<Eigen::Index> rows(batches[j].begin(), batches[j].end());
            const Vector oracle = dense_ridge(mapped(rows, Eigen::all), responses(rows, j), 0.01);
            for (int c = 0; c < 5; ++c) {
                CHECK(std::abs(m.weights(j, c) - oracle(c)) <= 1e-8);
            }
            CHECK(std::abs(m.bias(j) - oracle(5)) <= 1e-8);
        }
    }
    SUBCASE("thread count does not change the result") {
        const auto a = fit_block_learners(mapped, responses, batches, 0.01, 1);
        const auto b = fit_block_learners(mapped, responses, batches, 0.01, 3);
        CHECK(a.weights == b.weights);
        CHECK(a.bias == b.bias);
    }
    SUBCASE("empty batch rejected") {
        batches[2].clear();
        CHECK_THROWS_AS(fit_block_learners(mapped, responses, batches, 0.01), ValidationError);
    }
}

TEST_CASE("predict_linear") {
    LinearModel m{Matrix::Zero(2, 3), Vector::Constant(2, 1.5)};
    Rng rng(37);
    const Matrix x = random_matrix(4, 3, rng);
    CHECK((predict_linear(m, x).array() == 1.5).all());

    LinearModel id{Matrix::Ones(1, 1), Vector::Zero(1)};
    const Matrix col = random_matrix(5, 1, rng);
    CHECK(predict_linear(id, col) == col);

    const Matrix square = random_matrix(6, 5, rng);
    const Vector target = random_vector(6, rng);
    const auto interp = fit_ridge(square, target, 0.0);
    CHECK((predict_linear(interp, square).col(0) - target).cwiseAbs().maxCoeff() < 1e-8);

    CHECK_THROWS_AS(predict_linear(m, random_matrix(2, 4, rng)), ValidationError);
}

TEST_CASE("ridge classifier separates separable data") {
    Matrix x(6, 2);
    x << -2, 0, -3, 1, -2.5, -1, 2, 0, 3, 1, 2.5, -1;
    const OneHotLabels y{{0, 0, 0, 1, 1, 1}, 2};
    const auto m = fit_ridge_classifier(x, y, 1e-3);
    CHECK(row_argmax(predict_linear(m, x)) == y.classes);
}
