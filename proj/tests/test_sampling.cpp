#include "sstb/sampling.hpp"

#include "sstb/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>

using namespace sstb;

TEST_CASE("weighted_sample") {
    Rng rng(1);
    SUBCASE("zero weight excluded") {
        const std::vector<double> w{1.0, 0.0};
        const auto s = weighted_sample(w, 10, rng);
        CHECK(s.size() == 10);
        CHECK(std::all_of(s.begin(), s.end(), [](auto i) { return i == 0; }));
    }
    SUBCASE("uniform weights converge to 1/3") {
        const std::vector<double> w{1.0, 1.0, 1.0};
        const auto s = weighted_sample(w, 30000, rng);
        for (std::size_t i = 0; i < 3; ++i) {
            const double freq = static_cast<double>(std::count(s.begin(), s.end(), i)) / 30000.0;
            CHECK(std::abs(freq - 1.0 / 3.0) <= 0.02);
        }
    }
    SUBCASE("all-zero falls back to uniform") {
        const std::vector<double> w{0.0, 0.0};
        const auto s = weighted_sample(w, 20000, rng);
        const double freq = static_cast<double>(std::count(s.begin(), s.end(), 0u)) / 20000.0;
        CHECK(std::abs(freq - 0.5) <= 0.02);
    }
    SUBCASE("pool indices are mapped") {
        const std::vector<std::size_t> pool{7, 9};
        const std::vector<double> w{0.0, 1.0};
        const auto s = weighted_sample(pool, w, 5, rng);
        CHECK(std::all_of(s.begin(), s.end(), [](auto i) { return i == 9; }));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(weighted_sample(std::vector<double>{}, 3, rng), ValidationError);
        CHECK_THROWS_AS(weighted_sample(std::vector<double>{1.0, -1.0}, 3, rng), ValidationError);
    }
}

TEST_CASE("down_sample") {
    const std::vector<std::size_t> in{4, 4, 1, 9};
    Rng a(5);
    Rng b(5);
    SUBCASE("full take is a permutation") {
        auto out = down_sample(in, 4, a);
        auto sorted_in = in;
        std::sort(out.begin(), out.end());
        std::sort(sorted_in.begin(), sorted_in.end());
        CHECK(out == sorted_in);
    }
    SUBCASE("cardinality and membership") {
        const auto out = down_sample(in, 2, a);
        CHECK(out.size() == 2);
        for (auto i : out) {
            CHECK(std::find(in.begin(), in.end(), i) != in.end());
        }
    }
    SUBCASE("deterministic") { CHECK(down_sample(in, 3, a) == down_sample(in, 3, b)); }
    SUBCASE("too few") { CHECK_THROWS_AS(down_sample(in, 5, a), ValidationError); }
}

TEST_CASE("balanced_sample") {
    Rng rng(9);
    const OneHotLabels labels{{0, 1, 2, 0, 1, 2, 0}, 3};
    const std::vector<double> w(labels.size(), 1.0);

    SUBCASE("J = 3 cardinality") {
        const auto s = balanced_sample(labels, w, 0, 2, rng);
        CHECK(s.size() == 4);
        const auto pos = std::count_if(s.begin(), s.end(), [&](auto i) { return labels.classes[i] == 0; });
        CHECK(pos == 2);
    }
    SUBCASE("J = 2") {
        const OneHotLabels two{{0, 1, 1, 0, 1}, 2};
        const std::vector<double> w2(two.size(), 0.3);
        const auto s = balanced_sample(two, w2, 1, 5, rng);
        CHECK(s.size() == 10);
        const auto pos = std::count_if(s.begin(), s.end(), [&](auto i) { return two.classes[i] == 1; });
        CHECK(pos == 5);
    }
    SUBCASE("zero-weight positive pool falls back to uniform") {
        std::vector<double> wz = w;
        for (std::size_t n = 0; n < labels.size(); ++n) {
            if (labels.classes[n] == 0) {
                wz[n] = 0.0;
            }
        }
        std::map<std::size_t, int> hits;
        for (int rep = 0; rep < 3000; ++rep) {
            const auto s = balanced_sample(labels, wz, 0, 1, rng);
            ++hits[s[0]];
        }
        CHECK(hits.size() == 3);
        for (auto [idx, count] : hits) {
            CHECK(labels.classes[idx] == 0);
            CHECK(std::abs(count / 3000.0 - 1.0 / 3.0) < 0.04);
        }
    }
    SUBCASE("absent positive class rejected, absent negative class skipped") {
        const OneHotLabels partial{{0, 0, 2}, 3};
        const std::vector<double> wp(3, 1.0);
        CHECK_THROWS_AS(balanced_sample(partial, wp, 1, 2, rng), ValidationError);
        const auto s = balanced_sample(partial, wp, 0, 2, rng);
        CHECK(s.size() == 4);
        CHECK(std::count(s.begin(), s.end(), 2u) == 2);
    }
    SUBCASE("only the positive class present") {
        const OneHotLabels single{{1, 1}, 3};
        const auto s = balanced_sample(single, std::vector<double>(2, 1.0), 1, 3, rng);
        CHECK(s.size() == 3);
    }
    SUBCASE("deterministic given seed") {
        Rng a(77), b(77);
        CHECK(balanced_sample(labels, w, 2, 6, a) == balanced_sample(labels, w, 2, 6, b));
    }
}
