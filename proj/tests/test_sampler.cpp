#include <doctest.h>

#include <map>
#include <set>

#include "dalab/sampler.hpp"

using namespace dalab;

namespace {

constexpr int kN = 100000;

bool tiers_hold(const ValueProfile& v) {
    std::array<int, 4> hits{};
    for (Cents c : v.cents())
        for (std::size_t t = 0; t < 4; ++t)
            if (c >= kValueTiers[t].lo && c <= kValueTiers[t].hi) ++hits[t];
    return hits == std::array<int, 4>{1, 1, 1, 1};
}

}  // namespace

TEST_CASE("generator output is pinned") {
    // Frozen values: any change to the generator or the stream derivation
    // breaks reproducibility of stored sessions.
    Rng a(7, {0});
    Rng b(7, {0});
    for (int i = 0; i < 5; ++i) CHECK(a.next() == b.next());
    Rng c(7, {1});
    CHECK(Rng(7, {0}).next() != c.next());

    Rng g(0);
    const std::uint64_t first = g.next();
    CHECK(first == Rng(0, {}).next());
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFull);

    // From a separate implementation of the documented derivation.
    Rng pinned(7, {0});
    CHECK(pinned.next() == 0xa94418ccf4c42143ull);
    CHECK(pinned.next() == 0xf39f0f1e9e0692d8ull);
    CHECK(pinned.next() == 0xaa77602e31192ed5ull);
    CHECK(first == 0xfb5405f7bd79c540ull);
    CHECK(Rng(42, {3, 1}).next() == 0x7ec81545974e6bb9ull);
}

TEST_CASE("bounded draws are uniform") {
    Rng rng(11);
    std::array<int, 7> counts{};
    for (int i = 0; i < 70000; ++i) ++counts[rng.below(7)];
    for (int c : counts) CHECK(c == doctest::Approx(10000).epsilon(0.05));
    for (int i = 0; i < 1000; ++i) {
        int v = rng.uniform_int(-3, 3);
        CHECK(v >= -3);
        CHECK(v <= 3);
        double u = rng.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    CHECK_THROWS(rng.below(0));
    std::array<double, 3> w{0.0, 1.0, 0.0};
    CHECK(rng.weighted(w) == 1);
}

TEST_CASE("ValueProfile enforces one value per tier") {
    CHECK_NOTHROW(ValueProfile({95, 60, 30, 5}));
    CHECK_THROWS_AS(ValueProfile({95, 91, 30, 5}), InvalidInput);
    CHECK_THROWS_AS(ValueProfile({100, 60, 30, 5}), InvalidInput);
    ValueProfile v({5, 95, 30, 60});
    CHECK(to_string(v.by_value()) == "B>D>C>A");
    CHECK(v.best() == Prize::B);
    CHECK(v.value_rank(Prize::A) == 4);
}

TEST_CASE("sample_values") {
    Rng rng(1, {42});
    int a_best = 0;
    std::array<int, 10> top_mass{};
    for (int i = 0; i < kN; ++i) {
        auto v = sample_values(rng);
        REQUIRE(tiers_hold(v));
        if (v.best() == Prize::A) ++a_best;
        ++top_mass[static_cast<std::size_t>(v.value(v.best()) - 90)];
    }
    CHECK(std::abs(a_best / double(kN) - 0.25) < 0.01);
    for (int c : top_mass) CHECK(std::abs(c / double(kN) - 0.1) < 0.01);
}

TEST_CASE("sample_priorities") {
    ValueProfile values({60, 95, 30, 5});
    for (double r1 : {1.7, 1.0}) {
        Rng rng(3, {static_cast<std::uint64_t>(r1 * 10)});
        int y_top_best = 0;
        int y_top_other = 0;
        for (int i = 0; i < kN; ++i) {
            auto t = sample_priorities(rng, values, r1);
            if (t[index(Prize::B)].top() == Agent::Y) ++y_top_best;
            if (t[index(Prize::A)].top() == Agent::Y) ++y_top_other;
        }
        double expected = 1.0 / (1.0 + 3.0 * r1);
        CHECK(std::abs(y_top_best / double(kN) - expected) < 0.01);
        CHECK(std::abs(y_top_other / double(kN) - 0.25) < 0.01);
    }
}

TEST_CASE("sample_computerized_rankings") {
    ValueProfile values({30, 5, 95, 60});  // value order C > D > A > B
    SUBCASE("r2 = 0.5 favours Y's best prize") {
        Rng rng(5);
        int first_best = 0;
        for (int i = 0; i < kN / 3; ++i)
            for (const auto& r : sample_computerized_rankings(rng, values, 0.5))
                if (r.top() == Prize::C) ++first_best;
        CHECK(std::abs(first_best / double(kN / 3 * 3) - 8.0 / 15.0) < 0.01);
    }
    SUBCASE("r2 = 1 is uniform over permutations") {
        Rng rng(6);
        std::map<std::string, int> counts;
        int total = 0;
        for (int i = 0; i < kN / 3 + 1; ++i)
            for (const auto& r : sample_computerized_rankings(rng, values, 1.0)) {
                ++counts[to_string(r)];
                ++total;
            }
        CHECK(counts.size() == 24);
        for (const auto& [k, c] : counts) CHECK(std::abs(c / double(total) - 1.0 / 24) < 0.005);
    }
    SUBCASE("r2 near 0 reproduces Y's value order") {
        Rng rng(7);
        int same = 0;
        int total = 0;
        for (int i = 0; i < 10000; ++i)
            for (const auto& r : sample_computerized_rankings(rng, values, 0.01)) {
                same += r == values.by_value();
                ++total;
            }
        CHECK(same / double(total) > 0.95);
    }
}

TEST_CASE("sample_round is a deterministic function of the seed") {
    SamplerConfig cfg{1.7, 0.5, 123};
    CHECK(sample_round(cfg, 3) == sample_round(cfg, 3));
    CHECK(sample_round(cfg, 3).round_index == 3);

    int differ = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        SamplerConfig a{1.7, 0.5, 2 * s};
        SamplerConfig b{1.7, 0.5, 2 * s + 1};
        if (!(sample_round(a) == sample_round(b))) ++differ;
    }
    CHECK(differ >= 99);

    auto batch = sample_rounds(cfg, 10);
    REQUIRE(batch.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) CHECK(batch[i] == sample_round(cfg, i));

    CHECK_THROWS_AS(sample_round(SamplerConfig{0.0, 0.5, 1}), InvalidInput);
    CHECK_THROWS_AS(sample_round(SamplerConfig{1.7, 1.5, 1}), InvalidInput);
}

TEST_CASE("round JSON") {
    auto r = sample_round(SamplerConfig{1.7, 0.5, 9}, 4);
    auto j = round_to_json(r);
    CHECK(j.contains("computerized_rankings"));
    CHECK(j["values"].size() == 4);
    CHECK(round_from_json(json::parse(j.dump())) == r);
    CHECK_THROWS_AS(round_from_json(json{{"seed", 1}}), InvalidInput);
    CHECK(format_money(990, "£") == "£9.90");
    CHECK(format_money(5, "$") == "$0.05");
}
