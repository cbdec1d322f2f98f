#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dalab/analysis.hpp"
#include "dalab/simulate.hpp"

using namespace dalab;

namespace {

const ValueProfile kValues({95, 60, 30, 5});

RoundSpec round_with(std::array<Cents, 4> values, std::array<const char*, 4> priorities) {
    RoundSpec r;
    r.values = ValueProfile(values);
    for (std::size_t i = 0; i < 4; ++i) r.priorities[i] = parse_priority(priorities[i]);
    return r;
}

ParticipantMetrics metric(double spu, double sf, Treatment t = Treatment::MenuSP) {
    ParticipantMetrics m;
    m.spu = spu;
    m.sf = sf;
    m.treatment = t;
    return m;
}

PopulationSpec single(AgentType t) {
    PopulationSpec p;
    p.types.push_back(std::move(t));
    return p;
}

AgentType policy(RankingPolicy p) {
    AgentType t;
    t.policy = p;
    return t;
}

}  // namespace

TEST_CASE("classify examples") {
    CHECK(classify_pattern(parse_ranking("ABCD"), kValues) == StrategyPattern{1, 2, 3, 4});
    CHECK(classify_pattern(parse_ranking("BACD"), kValues) == StrategyPattern{2, 1, 3, 4});
    CHECK(classify_pattern(parse_ranking("CABD"), kValues) == StrategyPattern{3, 1, 2, 4});
    CHECK(is_sf(parse_ranking("ABCD"), kValues));
    CHECK_FALSE(is_sf(parse_ranking("BACD"), kValues));
    CHECK_FALSE(is_sf(parse_ranking("CABD"), kValues));
    CHECK(to_string(StrategyPattern{2, 1, 3, 4}) == "[2,1,3,4]");
    ValueProfile shuffled({5, 95, 30, 60});  // B > D > C > A
    CHECK(classify_pattern(parse_ranking("BDCA"), shuffled) == StrategyPattern{1, 2, 3, 4});
    CHECK(classify_pattern(parse_ranking("DBCA"), shuffled) == StrategyPattern{2, 1, 3, 4});
}

TEST_CASE("classification is a bijection and inverts") {
    for (const ValueProfile& v : {kValues, ValueProfile({5, 95, 30, 60}), ValueProfile({40, 8, 99, 50})}) {
        std::set<StrategyPattern> seen;
        for (const auto& r : all_rankings()) {
            auto p = classify_pattern(r, v);
            seen.insert(p);
            CHECK(ranking_for_pattern(p, v) == r);
            CHECK(is_sf(r, v) == (p == StrategyPattern{1, 2, 3, 4}));
        }
        CHECK(seen.size() == 24);
    }
}

TEST_CASE("round condition flags") {
    // Best prize A. Y first there.
    auto top = round_with({95, 60, 30, 5}, {"YRST", "RYST", "RSTY", "RSTY"});
    auto f = round_condition_flags(top, 10);
    CHECK_FALSE(f.not_top_priority_at_best);
    CHECK_FALSE(f.lower_than_elsewhere);
    // Y third at A, first at C.
    auto third = round_with({95, 60, 30, 5}, {"RSYT", "RYST", "YRST", "RSTY"});
    f = round_condition_flags(third, 10);
    CHECK(f.not_top_priority_at_best);
    CHECK(f.lower_than_elsewhere);
    // Y last at A and last everywhere: not top, but nowhere better.
    auto last = round_with({95, 60, 30, 5}, {"RSTY", "RSTY", "RSTY", "RSTY"});
    f = round_condition_flags(last, 10);
    CHECK(f.not_top_priority_at_best);
    CHECK_FALSE(f.lower_than_elsewhere);
}

TEST_CASE("gap median ties go low") {
    std::vector<RoundSpec> corpus{round_with({95, 60, 30, 5}, {"YRST", "YRST", "YRST", "YRST"}),   // gap 35
                                  round_with({90, 70, 30, 5}, {"YRST", "YRST", "YRST", "YRST"}),   // gap 20
                                  round_with({99, 50, 30, 5}, {"YRST", "YRST", "YRST", "YRST"})};  // gap 49
    CHECK(median_gap(corpus) == 35);
    auto flags = round_condition_flags(corpus);
    CHECK(flags[0].low_value_gap);  // exactly at the median
    CHECK(flags[1].low_value_gap);
    CHECK_FALSE(flags[2].low_value_gap);
    corpus.pop_back();
    CHECK(median_gap(corpus) == 27.5);
}

TEST_CASE("mean estimates") {
    CHECK(estimate_mean({}).count == 0);
    CHECK_FALSE(estimate_mean({}).mean.has_value());
    auto one = estimate_mean({0.6});
    CHECK(*one.mean == 0.6);
    CHECK_FALSE(one.se.has_value());
    auto two = estimate_mean({0.0, 1.0});
    CHECK(*two.mean == 0.5);
    CHECK(*two.se == doctest::Approx(0.5));  // sd sqrt(0.5), / sqrt(2)
}

TEST_CASE("SP-U bins") {
    std::vector<ParticipantMetrics> m{metric(1.0, 1.0), metric(1.0, 0.8), metric(9 / 18.0, 0.4)};
    auto bins = conditional_sf_by_spu(m);
    CHECK(bins.size() == 19);
    CHECK(bins[18].sf.count == 2);
    CHECK(*bins[18].sf.mean == doctest::Approx(0.9));
    CHECK(bins[18].sf.se.has_value());
    CHECK(bins[9].sf.count == 1);
    CHECK_FALSE(bins[9].sf.se.has_value());
    CHECK(bins[0].sf.count == 0);
    CHECK_FALSE(bins[0].sf.mean.has_value());
    auto split = sf_by_spu_threshold(m);
    CHECK(*split.above.mean == doctest::Approx(0.9));
    CHECK(*split.below.mean == doctest::Approx(0.4));
    CHECK(conditional_sf_by_measure(m, Measure::Abstract).size() == 14);
    CHECK(conditional_sf_by_measure(m, Measure::Practical).size() == 6);
}

TEST_CASE("quadrants") {
    std::vector<ParticipantMetrics> all_one(10, metric(1.0, 1.0));
    auto q = quadrant_fractions(all_one);
    CHECK(q.low_spu_low_sf.value == 0);
    CHECK(q.low_spu_high_sf.value == 0);
    CHECK(q.high_spu_low_sf.value == 0);
    CHECK(q.high_spu_high_sf.value == 1);
    std::vector<ParticipantMetrics> mixed{metric(0.75, 0.75), metric(0.74, 0.9), metric(0.9, 0.7), metric(0.1, 0.1)};
    q = quadrant_fractions(mixed);
    CHECK(q.high_spu_high_sf.value == 0.25);
    CHECK(q.low_spu_high_sf.value == 0.25);
    CHECK(q.high_spu_low_sf.value == 0.25);
    CHECK(q.low_spu_low_sf.value == 0.25);
    CHECK(q.high_spu_high_sf.se == doctest::Approx(std::sqrt(0.25 * 0.75 / 4)));
}

TEST_CASE("OLS trend with HC1 errors") {
    CHECK(ols_trend({1, 2, 3, 4}, {1, 3, 5, 7}).slope == doctest::Approx(2.0));
    CHECK(ols_trend({1, 2, 3, 4}, {1, 3, 5, 7}).se == doctest::Approx(0.0));
    // x = 1..4, y = 0,1,0,1: sxy = 1, sxx = 5, slope 0.2, intercept 0.
    // e = (-0.2, 0.6, -0.6, 0.2); sum (x - xbar)^2 e^2 = 0.36
    // var = 4 / 2 * 0.36 / 25 = 0.0288
    Trend t = ols_trend({1, 2, 3, 4}, {0, 1, 0, 1});
    CHECK(t.slope == doctest::Approx(0.2));
    CHECK(t.intercept == doctest::Approx(0.0));
    CHECK(t.se == doctest::Approx(std::sqrt(0.0288)));
    CHECK(ols_trend({1, 1, 1}, {0, 1, 0}).slope == 0);
    CHECK_THROWS_AS(ols_trend({1}, {1, 2}), InvalidInput);
}

TEST_CASE("apportionment") {
    CHECK(apportion({0.32, 0.68}, 500) == std::vector<std::size_t>{160, 340});
    CHECK(apportion({1, 1, 1}, 10) == std::vector<std::size_t>{4, 3, 3});
    CHECK(apportion({0.3, 0.7}, 0) == std::vector<std::size_t>{0, 0});
    CHECK_THROWS_AS(apportion({0, 0}, 3), InvalidInput);
    CHECK_THROWS_AS(apportion({-1, 2}, 3), InvalidInput);
}

TEST_CASE("simulation basics") {
    CHECK(simulate_population(single(policy(RankingPolicy::AlwaysSF)), 0, 1).empty());
    auto logs = simulate_population(single(policy(RankingPolicy::AlwaysSF)), 20, 5);
    auto data = analyze_logs(logs);
    for (const auto& d : data) CHECK(d.metrics.sf == 1.0);
    auto again = simulate_population(single(policy(RankingPolicy::AlwaysSF)), 20, 5);
    for (std::size_t i = 0; i < logs.size(); ++i) CHECK(logs[i] == again[i]);
    std::set<Treatment> treatments;
    for (const auto& d : data) treatments.insert(d.metrics.treatment);
    CHECK(treatments.size() == 5);
}

TEST_CASE("exact SF count and SP-U score") {
    AgentType t;
    t.policy = RankingPolicy::SfCount;
    t.sf_count = 6;
    t.spu_correct = 9;
    auto data = analyze_logs(simulate_population(single(t), 15, 2));
    for (const auto& d : data) {
        CHECK(d.metrics.sf == doctest::Approx(0.6));
        CHECK(d.metrics.spu == doctest::Approx(0.5));
        CHECK(std::abs(d.metrics.spu - (13 * d.metrics.abstract_score + 5 * d.metrics.practical) / 18) < 1e-12);
    }
}

TEST_CASE("metrics from replayed logs equal the session ledgers") {
    AgentType t;
    t.policy = RankingPolicy::UniformRandom;
    t.tr_prob = 0.5;
    auto agents = simulate_agents(single(t), 25, 9);
    for (const auto& a : agents) {
        auto d = analyze_log(a.log);
        SessionState s = replay(a.log);
        CHECK(d.metrics.points == s.points);
        CHECK(d.metrics.points == score(s).points_earned);
        CHECK(d.metrics.earnings == s.earnings());
        int sf = 0;
        for (std::size_t k = 0; k < s.round_rankings.size(); ++k) sf += is_sf(s.round_rankings[k], s.rounds[k].values);
        CHECK(d.metrics.sf == sf / 10.0);
    }
}

TEST_CASE("flip-top-two agents concentrate on [2,1,3,4]") {
    auto data = analyze_logs(simulate_population(single(policy(RankingPolicy::FlipTopTwoWhenNotTopPriority)), 200, 4));
    auto h = pattern_histogram(data);
    double total = 0;
    for (const auto& [p, f] : h) total += f;
    CHECK(total == doctest::Approx(1.0));
    CHECK(h.size() == 2);
    CHECK(h[StrategyPattern{2, 1, 3, 4}] > 0.75);
    CHECK(h[StrategyPattern{2, 1, 3, 4}] + h[StrategyPattern{1, 2, 3, 4}] == doctest::Approx(1.0));
}

TEST_CASE("uniform random agents spread over all patterns") {
    auto data = analyze_logs(simulate_population(single(policy(RankingPolicy::UniformRandom)), 10000, 12));
    auto h = pattern_histogram(data);
    CHECK(h.size() == 24);
    for (const auto& [p, f] : h) CHECK_MESSAGE(std::abs(f - 1.0 / 24) < 0.01, to_string(p));
}

TEST_CASE("constant SF policy has no trend") {
    AgentType t;
    t.policy = RankingPolicy::SfProbability;
    t.sf_prob = 0.6;
    auto data = analyze_logs(simulate_population(single(t), 500, 21));
    auto trend = sf_round_trend(data);
    const Trend& all = trend.at(std::nullopt);
    CHECK(all.n == 5000);
    CHECK(std::abs(all.slope) < 3 * all.se + 1e-12);
}

TEST_CASE("planted trend, independent draws") {
    auto data = analyze_logs(simulate_population(planted_trend_population(false), 500, 7));
    const Trend& t = sf_round_trend(data).at(std::nullopt);
    CHECK(t.se == doctest::Approx(0.0024).epsilon(0.1));
    CHECK(std::abs(t.slope - 0.02) < 3 * t.se);
}

TEST_CASE("30/70 mixture recovery") {
    AgentType hi;
    hi.share = 0.3;
    hi.policy = RankingPolicy::AlwaysSF;
    hi.spu_correct = 18;
    AgentType lo;
    lo.share = 0.7;
    lo.policy = RankingPolicy::SfProbability;
    lo.sf_prob = 0.46;
    lo.spu_correct = 9;
    PopulationSpec p;
    p.types = {hi, lo};
    auto m = metrics_of(analyze_logs(simulate_population(p, 500, 3)));
    auto q = quadrant_fractions(m);
    CHECK(q.high_spu_high_sf.value == doctest::Approx(0.3));
    CHECK(q.high_spu_low_sf.value == 0);
    auto split = sf_by_spu_threshold(m);
    CHECK(*split.above.mean == 1.0);
    CHECK(std::abs(*split.below.mean - 0.46) < 0.03);
    auto bins = conditional_sf_by_spu(m);
    CHECK(bins[18].sf.count == 150);
    CHECK(bins[9].sf.count == 350);
}

TEST_CASE("CSV tables and report") {
    auto data = analyze_logs(simulate_population(single(policy(RankingPolicy::FlipTopTwoWhenNotTopPriority)), 10, 1));
    auto count_lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
    CHECK(count_lines(participants_csv(data)) == 11);
    CHECK(count_lines(rounds_csv(data)) == 101);
    CHECK(count_lines(sf_by_spu_csv(metrics_of(data))) == 1 + 6 * 19);
    CHECK(count_lines(quadrants_csv(metrics_of(data))) == 1 + 6 * 4);
    CHECK(participants_csv(data).find("unclassified") != std::string::npos);
    CHECK(patterns_csv(data).rfind("pattern,count,frequency\n", 0) == 0);
    CHECK(trend_csv(data).find("all,100,") != std::string::npos);
    auto report = markdown_report(data);
    CHECK(report.find("# Analysis report") == 0);
    CHECK(report.find("[2,1,3,4]") != std::string::npos);
}

TEST_CASE("population specs round trip") {
    PopulationSpec p = planted_recovery_population();
    PopulationSpec back = population_from_json(to_json(p));
    CHECK(to_json(back) == to_json(p));
    CHECK_THROWS_AS(population_from_json({{"types", {{{"policy", "teleport"}}}}}), InvalidInput);
    PopulationSpec bad = single(policy(RankingPolicy::SfCount));
    bad.types[0].sf_count = 11;
    CHECK_THROWS_AS(simulate_population(bad, 1, 1), InvalidInput);
}

TEST_CASE("tampered logs are rejected by analysis") {
    auto logs = simulate_population(single(policy(RankingPolicy::AlwaysSF)), 3, 1);
    for (auto& e : logs[1])
        if (e.type == "ranking") {
            e.detail["prize"] = e.detail["prize"] == "A" ? "B" : "A";
            break;
        }
    CHECK_THROWS_AS(analyze_logs(logs), InvariantViolation);
}
