#pragma once

// Shared test fixtures: the worked example market and random generators
// that do not go through the library's own sampler.

#include <algorithm>
#include <random>

#include "dalab/market.hpp"

namespace dalab::test {

// Y: A>B>C>D, R: A>C>B>D, S: A>B>D>C, T: B>A>C>D
// A: R>Y>S>T, B: T>S>Y>R, C: Y>R>T>S, D: S>T>Y>R
inline Market ex1() {
    return Market{{parse_ranking("ABCD"), parse_ranking("ACBD"), parse_ranking("ABDC"), parse_ranking("BACD")},
                  {parse_priority("RYST"), parse_priority("TSYR"), parse_priority("YRTS"), parse_priority("STYR")}};
}

inline OthersMarket ex1_others() { return others_of(ex1()); }

// Everyone's first choice is distinct and each prize ranks its unique
// first-choice proposer highest.
inline Market diagonal() {
    return Market{{parse_ranking("ABCD"), parse_ranking("BCDA"), parse_ranking("CDAB"), parse_ranking("DABC")},
                  {parse_priority("YRST"), parse_priority("RSTY"), parse_priority("STYR"), parse_priority("TYRS")}};
}

template <class T>
StrictOrder<T> random_order(std::mt19937_64& gen) {
    std::array<T, kSize> items{T{0}, T{1}, T{2}, T{3}};
    std::shuffle(items.begin(), items.end(), gen);
    return StrictOrder<T>(items);
}

inline Market random_market(std::mt19937_64& gen) {
    Market m;
    for (auto& r : m.rankings) r = random_order<Prize>(gen);
    for (auto& p : m.priorities) p = random_order<Agent>(gen);
    return m;
}

// Moves Y to the top of every priority order.
inline OthersMarket with_y_first(OthersMarket o) {
    for (auto& p : o.priorities) {
        auto items = p.items();
        std::stable_partition(items.begin(), items.end(), [](Agent a) { return a == Agent::Y; });
        p = PriorityOrder(items);
    }
    return o;
}

inline OthersMarket random_others(std::mt19937_64& gen) { return others_of(random_market(gen)); }

}  // namespace dalab::test
