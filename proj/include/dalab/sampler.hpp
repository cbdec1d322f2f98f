#pragma once

// Sampling of incentivized rounds: Y's prize values, the priority table and
// the three computerized rankings, drawn jointly in that order.

#include <cstdint>
#include <string>
#include <vector>

#include "dalab/json_io.hpp"
#include "dalab/market.hpp"
#include "dalab/rng.hpp"

namespace dalab {

/// Money in integer hundredths of a currency unit.
using Cents = std::int64_t;

/// Y's value for each prize. One value lies in each tier
/// [90,99], [50,89], [10,49], [0,9].
class ValueProfile {
public:
    ValueProfile() = default;
    explicit ValueProfile(const std::array<Cents, kSize>& cents);

    Cents value(Prize p) const { return cents_[index(p)]; }
    const std::array<Cents, kSize>& cents() const { return cents_; }

    /// Prizes from highest to lowest value (Y's straightforward ranking).
    Ranking by_value() const;
    Prize best() const { return by_value().top(); }
    /// 1 for the highest-valued prize, 4 for the lowest.
    int value_rank(Prize p) const { return static_cast<int>(by_value().position(p)) + 1; }

    friend bool operator==(const ValueProfile&, const ValueProfile&) = default;

private:
    std::array<Cents, kSize> cents_{95, 60, 30, 5};
};

struct Tier {
    Cents lo;
    Cents hi;
};
inline constexpr std::array<Tier, kSize> kValueTiers{{{90, 99}, {50, 89}, {10, 49}, {0, 9}}};

struct SamplerConfig {
    double r1 = 1.7;  // computerized-vs-Y weight at the highest-valued prize
    double r2 = 0.5;  // geometric weight for computerized rankings
    std::uint64_t seed = 0;

    void validate() const;
    friend bool operator==(const SamplerConfig&, const SamplerConfig&) = default;
};

struct RoundSpec {
    ValueProfile values;
    PriorityTable priorities;
    std::array<Ranking, 3> computerized;  // R, S, T
    std::uint64_t seed = 0;
    std::uint64_t round_index = 0;

    OthersMarket others() const { return OthersMarket{computerized, priorities}; }
    Market market_with(const Ranking& y) const { return others().with_human(y); }
    friend bool operator==(const RoundSpec&, const RoundSpec&) = default;
};

ValueProfile sample_values(Rng& rng);
PriorityTable sample_priorities(Rng& rng, const ValueProfile& values, double r1 = 1.7);
std::array<Ranking, 3> sample_computerized_rankings(Rng& rng, const ValueProfile& values, double r2 = 0.5);

/// Draws round `round_index` of the session seeded by `config.seed`; the
/// generator is Rng(config.seed, {round_index}).
RoundSpec sample_round(const SamplerConfig& config, std::uint64_t round_index = 0);
std::vector<RoundSpec> sample_rounds(const SamplerConfig& config, std::size_t count);

// One JSON object per round:
//   {"seed": 7, "round": 0, "values": {"A": 95, ...},
//    "priorities": {"A": [...], ...}, "computerized_rankings": {"R": [...], ...}}
json round_to_json(const RoundSpec& r);
RoundSpec round_from_json(const json& j);
json values_to_json(const ValueProfile& v);
ValueProfile values_from_json(const json& j);

std::string format_money(Cents cents, const std::string& currency);

}  // namespace dalab
