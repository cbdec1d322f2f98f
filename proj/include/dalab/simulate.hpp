#pragma once

// Synthetic participants for exercising the analysis pipeline. Each agent
// drives a real session through the session engine, so every generated log
// replays.
//
// Agent types are apportioned by largest remainder over shares * n, then
// shuffled. Treatments are assigned round-robin over `treatments`.

#include <optional>
#include <string>
#include <vector>

#include "dalab/event.hpp"
#include "dalab/session.hpp"

namespace dalab {

enum class RankingPolicy {
    AlwaysSF,
    FlipTopTwoWhenNotTopPriority,  // [2,1,3,4] when Y is not first at the best prize, else SF
    UniformRandom,
    SfCount,        // SF in exactly sf_count of the 10 rounds, chosen at random
    SfProbability,  // SF with probability sf_prob + sf_trend * (round - 1), clamped to [0, 1]
};

std::string_view to_string(RankingPolicy p);
RankingPolicy ranking_policy_from_string(std::string_view s);

enum class NonSfStyle { FlipTopTwo, UniformNonSf };

struct AgentType {
    std::string name;
    double share = 1;
    RankingPolicy policy = RankingPolicy::AlwaysSF;
    NonSfStyle non_sf = NonSfStyle::FlipTopTwo;
    int sf_count = 10;
    double sf_prob = 1;
    double sf_trend = 0;
    /// Round-by-round quotas across the type instead of independent draws
    /// (SfProbability only): in round k exactly round(m * p_k) of the type's
    /// m agents rank SF.
    bool stratified = false;
    std::optional<int> spu_correct;  // exact SP-U questions right, 0..18
    double spu_prob = 0.5;           // otherwise each right with this probability
    double tr_prob = 0.8;            // first-attempt training accuracy
    double cognitive_prob = 0.5;
};

struct PopulationSpec {
    std::vector<AgentType> types;
    std::vector<Treatment> treatments{kTreatments.begin(), kTreatments.end()};
    SessionConfig config;
};

json to_json(const AgentType& t);
AgentType agent_type_from_json(const json& j);
json to_json(const PopulationSpec& p);
PopulationSpec population_from_json(const json& j);

/// Largest-remainder apportionment of n over the shares; ties broken by
/// lower index.
std::vector<std::size_t> apportion(const std::vector<double>& shares, std::size_t n);

struct SimulatedAgent {
    std::size_t type = 0;
    std::vector<EventRecord> log;
};

/// Deterministic given (spec, n, seed).
std::vector<SimulatedAgent> simulate_agents(const PopulationSpec& spec, std::size_t n, std::uint64_t seed);
std::vector<std::vector<EventRecord>> simulate_population(const PopulationSpec& spec, std::size_t n,
                                                          std::uint64_t seed);

/// Mixture with SF means 0.46 below and 0.83 at or above %SP-U 0.75, and
/// 32% of agents high on both.
PopulationSpec planted_recovery_population();
/// SF probability rising 0.02 per round from 0.40.
PopulationSpec planted_trend_population(bool stratified = true);

}  // namespace dalab
