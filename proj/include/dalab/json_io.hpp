#pragma once

// JSON encodings for market-level types.
//
//   Ranking        ["A","B","C","D"]           best first
//   PriorityOrder  ["R","Y","S","T"]           highest priority first
//   Market         {"rankings": {"Y": Ranking, "R": ..., "S": ..., "T": ...},
//                   "priorities": {"A": PriorityOrder, ..., "D": ...}}
//   OthersMarket   as Market without "Y" (a "Y" entry is ignored on input)
//   Matching       {"Y": "C", "R": "A", "S": "D", "T": "B"}
//   Menu           ["A","C"]
//   Board          {"A": ["Y","R"], ...}                    participant-proposing
//                  {"R": ["A"], "S": [], "T": ["B"], "U.P.": ["C"]}  prize-proposing

#include <json.hpp>

#include "dalab/da.hpp"
#include "dalab/market.hpp"

namespace dalab {

using json = nlohmann::json;

void to_json(json& j, Prize p);
void from_json(const json& j, Prize& p);
void to_json(json& j, Agent a);
void from_json(const json& j, Agent& a);

void to_json(json& j, const Ranking& r);
void from_json(const json& j, Ranking& r);
void to_json(json& j, const PriorityOrder& p);
void from_json(const json& j, PriorityOrder& p);

json priorities_to_json(const PriorityTable& t);
PriorityTable priorities_from_json(const json& j);

void to_json(json& j, const Market& m);
void from_json(const json& j, Market& m);
void to_json(json& j, const OthersMarket& m);
void from_json(const json& j, OthersMarket& m);

json matching_to_json(const Matching& m);
Matching matching_from_json(const json& j);

void to_json(json& j, const PrizeSet& s);
void from_json(const json& j, PrizeSet& s);

json board_to_json(const Board& b, Direction d);
Board board_from_json(const json& j, Direction d);

/// Reads a whole file as JSON; throws InvalidInput with the path on failure.
json read_json_file(const std::string& path);

/// Wraps nlohmann parse/type errors as InvalidInput.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw InvalidInput(e.what());
    }
}

}  // namespace dalab
