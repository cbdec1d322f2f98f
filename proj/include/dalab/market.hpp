#pragma once

// Value types for the four-agent, four-prize matching environment.
//
// Agents are the human participant Y ("You") and the computerized
// participants R, S and T. Prizes are A, B, C and D. Every preference list
// (an agent's ranking of prizes, or a prize's priority order over agents) is
// a strict, complete permutation; constructors reject anything else.

#include <algorithm>
#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dalab {

inline constexpr std::size_t kSize = 4;

enum class Prize : std::uint8_t { A = 0, B = 1, C = 2, D = 3 };
enum class Agent : std::uint8_t { Y = 0, R = 1, S = 2, T = 3 };

inline constexpr std::array<Prize, kSize> kPrizes{Prize::A, Prize::B, Prize::C, Prize::D};
inline constexpr std::array<Agent, kSize> kAgents{Agent::Y, Agent::R, Agent::S, Agent::T};
inline constexpr std::array<Agent, 3> kComputerized{Agent::R, Agent::S, Agent::T};

constexpr std::size_t index(Prize p) { return static_cast<std::size_t>(p); }
constexpr std::size_t index(Agent a) { return static_cast<std::size_t>(a); }

/// Raised when an input fails a structural precondition (bad label,
/// non-permutation, malformed document).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a documented invariant would be broken (e.g. an empty menu).
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

char label(Prize p);
char label(Agent a);
std::string_view agent_name(Agent a);
Prize prize_from_label(char c);
Agent agent_from_label(char c);
Prize prize_from_label(std::string_view s);
Agent agent_from_label(std::string_view s);

/// A strict order over all four elements of `T`; position 0 is the best.
template <class T>
class StrictOrder {
public:
    StrictOrder() = default;

    explicit StrictOrder(const std::array<T, kSize>& items) : items_(items) {
        std::array<bool, kSize> seen{};
        for (T t : items_) {
            auto i = index(t);
            if (i >= kSize || seen[i]) throw InvalidInput("order is not a permutation of four labels");
            seen[i] = true;
        }
        for (std::size_t pos = 0; pos < kSize; ++pos) rank_[index(items_[pos])] = static_cast<std::uint8_t>(pos);
    }

    StrictOrder(std::initializer_list<T> items) : StrictOrder(to_array(items)) {}

    const std::array<T, kSize>& items() const { return items_; }
    T at(std::size_t pos) const { return items_.at(pos); }
    T top() const { return items_[0]; }

    /// Zero-based position of `t` (0 = most preferred).
    std::size_t position(T t) const { return rank_[index(t)]; }
    bool prefers(T x, T y) const { return position(x) < position(y); }

    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

    friend bool operator==(const StrictOrder& a, const StrictOrder& b) { return a.items_ == b.items_; }
    friend bool operator<(const StrictOrder& a, const StrictOrder& b) { return a.items_ < b.items_; }

private:
    static std::array<T, kSize> to_array(std::initializer_list<T> items) {
        if (items.size() != kSize) throw InvalidInput("order must list exactly four labels");
        std::array<T, kSize> out{};
        std::copy(items.begin(), items.end(), out.begin());
        return out;
    }

    std::array<T, kSize> items_{T{0}, T{1}, T{2}, T{3}};
    std::array<std::uint8_t, kSize> rank_{0, 1, 2, 3};
};

using Ranking = StrictOrder<Prize>;        // an agent's ranking of prizes
using PriorityOrder = StrictOrder<Agent>;  // a prize's priority over agents

using Rankings = std::array<Ranking, kSize>;          // indexed by Agent
using PriorityTable = std::array<PriorityOrder, kSize>;  // indexed by Prize

/// Parses "ABCD", "A>B>C>D", "A-B-C-D" or "A B C D".
Ranking parse_ranking(std::string_view text);
PriorityOrder parse_priority(std::string_view text);
std::string to_string(const Ranking& r, char sep = '>');
std::string to_string(const PriorityOrder& p, char sep = '>');

/// All 24 rankings in lexicographic order.
const std::array<Ranking, 24>& all_rankings();

/// Full DA input: one ranking per agent, one priority order per prize.
struct Market {
    Rankings rankings;
    PriorityTable priorities;

    const Ranking& ranking(Agent a) const { return rankings[index(a)]; }
    const PriorityOrder& priority(Prize p) const { return priorities[index(p)]; }
    friend bool operator==(const Market&, const Market&) = default;
};

/// The part of a market that does not depend on Y: the three computerized
/// rankings and the complete priority table.
struct OthersMarket {
    std::array<Ranking, 3> rankings;  // R, S, T
    PriorityTable priorities;

    const Ranking& ranking(Agent a) const;
    const PriorityOrder& priority(Prize p) const { return priorities[index(p)]; }
    Market with_human(const Ranking& y) const;
    friend bool operator==(const OthersMarket&, const OthersMarket&) = default;
};

OthersMarket others_of(const Market& m);

/// Bijection between agents and prizes.
class Matching {
public:
    explicit Matching(const std::array<Prize, kSize>& prize_of_agent);

    Prize prize_of(Agent a) const { return prize_of_[index(a)]; }
    Agent agent_of(Prize p) const { return agent_of_[index(p)]; }
    const std::array<Prize, kSize>& prizes() const { return prize_of_; }
    friend bool operator==(const Matching& a, const Matching& b) { return a.prize_of_ == b.prize_of_; }

private:
    std::array<Prize, kSize> prize_of_;
    std::array<Agent, kSize> agent_of_{};
};

std::string to_string(const Matching& m);

/// Outcome of prize-proposing DA among R, S and T only. Three prizes are
/// held by distinct computerized agents; the fourth is unpaired.
class TempAllocation {
public:
    explicit TempAllocation(const std::array<std::optional<Agent>, kSize>& holder_of_prize);

    std::optional<Agent> holder(Prize p) const { return holder_[index(p)]; }
    Prize unpaired() const { return unpaired_; }
    friend bool operator==(const TempAllocation& a, const TempAllocation& b) { return a.holder_ == b.holder_; }

private:
    std::array<std::optional<Agent>, kSize> holder_;
    Prize unpaired_{Prize::A};
};

std::string to_string(const TempAllocation& t);

/// A set of prizes. Menus produced by the mechanism are never empty, but
/// the set type itself allows emptiness so it can also describe outcomes.
class PrizeSet {
public:
    PrizeSet() = default;
    PrizeSet(std::initializer_list<Prize> prizes) {
        for (Prize p : prizes) insert(p);
    }
    static PrizeSet from_bits(unsigned bits) {
        PrizeSet s;
        s.bits_ = std::bitset<kSize>(bits & 0xFu);
        return s;
    }

    void insert(Prize p) { bits_.set(index(p)); }
    void erase(Prize p) { bits_.reset(index(p)); }
    bool contains(Prize p) const { return bits_.test(index(p)); }
    bool empty() const { return bits_.none(); }
    std::size_t size() const { return bits_.count(); }
    unsigned bits() const { return static_cast<unsigned>(bits_.to_ulong()); }
    std::vector<Prize> elements() const;

    friend bool operator==(const PrizeSet& a, const PrizeSet& b) { return a.bits_ == b.bits_; }
    friend bool operator<(const PrizeSet& a, const PrizeSet& b) { return a.bits() < b.bits(); }

private:
    std::bitset<kSize> bits_;
};

using Menu = PrizeSet;

/// "{A,C,D}"
std::string to_string(const PrizeSet& s);

}  // namespace dalab
