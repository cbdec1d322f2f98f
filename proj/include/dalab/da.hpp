#pragma once

// Deferred acceptance in both directions, menus, and the brute-force
// oracles used to check them.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dalab/market.hpp"

namespace dalab {

enum class Direction {
    ParticipantProposing,     // agents Y,R,S,T propose to prizes
    PrizeProposingExcluding,  // prizes propose to R,S,T; Y excluded
};

std::string_view to_string(Direction d);
Direction direction_from_string(std::string_view s);

/// One proposal. Indices are Agent or Prize indices depending on direction:
/// for ParticipantProposing the proposer is an agent and the receiver a
/// prize, and the other way round for PrizeProposingExcluding.
struct ProposalEvent {
    std::size_t step = 0;  // canonical step during which the proposal is made
    std::uint8_t proposer = 0;
    std::uint8_t receiver = 0;
    bool accepted = false;  // still held when the algorithm stops
    friend bool operator==(const ProposalEvent&, const ProposalEvent&) = default;
};

struct ProposalTrace {
    std::vector<ProposalEvent> events;
    std::size_t total() const { return events.size(); }
};

/// Tentative pairing state as drawn by the allocation-calculation board.
///
/// rows[r] lists the proposers currently paired to receiver r, ascending.
/// For ParticipantProposing, rows are prizes and entries agents. For
/// PrizeProposingExcluding, rows are agents (row Y stays empty) and entries
/// prizes; `unpaired` holds prizes that were rejected by every agent.
struct Board {
    std::array<std::vector<std::uint8_t>, kSize> rows;
    std::vector<std::uint8_t> unpaired;

    void normalize();
    bool has_conflict() const;
    friend bool operator==(const Board&, const Board&) = default;
};

std::string to_string(const Board& b, Direction d);

struct DaResult {
    Matching matching;
    ProposalTrace trace;
};

struct TempResult {
    TempAllocation allocation;
    ProposalTrace trace;
};

DaResult run_da_participant_proposing(const Market& market);
TempResult run_da_prize_proposing_excluding(const OthersMarket& others);

/// Boards after each canonical step. Step 0 pairs every proposer with its
/// first choice; each later step resolves the lowest-labelled receiver that
/// holds two or more proposers, and rejected proposers move straight on to
/// their next choice. The last board has no conflicts.
std::vector<Board> canonical_schedule(const Market& market);
std::vector<Board> canonical_schedule(const OthersMarket& others);

/// Picks which free proposer moves next; receives the indices of all free
/// proposers (never empty) and returns one of them.
using ProposerChooser = std::function<std::uint8_t(const std::vector<std::uint8_t>& free)>;

/// Sequential DA (one proposal at a time) with an arbitrary execution order.
/// Produces the same outcome and count as the canonical schedule.
DaResult run_da_participant_proposing(const Market& market, const ProposerChooser& choose);
TempResult run_da_prize_proposing_excluding(const OthersMarket& others, const ProposerChooser& choose);

/// Y's obtainable prizes: the unpaired prize plus every prize at which Y
/// out-ranks the temporary holder.
Menu compute_menu(const TempAllocation& temp, const PriorityTable& priorities);
Menu compute_menu(const OthersMarket& others);

/// Highest-ranked menu element. Throws InvariantViolation on an empty menu.
Prize menu_best(const Menu& menu, const Ranking& ranking);

/// Y's outcome under every one of the 24 possible rankings, collected.
Menu achievable_set_bruteforce(const OthersMarket& others);

/// No agent-prize pair blocks: nobody prefers a prize whose holder has
/// lower priority there.
bool is_stable(const Matching& matching, const Market& market);

struct StepVerdict {
    bool valid = true;
    std::string reason;
    explicit operator bool() const { return valid; }
};

/// Checks a submitted board against the canonical board at `step`.
/// Throws std::out_of_range if `step` lies beyond the schedule.
StepVerdict validate_gui_step(const Market& market, const Board& submitted, std::size_t step);
StepVerdict validate_gui_step(const OthersMarket& others, const Board& submitted, std::size_t step);
StepVerdict compare_boards(const Board& expected, const Board& submitted, Direction d);

/// Sum over proposers of the 1-based position of the final partner in their
/// own list; for the prize direction an unpaired prize counts 3.
std::size_t proposal_count_identity(const Matching& m, const Market& market);
std::size_t proposal_count_identity(const TempAllocation& t, const OthersMarket& others);

}  // namespace dalab
