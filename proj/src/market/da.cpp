#include "dalab/da.hpp"

#include <sstream>
#include <stdexcept>

namespace dalab {

std::string_view to_string(Direction d) {
    return d == Direction::ParticipantProposing ? "participant-proposing" : "prize-proposing-excluding";
}

Direction direction_from_string(std::string_view s) {
    if (s == "participant-proposing") return Direction::ParticipantProposing;
    if (s == "prize-proposing-excluding") return Direction::PrizeProposingExcluding;
    throw InvalidInput("unknown direction '" + std::string(s) + "'");
}

void Board::normalize() {
    for (auto& row : rows) std::sort(row.begin(), row.end());
    std::sort(unpaired.begin(), unpaired.end());
}

bool Board::has_conflict() const {
    return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.size() > 1; });
}

namespace {

char receiver_label(std::size_t r, Direction d) {
    return d == Direction::ParticipantProposing ? label(static_cast<Prize>(r)) : label(static_cast<Agent>(r));
}

char proposer_label(std::size_t p, Direction d) {
    return d == Direction::ParticipantProposing ? label(static_cast<Agent>(p)) : label(static_cast<Prize>(p));
}

// Generic one-to-one DA over index spaces of size four.
struct Instance {
    Direction direction;
    std::vector<std::uint8_t> proposers;                 // ascending
    std::array<std::vector<std::uint8_t>, kSize> lists;  // per proposer, best first
    std::array<std::array<std::uint8_t, kSize>, kSize> receiver_rank{};  // [receiver][proposer]
};

Instance participant_instance(const Market& m) {
    Instance in{Direction::ParticipantProposing, {0, 1, 2, 3}, {}, {}};
    for (Agent a : kAgents)
        for (Prize p : m.ranking(a)) in.lists[index(a)].push_back(static_cast<std::uint8_t>(index(p)));
    for (Prize p : kPrizes)
        for (Agent a : kAgents) in.receiver_rank[index(p)][index(a)] = static_cast<std::uint8_t>(m.priority(p).position(a));
    return in;
}

Instance prize_instance(const OthersMarket& o) {
    Instance in{Direction::PrizeProposingExcluding, {0, 1, 2, 3}, {}, {}};
    for (Prize p : kPrizes)
        for (Agent a : o.priority(p))
            if (a != Agent::Y) in.lists[index(p)].push_back(static_cast<std::uint8_t>(index(a)));
    for (Agent a : kComputerized)
        for (Prize p : kPrizes) in.receiver_rank[index(a)][index(p)] = static_cast<std::uint8_t>(o.ranking(a).position(p));
    return in;
}

struct Run {
    Board board;
    ProposalTrace trace;
    std::vector<Board> schedule;
};

class Engine {
public:
    explicit Engine(const Instance& in) : in_(in) {}

    Run canonical() {
        for (auto p : in_.proposers) propose(p, 0);
        snapshot();
        for (std::size_t step = 1; run_.board.has_conflict(); ++step) {
            auto& row = *std::find_if(run_.board.rows.begin(), run_.board.rows.end(),
                                      [](const auto& r) { return r.size() > 1; });
            auto r = static_cast<std::size_t>(&row - run_.board.rows.data());
            auto keep = *std::min_element(row.begin(), row.end(), [&](auto x, auto y) {
                return in_.receiver_rank[r][x] < in_.receiver_rank[r][y];
            });
            std::vector<std::uint8_t> rejected;
            for (auto p : row)
                if (p != keep) rejected.push_back(p);
            row = {keep};
            std::sort(rejected.begin(), rejected.end());
            for (auto p : rejected) propose(p, step);
            snapshot();
        }
        finish();
        return std::move(run_);
    }

    Run sequential(const ProposerChooser& choose) {
        std::vector<std::uint8_t> free = in_.proposers;
        std::size_t ordinal = 0;
        while (!free.empty()) {
            auto p = choose(free);
            auto it = std::find(free.begin(), free.end(), p);
            if (it == free.end()) throw std::logic_error("chooser returned a proposer that is not free");
            free.erase(it);
            if (next_[p] >= in_.lists[p].size()) {
                run_.board.unpaired.push_back(p);
                continue;
            }
            auto r = propose(p, ordinal++);
            auto& row = run_.board.rows[r];
            if (row.size() > 1) {
                auto [keep, drop] = in_.receiver_rank[r][row[0]] < in_.receiver_rank[r][row[1]]
                                        ? std::pair{row[0], row[1]}
                                        : std::pair{row[1], row[0]};
                row = {keep};
                free.push_back(drop);
                std::sort(free.begin(), free.end());
            }
        }
        finish();
        return std::move(run_);
    }

private:
    // Returns the receiver proposed to, or kSize if the list is exhausted.
    std::size_t propose(std::uint8_t p, std::size_t step) {
        if (next_[p] >= in_.lists[p].size()) {
            run_.board.unpaired.push_back(p);
            return kSize;
        }
        auto r = in_.lists[p][next_[p]++];
        run_.board.rows[r].push_back(p);
        run_.trace.events.push_back({step, p, r, false});
        return r;
    }

    void snapshot() {
        Board b = run_.board;
        b.normalize();
        run_.schedule.push_back(std::move(b));
    }

    void finish() {
        run_.board.normalize();
        for (auto& e : run_.trace.events) {
            const auto& row = run_.board.rows[e.receiver];
            e.accepted = std::find(row.begin(), row.end(), e.proposer) != row.end();
        }
    }

    const Instance& in_;
    std::array<std::size_t, kSize> next_{};
    Run run_;
};

Matching matching_from(const Board& b) {
    std::array<Prize, kSize> prize_of{};
    for (Prize p : kPrizes) {
        const auto& row = b.rows[index(p)];
        if (row.size() != 1) throw std::logic_error("participant-proposing DA ended with an unmatched prize");
        prize_of[row[0]] = p;
    }
    return Matching(prize_of);
}

TempAllocation temp_from(const Board& b) {
    std::array<std::optional<Agent>, kSize> holder{};
    for (Agent a : kComputerized)
        for (auto p : b.rows[index(a)]) holder[p] = a;
    return TempAllocation(holder);
}

}  // namespace

std::string to_string(const Board& b, Direction d) {
    std::ostringstream os;
    for (std::size_t r = 0; r < kSize; ++r) {
        if (d == Direction::PrizeProposingExcluding && r == index(Agent::Y)) continue;
        os << receiver_label(r, d) << ':';
        for (auto p : b.rows[r]) os << proposer_label(p, d);
        os << ' ';
    }
    if (d == Direction::PrizeProposingExcluding) {
        os << "U.P.:";
        for (auto p : b.unpaired) os << proposer_label(p, d);
    }
    auto s = os.str();
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

DaResult run_da_participant_proposing(const Market& market) {
    auto in = participant_instance(market);
    auto run = Engine(in).canonical();
    return {matching_from(run.board), std::move(run.trace)};
}

TempResult run_da_prize_proposing_excluding(const OthersMarket& others) {
    auto in = prize_instance(others);
    auto run = Engine(in).canonical();
    return {temp_from(run.board), std::move(run.trace)};
}

DaResult run_da_participant_proposing(const Market& market, const ProposerChooser& choose) {
    auto in = participant_instance(market);
    auto run = Engine(in).sequential(choose);
    return {matching_from(run.board), std::move(run.trace)};
}

TempResult run_da_prize_proposing_excluding(const OthersMarket& others, const ProposerChooser& choose) {
    auto in = prize_instance(others);
    auto run = Engine(in).sequential(choose);
    return {temp_from(run.board), std::move(run.trace)};
}

std::vector<Board> canonical_schedule(const Market& market) {
    auto in = participant_instance(market);
    return Engine(in).canonical().schedule;
}

std::vector<Board> canonical_schedule(const OthersMarket& others) {
    auto in = prize_instance(others);
    return Engine(in).canonical().schedule;
}

Menu compute_menu(const TempAllocation& temp, const PriorityTable& priorities) {
    Menu menu;
    for (Prize p : kPrizes) {
        auto h = temp.holder(p);
        if (!h || priorities[index(p)].prefers(Agent::Y, *h)) menu.insert(p);
    }
    return menu;
}

Menu compute_menu(const OthersMarket& others) {
    return compute_menu(run_da_prize_proposing_excluding(others).allocation, others.priorities);
}

Prize menu_best(const Menu& menu, const Ranking& ranking) {
    for (Prize p : ranking)
        if (menu.contains(p)) return p;
    throw InvariantViolation("menu_best called with an empty menu");
}

Menu achievable_set_bruteforce(const OthersMarket& others) {
    Menu out;
    for (const auto& y : all_rankings())
        out.insert(run_da_participant_proposing(others.with_human(y)).matching.prize_of(Agent::Y));
    return out;
}

bool is_stable(const Matching& matching, const Market& market) {
    for (Agent a : kAgents) {
        const auto& pref = market.ranking(a);
        for (Prize p : kPrizes) {
            if (!pref.prefers(p, matching.prize_of(a))) continue;
            if (market.priority(p).prefers(a, matching.agent_of(p))) return false;
        }
    }
    return true;
}

StepVerdict compare_boards(const Board& expected, const Board& submitted, Direction d) {
    Board got = submitted;
    got.normalize();
    auto names = [&](const std::vector<std::uint8_t>& v) {
        std::string s = "{";
        for (auto p : v) s += proposer_label(p, d);
        return s + "}";
    };
    for (std::size_t r = 0; r < kSize; ++r) {
        if (expected.rows[r] != got.rows[r])
            return {false, std::string("row ") + receiver_label(r, d) + " holds " + names(got.rows[r]) +
                               ", expected " + names(expected.rows[r])};
    }
    if (expected.unpaired != got.unpaired)
        return {false, "row U.P. holds " + names(got.unpaired) + ", expected " + names(expected.unpaired)};
    return {};
}

StepVerdict validate_gui_step(const Market& market, const Board& submitted, std::size_t step) {
    auto schedule = canonical_schedule(market);
    if (step >= schedule.size())
        throw std::out_of_range("step " + std::to_string(step) + " beyond schedule of length " +
                                std::to_string(schedule.size()));
    return compare_boards(schedule[step], submitted, Direction::ParticipantProposing);
}

StepVerdict validate_gui_step(const OthersMarket& others, const Board& submitted, std::size_t step) {
    auto schedule = canonical_schedule(others);
    if (step >= schedule.size())
        throw std::out_of_range("step " + std::to_string(step) + " beyond schedule of length " +
                                std::to_string(schedule.size()));
    return compare_boards(schedule[step], submitted, Direction::PrizeProposingExcluding);
}

std::size_t proposal_count_identity(const Matching& m, const Market& market) {
    std::size_t total = 0;
    for (Agent a : kAgents) total += market.ranking(a).position(m.prize_of(a)) + 1;
    return total;
}

std::size_t proposal_count_identity(const TempAllocation& t, const OthersMarket& others) {
    std::size_t total = 0;
    for (Prize p : kPrizes) {
        auto h = t.holder(p);
        if (!h) {
            total += 3;
            continue;
        }
        // Position among R, S, T once Y is removed from the priority order.
        const auto& prio = others.priority(p);
        std::size_t pos = prio.position(*h);
        if (prio.prefers(Agent::Y, *h)) --pos;
        total += pos + 1;
    }
    return total;
}

}  // namespace dalab
