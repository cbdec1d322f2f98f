#include "dalab/market.hpp"

#include <cctype>

namespace dalab {

char label(Prize p) { return static_cast<char>('A' + index(p)); }

char label(Agent a) {
    static constexpr char kLabels[] = {'Y', 'R', 'S', 'T'};
    return kLabels[index(a)];
}

std::string_view agent_name(Agent a) {
    static constexpr std::string_view kNames[] = {"You", "Ruth", "Shirley", "Theresa"};
    return kNames[index(a)];
}

Prize prize_from_label(char c) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (c < 'A' || c > 'D') throw InvalidInput(std::string("unknown prize label '") + c + "'");
    return static_cast<Prize>(c - 'A');
}

Agent agent_from_label(char c) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
        case 'Y': return Agent::Y;
        case 'R': return Agent::R;
        case 'S': return Agent::S;
        case 'T': return Agent::T;
        default: throw InvalidInput(std::string("unknown agent label '") + c + "'");
    }
}

Prize prize_from_label(std::string_view s) {
    if (s.size() != 1) throw InvalidInput("prize label must be a single letter, got '" + std::string(s) + "'");
    return prize_from_label(s[0]);
}

Agent agent_from_label(std::string_view s) {
    if (s.size() == 1) return agent_from_label(s[0]);
    for (Agent a : kAgents)
        if (s == agent_name(a)) return a;
    throw InvalidInput("unknown agent '" + std::string(s) + "'");
}

namespace {

template <class T, class Parse>
StrictOrder<T> parse_order(std::string_view text, Parse parse) {
    std::array<T, kSize> items{};
    std::size_t n = 0;
    for (char c : text) {
        if (c == '>' || c == '-' || c == ' ' || c == ',') continue;
        if (n == kSize) throw InvalidInput("too many labels in '" + std::string(text) + "'");
        items[n++] = parse(c);
    }
    if (n != kSize) throw InvalidInput("expected four labels in '" + std::string(text) + "'");
    return StrictOrder<T>(items);
}

template <class T>
std::string order_string(const StrictOrder<T>& o, char sep) {
    std::string s;
    for (std::size_t i = 0; i < kSize; ++i) {
        if (i && sep) s += sep;
        s += label(o.at(i));
    }
    return s;
}

}  // namespace

Ranking parse_ranking(std::string_view text) {
    return parse_order<Prize>(text, [](char c) { return prize_from_label(c); });
}

PriorityOrder parse_priority(std::string_view text) {
    return parse_order<Agent>(text, [](char c) { return agent_from_label(c); });
}

std::string to_string(const Ranking& r, char sep) { return order_string(r, sep); }
std::string to_string(const PriorityOrder& p, char sep) { return order_string(p, sep); }

const std::array<Ranking, 24>& all_rankings() {
    static const std::array<Ranking, 24> table = [] {
        std::array<Ranking, 24> out;
        std::array<Prize, kSize> perm = kPrizes;
        std::size_t i = 0;
        do {
            out[i++] = Ranking(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    }();
    return table;
}

const Ranking& OthersMarket::ranking(Agent a) const {
    if (a == Agent::Y) throw InvalidInput("others market has no ranking for Y");
    return rankings[index(a) - 1];
}

Market OthersMarket::with_human(const Ranking& y) const {
    return Market{{y, rankings[0], rankings[1], rankings[2]}, priorities};
}

OthersMarket others_of(const Market& m) {
    return OthersMarket{{m.rankings[1], m.rankings[2], m.rankings[3]}, m.priorities};
}

Matching::Matching(const std::array<Prize, kSize>& prize_of_agent) : prize_of_(prize_of_agent) {
    std::array<bool, kSize> taken{};
    for (Agent a : kAgents) {
        auto p = index(prize_of_[index(a)]);
        if (p >= kSize || taken[p]) throw InvalidInput("matching is not a bijection");
        taken[p] = true;
        agent_of_[p] = a;
    }
}

std::string to_string(const Matching& m) {
    std::string s;
    for (Agent a : kAgents) {
        if (!s.empty()) s += ", ";
        s += label(a);
        s += '-';
        s += label(m.prize_of(a));
    }
    return s;
}

TempAllocation::TempAllocation(const std::array<std::optional<Agent>, kSize>& holder_of_prize)
    : holder_(holder_of_prize) {
    std::array<bool, kSize> used{};
    int empty = 0;
    for (Prize p : kPrizes) {
        const auto& h = holder_[index(p)];
        if (!h) {
            ++empty;
            unpaired_ = p;
            continue;
        }
        if (*h == Agent::Y) throw InvalidInput("temporary allocation cannot pair Y");
        if (used[index(*h)]) throw InvalidInput("temporary allocation pairs an agent twice");
        used[index(*h)] = true;
    }
    if (empty != 1) throw InvalidInput("temporary allocation must leave exactly one prize unpaired");
}

std::string to_string(const TempAllocation& t) {
    std::string s;
    for (Prize p : kPrizes) {
        if (!s.empty()) s += ", ";
        s += label(p);
        s += '-';
        s += t.holder(p) ? label(*t.holder(p)) : '_';
    }
    return s;
}

std::vector<Prize> PrizeSet::elements() const {
    std::vector<Prize> out;
    for (Prize p : kPrizes)
        if (contains(p)) out.push_back(p);
    return out;
}

std::string to_string(const PrizeSet& s) {
    std::string out = "{";
    bool first = true;
    for (Prize p : s.elements()) {
        if (!first) out += ',';
        out += label(p);
        first = false;
    }
    return out + "}";
}

}  // namespace dalab
