#include "dalab/json_io.hpp"

#include <fstream>
#include <sstream>

namespace dalab {

namespace {

std::string label_string(const json& j) {
    if (!j.is_string()) throw InvalidInput("expected a label string, got " + j.dump());
    return j.get<std::string>();
}

template <class T, class Parse>
StrictOrder<T> order_from(const json& j, Parse parse) {
    if (!j.is_array() || j.size() != kSize) throw InvalidInput("expected an array of four labels, got " + j.dump());
    std::array<T, kSize> items{};
    for (std::size_t i = 0; i < kSize; ++i) items[i] = parse(label_string(j[i]));
    return StrictOrder<T>(items);
}

const json& member(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
    return j.at(key);
}

}  // namespace

void to_json(json& j, Prize p) { j = std::string(1, label(p)); }
void from_json(const json& j, Prize& p) { p = prize_from_label(label_string(j)); }
void to_json(json& j, Agent a) { j = std::string(1, label(a)); }
void from_json(const json& j, Agent& a) { a = agent_from_label(label_string(j)); }

void to_json(json& j, const Ranking& r) {
    j = json::array();
    for (Prize p : r) j.push_back(std::string(1, label(p)));
}

void from_json(const json& j, Ranking& r) {
    r = order_from<Prize>(j, [](const std::string& s) { return prize_from_label(s); });
}

void to_json(json& j, const PriorityOrder& p) {
    j = json::array();
    for (Agent a : p) j.push_back(std::string(1, label(a)));
}

void from_json(const json& j, PriorityOrder& p) {
    p = order_from<Agent>(j, [](const std::string& s) { return agent_from_label(s); });
}

json priorities_to_json(const PriorityTable& t) {
    json j = json::object();
    for (Prize p : kPrizes) j[std::string(1, label(p))] = t[index(p)];
    return j;
}

PriorityTable priorities_from_json(const json& j) {
    PriorityTable t;
    for (Prize p : kPrizes) t[index(p)] = member(j, std::string(1, label(p)).c_str()).get<PriorityOrder>();
    return t;
}

void to_json(json& j, const Market& m) {
    json r = json::object();
    for (Agent a : kAgents) r[std::string(1, label(a))] = m.ranking(a);
    j = json{{"rankings", r}, {"priorities", priorities_to_json(m.priorities)}};
}

void from_json(const json& j, Market& m) {
    const auto& r = member(j, "rankings");
    for (Agent a : kAgents) m.rankings[index(a)] = member(r, std::string(1, label(a)).c_str()).get<Ranking>();
    m.priorities = priorities_from_json(member(j, "priorities"));
}

void to_json(json& j, const OthersMarket& m) {
    json r = json::object();
    for (Agent a : kComputerized) r[std::string(1, label(a))] = m.ranking(a);
    j = json{{"rankings", r}, {"priorities", priorities_to_json(m.priorities)}};
}

void from_json(const json& j, OthersMarket& m) {
    const auto& r = member(j, "rankings");
    for (Agent a : kComputerized) m.rankings[index(a) - 1] = member(r, std::string(1, label(a)).c_str()).get<Ranking>();
    m.priorities = priorities_from_json(member(j, "priorities"));
}

json matching_to_json(const Matching& m) {
    json j = json::object();
    for (Agent a : kAgents) j[std::string(1, label(a))] = std::string(1, label(m.prize_of(a)));
    return j;
}

Matching matching_from_json(const json& j) {
    std::array<Prize, kSize> prizes{};
    for (Agent a : kAgents) prizes[index(a)] = member(j, std::string(1, label(a)).c_str()).get<Prize>();
    return Matching(prizes);
}

void to_json(json& j, const PrizeSet& s) {
    j = json::array();
    for (Prize p : s.elements()) j.push_back(std::string(1, label(p)));
}

void from_json(const json& j, PrizeSet& s) {
    if (!j.is_array()) throw InvalidInput("expected an array of prize labels, got " + j.dump());
    s = PrizeSet{};
    for (const auto& e : j) {
        Prize p = e.get<Prize>();
        if (s.contains(p)) throw InvalidInput("duplicate prize in set");
        s.insert(p);
    }
}

json board_to_json(const Board& b, Direction d) {
    json j = json::object();
    if (d == Direction::ParticipantProposing) {
        for (Prize p : kPrizes) {
            json row = json::array();
            for (auto a : b.rows[index(p)]) row.push_back(std::string(1, label(static_cast<Agent>(a))));
            j[std::string(1, label(p))] = row;
        }
        return j;
    }
    auto prizes = [](const std::vector<std::uint8_t>& v) {
        json row = json::array();
        for (auto p : v) row.push_back(std::string(1, label(static_cast<Prize>(p))));
        return row;
    };
    for (Agent a : kComputerized) j[std::string(1, label(a))] = prizes(b.rows[index(a)]);
    j["U.P."] = prizes(b.unpaired);
    return j;
}

Board board_from_json(const json& j, Direction d) {
    if (!j.is_object()) throw InvalidInput("board must be an object");
    Board b;
    std::array<int, kSize> seen{};
    auto take = [&](const json& row, std::vector<std::uint8_t>& out, bool prizes) {
        if (!row.is_array()) throw InvalidInput("board row must be an array");
        for (const auto& e : row) {
            auto i = prizes ? index(e.get<Prize>()) : index(e.get<Agent>());
            if (seen[i]++) throw InvalidInput("board places a proposer twice");
            out.push_back(static_cast<std::uint8_t>(i));
        }
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (d == Direction::ParticipantProposing) {
            take(it.value(), b.rows[index(prize_from_label(key))], false);
        } else if (key == "U.P.") {
            take(it.value(), b.unpaired, true);
        } else {
            Agent a = agent_from_label(key);
            if (a == Agent::Y) throw InvalidInput("Y takes no part in the prize-proposing board");
            take(it.value(), b.rows[index(a)], true);
        }
    }
    b.normalize();
    return b;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

}  // namespace dalab
