#include "dalab/sampler.hpp"

#include <cmath>
#include <cstdio>

namespace dalab {

ValueProfile::ValueProfile(const std::array<Cents, kSize>& cents) : cents_(cents) {
    std::array<bool, kSize> tier_used{};
    for (Cents c : cents_) {
        bool placed = false;
        for (std::size_t t = 0; t < kSize; ++t) {
            if (c >= kValueTiers[t].lo && c <= kValueTiers[t].hi) {
                if (tier_used[t]) throw InvalidInput("two prize values fall in the same tier");
                tier_used[t] = placed = true;
            }
        }
        if (!placed) throw InvalidInput("prize value " + std::to_string(c) + " lies outside every tier");
    }
}

Ranking ValueProfile::by_value() const {
    std::array<Prize, kSize> order = kPrizes;
    std::sort(order.begin(), order.end(), [&](Prize a, Prize b) { return value(a) > value(b); });
    return Ranking(order);
}

void SamplerConfig::validate() const {
    if (!(r1 > 0)) throw InvalidInput("r1 must be positive");
    if (!(r2 > 0 && r2 <= 1)) throw InvalidInput("r2 must lie in (0, 1]");
}

ValueProfile sample_values(Rng& rng) {
    std::array<Cents, kSize> tier_values{};
    for (std::size_t t = 0; t < kSize; ++t)
        tier_values[t] = rng.uniform_int(static_cast<int>(kValueTiers[t].lo), static_cast<int>(kValueTiers[t].hi));
    std::array<Prize, kSize> owner = kPrizes;
    rng.shuffle(std::span<Prize>(owner));
    std::array<Cents, kSize> cents{};
    for (std::size_t t = 0; t < kSize; ++t) cents[index(owner[t])] = tier_values[t];
    return ValueProfile(cents);
}

PriorityTable sample_priorities(Rng& rng, const ValueProfile& values, double r1) {
    const Prize best = values.best();
    PriorityTable table;
    for (Prize p : kPrizes) {
        std::vector<Agent> remaining(kAgents.begin(), kAgents.end());
        std::array<Agent, kSize> order{};
        for (std::size_t pos = 0; pos < kSize; ++pos) {
            std::size_t pick = 0;
            if (remaining.size() > 1) {
                std::vector<double> w;
                for (Agent a : remaining) w.push_back(p == best && a != Agent::Y ? r1 : 1.0);
                pick = rng.weighted(w);
            }
            order[pos] = remaining[pick];
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        table[index(p)] = PriorityOrder(order);
    }
    return table;
}

std::array<Ranking, 3> sample_computerized_rankings(Rng& rng, const ValueProfile& values, double r2) {
    const Ranking by_value = values.by_value();
    std::array<Ranking, 3> out;
    for (auto& ranking : out) {
        // `remaining` stays sorted by Y's value, so its index is P - 1.
        std::vector<Prize> remaining(by_value.begin(), by_value.end());
        std::array<Prize, kSize> order{};
        for (std::size_t pos = 0; pos < kSize; ++pos) {
            std::size_t pick = 0;
            if (remaining.size() > 1) {
                std::vector<double> w;
                double weight = 1.0;
                for (std::size_t i = 0; i < remaining.size(); ++i, weight *= r2) w.push_back(weight);
                pick = rng.weighted(w);
            }
            order[pos] = remaining[pick];
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        ranking = Ranking(order);
    }
    return out;
}

RoundSpec sample_round(const SamplerConfig& config, std::uint64_t round_index) {
    config.validate();
    Rng rng(config.seed, {round_index});
    RoundSpec r;
    r.values = sample_values(rng);
    r.priorities = sample_priorities(rng, r.values, config.r1);
    r.computerized = sample_computerized_rankings(rng, r.values, config.r2);
    r.seed = config.seed;
    r.round_index = round_index;
    return r;
}

std::vector<RoundSpec> sample_rounds(const SamplerConfig& config, std::size_t count) {
    std::vector<RoundSpec> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(sample_round(config, i));
    return out;
}

json values_to_json(const ValueProfile& v) {
    json j = json::object();
    for (Prize p : kPrizes) j[std::string(1, label(p))] = v.value(p);
    return j;
}

ValueProfile values_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("values must be an object");
    std::array<Cents, kSize> cents{};
    for (Prize p : kPrizes) {
        auto key = std::string(1, label(p));
        if (!j.contains(key) || !j[key].is_number_integer()) throw InvalidInput("values." + key + " must be an integer");
        cents[index(p)] = j[key].get<Cents>();
    }
    return ValueProfile(cents);
}

json round_to_json(const RoundSpec& r) {
    json rankings = json::object();
    for (Agent a : kComputerized) rankings[std::string(1, label(a))] = r.computerized[index(a) - 1];
    return json{{"seed", r.seed},
                {"round", r.round_index},
                {"values", values_to_json(r.values)},
                {"priorities", priorities_to_json(r.priorities)},
                {"computerized_rankings", rankings}};
}

RoundSpec round_from_json(const json& j) {
    return guarded([&] {
        RoundSpec r;
        r.seed = j.at("seed").get<std::uint64_t>();
        r.round_index = j.value("round", std::uint64_t{0});
        r.values = values_from_json(j.at("values"));
        r.priorities = priorities_from_json(j.at("priorities"));
        const auto& cr = j.at("computerized_rankings");
        for (Agent a : kComputerized) r.computerized[index(a) - 1] = cr.at(std::string(1, label(a))).get<Ranking>();
        return r;
    });
}

std::string format_money(Cents cents, const std::string& currency) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld", currency.c_str(), static_cast<long long>(cents / 100),
                  static_cast<long long>(cents % 100));
    return buf;
}

}  // namespace dalab
