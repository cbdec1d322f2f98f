#include "dalab/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "dalab/analysis.hpp"
#include "dalab/rng.hpp"

namespace dalab {

namespace {

constexpr std::array kPolicies{RankingPolicy::AlwaysSF, RankingPolicy::FlipTopTwoWhenNotTopPriority,
                               RankingPolicy::UniformRandom, RankingPolicy::SfCount, RankingPolicy::SfProbability};

double sf_probability(const AgentType& t, int round) {
    return std::clamp(t.sf_prob + t.sf_trend * (round - 1), 0.0, 1.0);
}

Ranking flip_top_two(const ValueProfile& v) { return ranking_for_pattern({2, 1, 3, 4}, v); }

Ranking non_sf(const AgentType& t, const ValueProfile& v, Rng& rng) {
    if (t.non_sf == NonSfStyle::FlipTopTwo) return flip_top_two(v);
    const auto& all = all_rankings();
    Ranking sf = v.by_value();
    for (;;) {
        const Ranking& r = all[rng.below(all.size())];
        if (!(r == sf)) return r;
    }
}

struct Plan {
    Treatment treatment = Treatment::Null;
    std::uint64_t session_seed = 0;
    std::array<bool, kRealRounds> sf_round{};
    std::vector<bool> spu_right;
};

std::vector<EventRecord> drive(const PopulationSpec& spec, const AgentType& type, const Plan& plan, std::size_t i,
                               std::uint64_t seed, const std::shared_ptr<const QuestionBank>& bank) {
    SessionState s = create_session(plan.treatment, spec.config, plan.session_seed, "sim-" + std::to_string(i), bank);
    Rng rng(seed, {5, i});
    auto spu = s.bank->spu_questions();
    std::map<std::string, std::size_t> spu_index;
    for (std::size_t k = 0; k < spu.size(); ++k) spu_index[spu[k]->id] = k;

    while (!s.complete()) {
        ScreenSpec sc = current_screen(s);
        if (sc.kind == ScreenKind::RealRound) {
            int k = sc.payload["round"].get<int>();
            const RoundSpec& r = s.rounds.at(static_cast<std::size_t>(k - 1));
            Ranking ranking = r.values.by_value();
            switch (type.policy) {
                case RankingPolicy::AlwaysSF: break;
                case RankingPolicy::FlipTopTwoWhenNotTopPriority:
                    if (r.priorities[index(r.values.best())].position(Agent::Y) != 0) ranking = flip_top_two(r.values);
                    break;
                case RankingPolicy::UniformRandom: ranking = all_rankings()[rng.below(24)]; break;
                case RankingPolicy::SfCount:
                case RankingPolicy::SfProbability:
                    if (!plan.sf_round[static_cast<std::size_t>(k - 1)]) ranking = non_sf(type, r.values, rng);
                    break;
            }
            submit_response(s, {"ranking", std::nullopt, {{"ranking", ranking}}, std::nullopt});
            continue;
        }
        const json& cur = sc.payload.contains("current_question") ? sc.payload["current_question"] : json();
        if (cur.is_null()) {
            submit_response(s, {"continue", std::nullopt, json(), std::nullopt});
            continue;
        }
        const Question& q = s.bank->question(cur.get<std::string>());
        bool right = true;
        if (!q.graded()) {
            submit_response(s, {"answer", q.id, {{"answer", "simulated"}}, std::nullopt});
            continue;
        }
        if (auto it = spu_index.find(q.id); it != spu_index.end())
            right = plan.spu_right[it->second];
        else if (q.measure == Measure::Cognitive)
            right = rng.bernoulli(type.cognitive_prob);
        else if (q.attempts != AttemptPolicy::SingleShot)
            right = s.attempts.count(q.id) || rng.bernoulli(type.tr_prob);
        submit_response(s, {"answer", q.id, right ? s.bank->expected(q) : s.bank->incorrect(q), std::nullopt});
    }
    return s.log;
}

}  // namespace

std::string_view to_string(RankingPolicy p) {
    switch (p) {
        case RankingPolicy::AlwaysSF: return "always-sf";
        case RankingPolicy::FlipTopTwoWhenNotTopPriority: return "flip-top-two-when-not-top-priority";
        case RankingPolicy::UniformRandom: return "uniform-random";
        case RankingPolicy::SfCount: return "sf-count";
        case RankingPolicy::SfProbability: return "sf-probability";
    }
    return "?";
}

RankingPolicy ranking_policy_from_string(std::string_view s) {
    for (RankingPolicy p : kPolicies)
        if (to_string(p) == s) return p;
    throw InvalidInput("unknown ranking policy '" + std::string(s) + "'");
}

json to_json(const AgentType& t) {
    json j = {{"name", t.name},
              {"share", t.share},
              {"policy", std::string(to_string(t.policy))},
              {"non_sf", t.non_sf == NonSfStyle::FlipTopTwo ? "flip-top-two" : "uniform-non-sf"},
              {"sf_count", t.sf_count},
              {"sf_prob", t.sf_prob},
              {"sf_trend", t.sf_trend},
              {"stratified", t.stratified},
              {"spu_prob", t.spu_prob},
              {"tr_prob", t.tr_prob},
              {"cognitive_prob", t.cognitive_prob}};
    if (t.spu_correct) j["spu_correct"] = *t.spu_correct;
    return j;
}

AgentType agent_type_from_json(const json& j) {
    return guarded([&] {
        AgentType t;
        t.name = j.value("name", t.name);
        t.share = j.value("share", t.share);
        t.policy = ranking_policy_from_string(j.value("policy", std::string("always-sf")));
        std::string style = j.value("non_sf", std::string("flip-top-two"));
        if (style != "flip-top-two" && style != "uniform-non-sf") throw InvalidInput("unknown non_sf style " + style);
        t.non_sf = style == "flip-top-two" ? NonSfStyle::FlipTopTwo : NonSfStyle::UniformNonSf;
        t.sf_count = j.value("sf_count", t.sf_count);
        t.sf_prob = j.value("sf_prob", t.sf_prob);
        t.sf_trend = j.value("sf_trend", t.sf_trend);
        t.stratified = j.value("stratified", t.stratified);
        if (j.contains("spu_correct")) t.spu_correct = j.at("spu_correct").get<int>();
        t.spu_prob = j.value("spu_prob", t.spu_prob);
        t.tr_prob = j.value("tr_prob", t.tr_prob);
        t.cognitive_prob = j.value("cognitive_prob", t.cognitive_prob);
        return t;
    });
}

json to_json(const PopulationSpec& p) {
    json types = json::array();
    for (const auto& t : p.types) types.push_back(to_json(t));
    json tr = json::array();
    for (Treatment t : p.treatments) tr.push_back(std::string(to_string(t)));
    return {{"types", types}, {"treatments", tr}, {"config", to_json(p.config)}};
}

PopulationSpec population_from_json(const json& j) {
    return guarded([&] {
        PopulationSpec p;
        for (const auto& t : j.at("types")) p.types.push_back(agent_type_from_json(t));
        if (j.contains("treatments")) {
            p.treatments.clear();
            for (const auto& t : j.at("treatments")) p.treatments.push_back(treatment_from_string(t.get<std::string>()));
        }
        if (j.contains("config")) p.config = session_config_from_json(j.at("config"));
        return p;
    });
}

std::vector<std::size_t> apportion(const std::vector<double>& shares, std::size_t n) {
    double total = 0;
    for (double s : shares) {
        if (!(s >= 0)) throw InvalidInput("shares must be non-negative");
        total += s;
    }
    if (shares.empty() || total <= 0) throw InvalidInput("shares must have a positive sum");
    std::vector<std::size_t> out(shares.size());
    std::vector<std::pair<double, std::size_t>> rem;
    std::size_t used = 0;
    for (std::size_t i = 0; i < shares.size(); ++i) {
        double exact = shares[i] / total * static_cast<double>(n);
        // Guard against 0.32 * 500 landing a hair below 160.
        double fl = std::floor(exact + 1e-9);
        out[i] = static_cast<std::size_t>(fl);
        used += out[i];
        rem.push_back({exact - fl, i});
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; used < n; ++k, ++used) out[rem[k % rem.size()].second]++;
    return out;
}

std::vector<SimulatedAgent> simulate_agents(const PopulationSpec& spec, std::size_t n, std::uint64_t seed) {
    if (spec.types.empty()) throw InvalidInput("population has no agent types");
    if (spec.treatments.empty()) throw InvalidInput("population has no treatments");
    spec.config.validate();
    for (const auto& t : spec.types) {
        if (t.sf_count < 0 || t.sf_count > kRealRounds) throw InvalidInput("sf_count must lie in 0..10");
        if (t.spu_correct && (*t.spu_correct < 0 || *t.spu_correct > 18))
            throw InvalidInput("spu_correct must lie in 0..18");
    }
    std::vector<double> shares;
    for (const auto& t : spec.types) shares.push_back(t.share);
    auto counts = apportion(shares, n);

    std::vector<SimulatedAgent> agents(n);
    std::size_t pos = 0;
    for (std::size_t t = 0; t < counts.size(); ++t)
        for (std::size_t k = 0; k < counts[t]; ++k) agents[pos++].type = t;
    Rng shuffle_rng(seed, {1});
    shuffle_rng.shuffle(std::span<SimulatedAgent>(agents));

    auto bank = spec.config.bank_path.empty()
                    ? std::shared_ptr<const QuestionBank>(&default_bank(), [](const QuestionBank*) {})
                    : std::make_shared<const QuestionBank>(load_bank(spec.config.bank_path));
    const std::size_t n_spu = bank->spu_questions().size();

    std::vector<Plan> plans(n);
    for (std::size_t i = 0; i < n; ++i) {
        const AgentType& type = spec.types[agents[i].type];
        Plan& p = plans[i];
        p.treatment = spec.treatments[i % spec.treatments.size()];
        p.session_seed = Rng(seed, {2, i}).next();
        Rng rng(seed, {3, i});
        if (type.policy == RankingPolicy::SfCount) {
            std::array<std::size_t, kRealRounds> idx{};
            std::iota(idx.begin(), idx.end(), 0);
            rng.shuffle(std::span<std::size_t>(idx));
            for (int k = 0; k < type.sf_count; ++k) p.sf_round[idx[static_cast<std::size_t>(k)]] = true;
        } else if (type.policy == RankingPolicy::SfProbability && !type.stratified) {
            for (int k = 1; k <= kRealRounds; ++k)
                p.sf_round[static_cast<std::size_t>(k - 1)] = rng.bernoulli(sf_probability(type, k));
        }
        p.spu_right.assign(n_spu, false);
        if (type.spu_correct) {
            std::vector<std::size_t> idx(n_spu);
            std::iota(idx.begin(), idx.end(), 0);
            rng.shuffle(std::span<std::size_t>(idx));
            for (int k = 0; k < *type.spu_correct && static_cast<std::size_t>(k) < n_spu; ++k)
                p.spu_right[idx[static_cast<std::size_t>(k)]] = true;
        } else {
            for (std::size_t k = 0; k < n_spu; ++k) p.spu_right[k] = rng.bernoulli(type.spu_prob);
        }
    }
    for (std::size_t t = 0; t < spec.types.size(); ++t) {
        const AgentType& type = spec.types[t];
        if (type.policy != RankingPolicy::SfProbability || !type.stratified) continue;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (agents[i].type == t) members.push_back(i);
        for (int k = 1; k <= kRealRounds; ++k) {
            auto quota = static_cast<std::size_t>(std::llround(sf_probability(type, k) * static_cast<double>(members.size())));
            Rng rng(seed, {4, t, static_cast<std::uint64_t>(k)});
            auto order = members;
            rng.shuffle(std::span<std::size_t>(order));
            for (std::size_t j = 0; j < quota; ++j) plans[order[j]].sf_round[static_cast<std::size_t>(k - 1)] = true;
        }
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                agents[i].log = drive(spec, spec.types[agents[i].type], plans[i], i, seed, bank);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::size_t threads = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return agents;
}

std::vector<std::vector<EventRecord>> simulate_population(const PopulationSpec& spec, std::size_t n,
                                                          std::uint64_t seed) {
    std::vector<std::vector<EventRecord>> out;
    for (auto& a : simulate_agents(spec, n, seed)) out.push_back(std::move(a.log));
    return out;
}

PopulationSpec planted_recovery_population() {
    auto count = [](std::string name, double share, int spu, int sf) {
        AgentType t;
        t.name = std::move(name);
        t.share = share;
        t.policy = RankingPolicy::SfCount;
        t.non_sf = NonSfStyle::UniformNonSf;
        t.sf_count = sf;
        t.spu_correct = spu;
        return t;
    };
    PopulationSpec p;
    // At or above 0.75 (14+ of 18 right): mean SF (0.32*1.0 + 0.13*0.5 + 0.05*0.6) / 0.5 = 0.83.
    p.types.push_back(count("high-spu-high-sf", 0.32, 17, 10));
    p.types.push_back(count("high-spu-sf5", 0.13, 14, 5));
    p.types.push_back(count("high-spu-sf6", 0.05, 16, 6));
    // Below: mean SF (0.10*0.9 + 0.20*0.3 + 0.20*0.4) / 0.5 = 0.46.
    p.types.push_back(count("low-spu-high-sf", 0.10, 9, 9));
    p.types.push_back(count("low-spu-sf3", 0.20, 6, 3));
    p.types.push_back(count("low-spu-sf4", 0.20, 12, 4));
    return p;
}

PopulationSpec planted_trend_population(bool stratified) {
    AgentType t;
    t.name = "trend";
    t.policy = RankingPolicy::SfProbability;
    t.sf_prob = 0.40;
    t.sf_trend = 0.02;
    t.stratified = stratified;
    PopulationSpec p;
    p.types.push_back(t);
    return p;
}

}  // namespace dalab
