#include "dalab/scoring.hpp"

#include <map>
#include <set>

namespace dalab {

namespace {

int attempt_limit(AttemptPolicy a) {
    switch (a) {
        case AttemptPolicy::SingleShot: return 1;
        case AttemptPolicy::ThreeThenReveal: return 3;
        case AttemptPolicy::UntilCorrect: return 0;
    }
    return 0;
}

struct Tally {
    int attempts = 0;
    bool solved = false;
    bool first_correct = false;
};

}  // namespace

Cents bonus_amount(Cents budget, int earned, int maximum) {
    if (maximum <= 0) return 0;
    return (2 * budget * earned + maximum) / (2 * static_cast<Cents>(maximum));
}

ScoreReport score_event_log(const std::vector<EventRecord>& events, const QuestionBank& bank, Cents bonus_budget) {
    ScoreReport r;
    std::map<std::string, Tally> tally;
    std::vector<const Question*> universe;
    std::set<std::string> in_universe;
    auto include = [&](const Question* q) {
        if (in_universe.insert(q->id).second) universe.push_back(q);
    };

    bool have_flow = !events.empty() && events.front().type == "created";
    if (have_flow)
        for (const auto* q : bank.for_treatment(treatment_from_string(events.front().detail.at("treatment").get<std::string>())))
            include(q);

    for (const auto& e : events) {
        if (e.type != "answer") continue;
        if (!e.question) throw InvalidInput("answer record " + std::to_string(e.seq) + " has no question id");
        const Question& q = bank.question(*e.question);
        if (have_flow && !in_universe.count(q.id))
            throw InvalidInput("question '" + q.id + "' is not part of the session's flow");
        include(&q);
        auto& t = tally[q.id];
        if (t.solved) throw InvalidInput("attempt on question '" + q.id + "' after a correct answer");
        if (e.attempt != t.attempts + 1)
            throw InvalidInput("attempt " + std::to_string(e.attempt) + " on question '" + q.id + "' out of sequence");
        int limit = attempt_limit(q.attempts);
        if (limit && e.attempt > limit) throw InvalidInput("too many attempts on question '" + q.id + "'");
        t.attempts = e.attempt;
        bool ok = e.correct.value_or(false);
        if (ok) {
            t.solved = true;
            if (e.attempt == 1) t.first_correct = true;
            r.points_earned += points_for(q.points, e.attempt);
        }
    }

    int tr_n = 0, tr_ok = 0, ab_n = 0, ab_ok = 0, pr_n = 0, pr_ok = 0;
    for (const auto* q : universe) {
        r.points_max += max_points(q->points);
        bool first = tally.count(q->id) && tally[q->id].first_correct;
        switch (q->measure) {
            case Measure::Training: ++tr_n, tr_ok += first; break;
            case Measure::Abstract: ++ab_n, ab_ok += first; break;
            case Measure::Practical: ++pr_n, pr_ok += first; break;
            case Measure::Cognitive: r.cognitive += first; break;
            case Measure::Attention: r.attention += first; break;
            case Measure::None: break;
        }
    }
    auto frac = [](int ok, int n) { return n ? static_cast<double>(ok) / n : 0.0; };
    r.tr = frac(tr_ok, tr_n);
    r.abstract_score = frac(ab_ok, ab_n);
    r.practical = frac(pr_ok, pr_n);
    r.spu = frac(ab_ok + pr_ok, ab_n + pr_n);
    r.bonus = bonus_amount(bonus_budget, r.points_earned, r.points_max);
    return r;
}

json to_json(const ScoreReport& r) {
    return {{"tr", r.tr},
            {"spu", r.spu},
            {"abstract", r.abstract_score},
            {"practical", r.practical},
            {"points_earned", r.points_earned},
            {"points_max", r.points_max},
            {"bonus", r.bonus},
            {"cognitive", r.cognitive},
            {"attention", r.attention}};
}

}  // namespace dalab
