#include "dalab/session.hpp"

#include <algorithm>

#include "dalab/rng.hpp"

namespace dalab {

namespace {

std::shared_ptr<const QuestionBank> resolve_bank(const SessionConfig& config,
                                                 std::shared_ptr<const QuestionBank> bank) {
    if (bank) return bank;
    if (config.bank_path.empty()) return std::shared_ptr<const QuestionBank>(&default_bank(), [](const QuestionBank*) {});
    return std::make_shared<const QuestionBank>(load_bank(config.bank_path));
}

int max_attempts(AttemptPolicy a) {
    switch (a) {
        case AttemptPolicy::SingleShot: return 1;
        case AttemptPolicy::ThreeThenReveal: return 3;
        case AttemptPolicy::UntilCorrect: return 0;
    }
    return 0;
}

int round_number(const std::string& screen) {
    auto dash = screen.rfind('-');
    return std::stoi(screen.substr(dash + 1));
}

bool hides_correctness(ScreenKind k) { return k == ScreenKind::SpuScreen || k == ScreenKind::Exit; }

std::vector<const Question*> screen_questions(const SessionState& s) {
    return s.bank->on_screen(s.screens.at(s.screen_index));
}

QuestionStatus status_of(const SessionState& s, const std::string& id) {
    auto it = s.status.find(id);
    return it == s.status.end() ? QuestionStatus::Open : it->second;
}

json question_view(const SessionState& s, const Question& q) {
    json v = {{"id", q.id},
              {"kind", std::string(to_string(q.kind))},
              {"prompt", q.prompt},
              {"points", std::string(to_string(q.points))},
              {"status", std::string(to_string(status_of(s, q.id)))}};
    auto it = s.attempts.find(q.id);
    v["attempts"] = it == s.attempts.end() ? 0 : it->second;
    int limit = max_attempts(q.attempts);
    v["max_attempts"] = limit ? json(limit) : json();
    if (!q.options.empty()) v["options"] = q.options;
    if (status_of(s, q.id) == QuestionStatus::Revealed) v["revealed"] = s.bank->expected(q);
    return v;
}

json gui_spec(Direction d) {
    if (d == Direction::ParticipantProposing)
        return {{"direction", std::string(to_string(d))},
                {"rows", {"A", "B", "C", "D"}},
                {"proposers", {"Y", "R", "S", "T"}}};
    return {{"direction", std::string(to_string(d))},
            {"rows", {"Y", "R", "S", "T", "U.P."}},
            {"disabled_rows", {"Y"}},
            {"proposers", {"A", "B", "C", "D"}}};
}

void advance(SessionState& s) {
    ++s.question_index;
    if (s.question_index >= screen_questions(s).size()) {
        s.question_index = 0;
        ++s.screen_index;
    }
}

EventRecord make_event(const SessionState& s, std::string type) {
    EventRecord e;
    e.session = s.id;
    e.seq = s.next_seq();
    e.timestamp = utc_timestamp();
    e.type = std::move(type);
    e.screen = s.screens.at(s.screen_index);
    return e;
}

Ranking ranking_from_payload(const json& payload) {
    try {
        if (!payload.is_object() || !payload.contains("ranking"))
            throw MalformedResponse("ranking response needs a 'ranking' field");
        const json& r = payload.at("ranking");
        return r.is_string() ? parse_ranking(r.get<std::string>()) : r.get<Ranking>();
    } catch (const MalformedResponse&) {
        throw;
    } catch (const std::exception& e) {
        throw MalformedResponse(std::string("malformed ranking: ") + e.what());
    }
}

}  // namespace

std::string_view to_string(ScreenKind k) {
    switch (k) {
        case ScreenKind::Consent: return "consent";
        case ScreenKind::NullDescription: return "null-description";
        case ScreenKind::NullTraining: return "null-training";
        case ScreenKind::TreatmentDescription: return "treatment-description";
        case ScreenKind::TrainingRound: return "training-round";
        case ScreenKind::RealRound: return "real-round";
        case ScreenKind::SpuScreen: return "spu-screen";
        case ScreenKind::Exit: return "exit";
        case ScreenKind::End: return "end";
    }
    return "?";
}

ScreenKind screen_kind_of(std::string_view id) {
    auto starts = [&](std::string_view p) { return id.substr(0, p.size()) == p; };
    if (id == "consent") return ScreenKind::Consent;
    if (id == "null-description") return ScreenKind::NullDescription;
    if (starts("null-training-")) return ScreenKind::NullTraining;
    if (starts("description-")) return ScreenKind::TreatmentDescription;
    if (starts("training-")) return ScreenKind::TrainingRound;
    if (starts("real-")) return ScreenKind::RealRound;
    if (starts("spu-")) return ScreenKind::SpuScreen;
    if (id == "exit") return ScreenKind::Exit;
    if (id == "end") return ScreenKind::End;
    throw InvalidInput("unknown screen id '" + std::string(id) + "'");
}

std::string_view to_string(QuestionStatus s) {
    switch (s) {
        case QuestionStatus::Open: return "open";
        case QuestionStatus::Correct: return "correct";
        case QuestionStatus::Revealed: return "revealed";
        case QuestionStatus::Answered: return "answered";
    }
    return "?";
}

json to_json(const ScreenSpec& s) {
    return {{"id", s.id}, {"kind", std::string(to_string(s.kind))}, {"payload", s.payload}};
}

void SessionConfig::validate() const {
    if (currency.empty()) throw InvalidInput("currency must not be empty");
    if (bonus_budget < 0) throw InvalidInput("bonus budget must be non-negative");
    SamplerConfig{r1, r2, 0}.validate();
    double total = 0;
    for (const auto& [name, w] : weights) {
        treatment_from_string(name);
        if (!(w >= 0)) throw InvalidInput("treatment weights must be non-negative");
        total += w;
    }
    if (!weights.empty() && total <= 0) throw InvalidInput("treatment weights sum to zero");
}

json to_json(const SessionConfig& c) {
    return {{"currency", c.currency}, {"bonus_budget", c.bonus_budget}, {"r1", c.r1},          {"r2", c.r2},
            {"bank_path", c.bank_path}, {"weights", c.weights},         {"video_url", c.video_url}};
}

SessionConfig session_config_from_json(const json& j) {
    return guarded([&] {
        SessionConfig c;
        if (!j.is_object()) throw InvalidInput("session config must be an object");
        c.currency = j.value("currency", c.currency);
        c.bonus_budget = j.value("bonus_budget", c.bonus_budget);
        c.r1 = j.value("r1", c.r1);
        c.r2 = j.value("r2", c.r2);
        c.bank_path = j.value("bank_path", c.bank_path);
        c.weights = j.value("weights", c.weights);
        c.video_url = j.value("video_url", c.video_url);
        c.validate();
        return c;
    });
}

Treatment assign_treatment(const SessionConfig& config, std::uint64_t seed) {
    config.validate();
    std::vector<double> w;
    for (Treatment t : kTreatments) {
        if (config.weights.empty()) {
            w.push_back(1.0);
            continue;
        }
        double x = 0;
        for (const auto& [name, v] : config.weights)
            if (treatment_from_string(name) == t) x += v;
        w.push_back(x);
    }
    Rng rng(seed, {1000});
    return kTreatments[rng.weighted(w)];
}

Response response_from_json(const json& j) {
    return guarded([&] {
        if (!j.is_object()) throw MalformedResponse("response must be an object");
        Response r;
        r.type = j.at("type").get<std::string>();
        if (r.type != "continue" && r.type != "answer" && r.type != "ranking")
            throw MalformedResponse("unknown response type '" + r.type + "'");
        if (j.contains("question")) r.question = j.at("question").get<std::string>();
        r.payload = j.value("payload", json());
        if (j.contains("seq")) r.seq = j.at("seq").get<std::uint64_t>();
        return r;
    });
}

json to_json(const Response& r) {
    json j = {{"type", r.type}};
    if (r.question) j["question"] = *r.question;
    if (!r.payload.is_null()) j["payload"] = r.payload;
    if (r.seq) j["seq"] = *r.seq;
    return j;
}

json to_json(const Feedback& f) {
    json j = {{"seq", f.seq}, {"message", f.message}, {"next_screen", f.next_screen}};
    if (f.correct) j["correct"] = *f.correct;
    if (f.attempt) j["attempt"] = f.attempt;
    j["points"] = f.points;
    if (!f.revealed.is_null()) j["revealed"] = f.revealed;
    if (!f.detail.is_null()) j["detail"] = f.detail;
    return j;
}

bool SessionState::complete() const { return screens.at(screen_index) == "end"; }

Cents SessionState::earnings() const {
    Cents total = 0;
    for (Cents c : round_earnings) total += c;
    return total;
}

SessionState create_session(Treatment treatment, const SessionConfig& config, std::uint64_t seed, std::string id,
                            std::shared_ptr<const QuestionBank> bank) {
    config.validate();
    SessionState s;
    s.id = id.empty() ? "s-" + std::string(slug(treatment)) + "-" + std::to_string(seed) : std::move(id);
    s.treatment = treatment;
    s.seed = seed;
    s.config = config;
    s.bank = resolve_bank(config, std::move(bank));
    s.screens = flow_screen_ids(treatment);
    s.rounds = sample_rounds(SamplerConfig{config.r1, config.r2, seed}, kRealRounds);

    EventRecord e = make_event(s, "created");
    e.detail = {{"treatment", std::string(to_string(treatment))}, {"seed", seed}, {"config", to_json(config)}};
    s.log.push_back(std::move(e));
    return s;
}

ScreenSpec current_screen(const SessionState& s) {
    ScreenSpec spec;
    spec.id = s.screens.at(s.screen_index);
    spec.kind = screen_kind_of(spec.id);
    json p = json::object();
    auto add_questions = [&] {
        json views = json::array();
        auto qs = screen_questions(s);
        for (const auto* q : qs) views.push_back(question_view(s, *q));
        p["questions"] = views;
        p["current_question"] = s.question_index < qs.size() ? json(qs[s.question_index]->id) : json();
    };
    switch (spec.kind) {
        case ScreenKind::Consent: p["content"] = content("consent"); break;
        case ScreenKind::NullDescription:
        case ScreenKind::TreatmentDescription:
            p["content"] = content(spec.id);
            if (!s.config.video_url.empty()) p["video_url"] = s.config.video_url;
            break;
        case ScreenKind::NullTraining:
        case ScreenKind::TrainingRound: {
            p["round"] = round_number(spec.id);
            p["reminder"] = spec.kind == ScreenKind::NullTraining ? "null-description"
                                                                   : "description-" + std::string(slug(s.treatment));
            if (const Scenario* sc = s.bank->scenario_for_screen(spec.id)) {
                p["scenario_id"] = sc->id;
                p["scenario"] = sc->market;
            }
            if (spec.kind == ScreenKind::TrainingRound && is_mechanics(s.treatment))
                p["gui"] = gui_spec(s.treatment == Treatment::TradDA ? Direction::ParticipantProposing
                                                                     : Direction::PrizeProposingExcluding);
            add_questions();
            break;
        }
        case ScreenKind::RealRound: {
            int k = round_number(spec.id);
            const RoundSpec& r = s.rounds.at(k - 1);
            p["round"] = k;
            p["values"] = values_to_json(r.values);
            p["priorities"] = priorities_to_json(r.priorities);
            p["currency"] = s.config.currency;
            p["earnings"] = s.earnings();
            p["reminder"] = "description-" + std::string(slug(s.treatment));
            break;
        }
        case ScreenKind::SpuScreen:
        case ScreenKind::Exit: add_questions(); break;
        case ScreenKind::End: {
            ScoreReport r = score(s);
            p["earnings"] = s.earnings();
            p["bonus"] = r.bonus;
            p["total"] = s.earnings() + r.bonus;
            p["currency"] = s.config.currency;
            p["display"] = format_money(s.earnings() + r.bonus, s.config.currency);
            break;
        }
    }
    spec.payload = std::move(p);
    return spec;
}

Feedback submit_response(SessionState& s, const Response& r) {
    if (s.complete()) throw OutOfOrder("session is complete");
    if (r.seq && *r.seq != s.next_seq())
        throw OutOfOrder("expected sequence number " + std::to_string(s.next_seq()) + ", got " +
                         std::to_string(*r.seq));
    const std::string screen = s.screens.at(s.screen_index);
    const ScreenKind kind = screen_kind_of(screen);
    auto qs = screen_questions(s);

    Feedback f;
    f.seq = s.next_seq();
    EventRecord e = make_event(s, r.type);

    if (kind == ScreenKind::RealRound) {
        if (r.type != "ranking") throw OutOfOrder("screen " + screen + " expects a ranking");
        Ranking ranking = ranking_from_payload(r.payload);
        int k = round_number(screen);
        const RoundSpec& spec = s.rounds.at(k - 1);
        Prize prize = run_da_participant_proposing(spec.market_with(ranking)).matching.prize_of(Agent::Y);
        Cents value = spec.values.value(prize);
        e.response = {{"ranking", ranking}};
        e.detail = {{"round", k},
                    {"prize", std::string(1, label(prize))},
                    {"value", value},
                    {"earnings", s.earnings() + value}};
        s.round_rankings.push_back(ranking);
        s.round_prizes.push_back(prize);
        s.round_earnings.push_back(value);
        f.message = "You received Prize " + std::string(1, label(prize));
        f.detail = {{"prize", std::string(1, label(prize))},
                    {"value", value},
                    {"earnings", s.earnings()},
                    {"display", format_money(s.earnings(), s.config.currency)}};
        s.log.push_back(std::move(e));
        ++s.screen_index;
    } else if (!qs.empty()) {
        if (r.type != "answer") throw OutOfOrder("screen " + screen + " expects an answer");
        const Question& q = *qs.at(s.question_index);
        if (!r.question || *r.question != q.id) {
            if (r.question && s.bank->contains(*r.question) && status_of(s, *r.question) != QuestionStatus::Open)
                throw OutOfOrder("question '" + *r.question + "' is already completed");
            throw OutOfOrder("expected an answer to question '" + q.id + "'");
        }
        Grade g = s.bank->grade(q, r.payload);
        int attempt = s.attempts[q.id] + 1;
        bool ok = g.correct.value_or(false);
        int pts = ok ? points_for(q.points, attempt) : 0;
        e.question = q.id;
        e.attempt = attempt;
        e.response = r.payload;
        e.correct = g.correct;
        e.points = pts;
        s.log.push_back(std::move(e));

        s.attempts[q.id] = attempt;
        s.points += pts;
        f.attempt = attempt;
        f.points = pts;
        bool done = true;
        QuestionStatus st = QuestionStatus::Answered;
        if (!q.graded()) {
            f.message = "Recorded";
        } else if (ok) {
            st = QuestionStatus::Correct;
            f.message = "Correct";
        } else if (q.attempts == AttemptPolicy::UntilCorrect) {
            done = false;
            st = QuestionStatus::Open;
            f.message = "Incorrect, please try again";
        } else if (q.attempts == AttemptPolicy::ThreeThenReveal) {
            if (attempt < 3) {
                done = false;
                st = QuestionStatus::Open;
                f.message = "Incorrect, please try again";
            } else {
                st = QuestionStatus::Revealed;
                f.revealed = g.answer;
                f.message = "Incorrect. The correct answer is shown";
            }
        } else {
            f.message = "Incorrect";
        }
        if (hides_correctness(kind)) {
            f.message = "Recorded";
        } else {
            f.correct = g.correct;
        }
        s.status[q.id] = st;
        if (done) advance(s);
    } else {
        if (r.type != "continue") throw OutOfOrder("screen " + screen + " expects continue");
        s.log.push_back(std::move(e));
        f.message = "Continue";
        ++s.screen_index;
    }
    f.next_screen = s.screens.at(s.screen_index);
    return f;
}

const std::vector<EventRecord>& event_log(const SessionState& s) { return s.log; }

SessionState replay(const std::vector<EventRecord>& log, std::shared_ptr<const QuestionBank> bank,
                    std::vector<Feedback>* feedback) {
    if (log.empty() || log.front().type != "created") throw InvalidInput("event log must start with a created record");
    const EventRecord& c = log.front();
    SessionState s = guarded([&] {
        return create_session(treatment_from_string(c.detail.at("treatment").get<std::string>()),
                              session_config_from_json(c.detail.at("config")), c.detail.at("seed").get<std::uint64_t>(),
                              c.session, bank);
    });
    if (!(s.log.front() == c)) throw InvariantViolation("created record does not match the regenerated one");
    s.log.front().timestamp = c.timestamp;
    for (std::size_t i = 1; i < log.size(); ++i) {
        const EventRecord& e = log[i];
        Response r{e.type, e.question, e.response, e.seq};
        try {
            Feedback f = submit_response(s, r);
            if (feedback) feedback->push_back(std::move(f));
        } catch (const std::exception& ex) {
            throw InvariantViolation("record " + std::to_string(e.seq) + " cannot be replayed: " + ex.what());
        }
        if (!(s.log.back() == e))
            throw InvariantViolation("record " + std::to_string(e.seq) + " differs from its regenerated form");
        s.log.back().timestamp = e.timestamp;
    }
    return s;
}

json snapshot(const SessionState& s) {
    json log = json::array();
    for (const auto& e : s.log) {
        json j = e;
        j.erase("ts");
        log.push_back(std::move(j));
    }
    json attempts = s.attempts;
    json status = json::object();
    for (const auto& [id, st] : s.status) status[id] = std::string(to_string(st));
    json rounds = json::array();
    for (const auto& r : s.rounds) rounds.push_back(round_to_json(r));
    return {{"id", s.id},
            {"treatment", std::string(to_string(s.treatment))},
            {"seed", s.seed},
            {"config", to_json(s.config)},
            {"screen_index", s.screen_index},
            {"question_index", s.question_index},
            {"attempts", attempts},
            {"status", status},
            {"points", s.points},
            {"round_earnings", s.round_earnings},
            {"rounds", rounds},
            {"log", log}};
}

ScoreReport score(const SessionState& s) { return score_event_log(s.log, *s.bank, s.config.bonus_budget); }

}  // namespace dalab
