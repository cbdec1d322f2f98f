#include <doctest.h>

#include <functional>
#include <set>

#include "dalab/session.hpp"
#include "fixtures.hpp"

using namespace dalab;

namespace {

// Answers `wrong_first` incorrect attempts (where the policy allows) before
// the correct answer; ranks straightforwardly in real rounds.
Feedback step(SessionState& s, int wrong_first = 0) {
    ScreenSpec sc = current_screen(s);
    if (sc.kind == ScreenKind::RealRound) {
        const RoundSpec& r = s.rounds.at(sc.payload["round"].get<int>() - 1);
        return submit_response(s, {"ranking", std::nullopt, {{"ranking", r.values.by_value()}}, s.next_seq()});
    }
    if (sc.payload.contains("current_question") && !sc.payload["current_question"].is_null()) {
        const Question& q = s.bank->question(sc.payload["current_question"].get<std::string>());
        int used = s.attempts.count(q.id) ? s.attempts.at(q.id) : 0;
        bool retry = q.attempts != AttemptPolicy::SingleShot && q.graded();
        json answer = retry && used < wrong_first ? s.bank->incorrect(q) : s.bank->expected(q);
        if (!q.graded()) answer = {{"answer", "x"}};
        return submit_response(s, {"answer", q.id, answer, std::nullopt});
    }
    return submit_response(s, {"continue", std::nullopt, json(), std::nullopt});
}

void run_to(SessionState& s, const std::string& screen, int wrong_first = 0) {
    while (!s.complete() && current_screen(s).id != screen) step(s, wrong_first);
    REQUIRE(current_screen(s).id == screen);
}

void run_all(SessionState& s, int wrong_first = 0) {
    while (!s.complete()) step(s, wrong_first);
}

}  // namespace

TEST_CASE("fresh session starts at consent") {
    SessionState s = create_session(Treatment::TradDA, {}, 5);
    CHECK(current_screen(s).id == "consent");
    CHECK(current_screen(s).kind == ScreenKind::Consent);
    CHECK(s.rounds.size() == 10);
    CHECK(s.log.size() == 1);
    CHECK(s.log[0].type == "created");
}

TEST_CASE("same treatment, seed and config give identical state") {
    for (Treatment t : kTreatments) {
        SessionState a = create_session(t, {}, 42);
        SessionState b = create_session(t, {}, 42);
        CHECK(snapshot(a).dump() == snapshot(b).dump());
        CHECK(to_json(current_screen(a)).dump() == to_json(current_screen(b)).dump());
    }
}

TEST_CASE("Null flow repeats the description and ends training with an unscored round") {
    SessionState s = create_session(Treatment::Null, {}, 1);
    auto ids = s.screens;
    CHECK(std::count(ids.begin(), ids.end(), "description-null") == 1);
    CHECK(std::count(ids.begin(), ids.end(), "null-description") == 1);
    CHECK(content("description-null")["sections"] == content("null-description")["sections"]);
    run_to(s, "training-null-3");
    ScreenSpec sc = current_screen(s);
    CHECK(sc.kind == ScreenKind::TrainingRound);
    CHECK(sc.payload["questions"].empty());
    CHECK_THROWS_AS(submit_response(s, {"answer", "tn1-priority-top", {{"answer", "Theresa"}}, std::nullopt}),
                    OutOfOrder);
    step(s);
    CHECK(current_screen(s).id == "real-1");
}

TEST_CASE("flow order per treatment") {
    for (Treatment t : kTreatments) {
        SessionState s = create_session(t, {}, 3);
        std::vector<std::string> seen;
        while (!s.complete()) {
            auto id = current_screen(s).id;
            if (seen.empty() || seen.back() != id) seen.push_back(id);
            step(s);
        }
        seen.push_back(current_screen(s).id);
        CHECK(seen == flow_screen_ids(t));
    }
}

TEST_CASE("Trad-DA and Menu-DA training use their GUI directions") {
    SessionState s = create_session(Treatment::TradDA, {}, 1);
    run_to(s, "training-trad-da-1");
    auto sc = current_screen(s);
    CHECK(sc.payload["gui"]["direction"] == "participant-proposing");
    CHECK(sc.payload["scenario_id"] == "scenario-1");
    SessionState m = create_session(Treatment::MenuDA, {}, 1);
    run_to(m, "training-menu-da-2");
    CHECK(current_screen(m).payload["gui"]["direction"] == "prize-proposing-excluding");
    CHECK(current_screen(m).payload["gui"]["disabled_rows"] == json{"Y"});
}

TEST_CASE("GUI step wrong three times reveals the canonical answer") {
    SessionState s = create_session(Treatment::TradDA, {}, 1);
    run_to(s, "training-trad-da-1");
    const Question& q = s.bank->question("ttrad-da-1-step-0");
    Feedback f;
    for (int i = 1; i <= 3; ++i) {
        CHECK(current_screen(s).payload["current_question"] == q.id);
        f = submit_response(s, {"answer", q.id, {{"board", json::object()}}, std::nullopt});
        CHECK(f.correct == false);
        CHECK(f.attempt == i);
        CHECK(f.revealed.is_null() == (i < 3));
    }
    CHECK(f.points == 0);
    CHECK(f.revealed == s.bank->expected(q));
    auto payload = current_screen(s).payload;
    CHECK(payload["current_question"] == "ttrad-da-1-step-1");
    CHECK(payload["questions"][0]["status"] == "revealed");
    CHECK(payload["questions"][0]["revealed"] == s.bank->expected(q));
    CHECK_THROWS_AS(submit_response(s, {"answer", q.id, s.bank->expected(q), std::nullopt}), OutOfOrder);
}

TEST_CASE("full-board question earns 5 then 2") {
    SessionState a = create_session(Treatment::MenuDA, {}, 1);
    run_to(a, "training-menu-da-2");
    const Question& q = a.bank->question("tmenu-da-2-board");
    CHECK(submit_response(a, {"answer", q.id, a.bank->expected(q), std::nullopt}).points == 5);
    SessionState b = create_session(Treatment::MenuDA, {}, 1);
    run_to(b, "training-menu-da-2");
    submit_response(b, {"answer", q.id, b.bank->incorrect(q), std::nullopt});
    CHECK(submit_response(b, {"answer", q.id, b.bank->expected(q), std::nullopt}).points == 2);
}

TEST_CASE("non-GUI training questions block until correct") {
    SessionState s = create_session(Treatment::MenuSP, {}, 1);
    run_to(s, "training-menu-sp-1");
    const Question& q = s.bank->question("tmenu-sp-1-intro");
    for (int i = 0; i < 7; ++i) {
        Feedback f = submit_response(s, {"answer", q.id, s.bank->incorrect(q), std::nullopt});
        CHECK(f.correct == false);
        CHECK(f.revealed.is_null());
        CHECK(current_screen(s).payload["current_question"] == q.id);
    }
    Feedback f = submit_response(s, {"answer", q.id, s.bank->expected(q), std::nullopt});
    CHECK(f.correct == true);
    CHECK(f.attempt == 8);
    CHECK(f.points == 0);
}

TEST_CASE("real round with the worked example") {
    SessionState s = create_session(Treatment::MenuDA, {}, 9);
    RoundSpec ex;
    ex.values = ValueProfile({95, 60, 30, 5});
    auto others = test::ex1_others();
    ex.priorities = others.priorities;
    ex.computerized = others.rankings;
    s.rounds[0] = ex;
    run_to(s, "real-1");
    auto sc = current_screen(s);
    std::set<std::string> keys;
    for (const auto& [k, v] : sc.payload.items()) keys.insert(k);
    CHECK(keys == std::set<std::string>{"round", "values", "priorities", "currency", "earnings", "reminder"});
    Feedback f = submit_response(s, {"ranking", std::nullopt, {{"ranking", "A>B>C>D"}}, std::nullopt});
    CHECK(f.message == "You received Prize C");
    CHECK(f.detail["value"] == 30);
    CHECK(s.earnings() == 30);
    CHECK(f.detail.size() == 4);  // prize, value, earnings, display
    CHECK(current_screen(s).id == "real-2");
    CHECK(current_screen(s).payload["earnings"] == 30);
}

TEST_CASE("real-round screens never carry computerized rankings") {
    SessionState s = create_session(Treatment::TextbookSP, {}, 17);
    run_to(s, "real-1");
    for (int k = 1; k <= 10; ++k) {
        auto sc = current_screen(s);
        REQUIRE(sc.kind == ScreenKind::RealRound);
        std::string dump = to_json(sc).dump();
        CHECK(dump.find("computerized") == std::string::npos);
        CHECK(dump.find("menu") == std::string::npos);
        CHECK(!sc.payload.contains("scenario"));
        json r = sc.payload["priorities"];
        CHECK(r.size() == 4);
        for (const auto& [prize, order] : r.items()) CHECK(order.size() == 4);
        step(s);
    }
}

TEST_CASE("SP-U answers earn two points and hide correctness") {
    SessionState s = create_session(Treatment::Null, {}, 1);
    run_to(s, "spu-1");
    const Question& q = s.bank->question("spu1-q1");
    int before = s.points;
    Feedback f = submit_response(s, {"answer", q.id, s.bank->expected(q), std::nullopt});
    CHECK(f.points == 2);
    CHECK(s.points == before + 2);
    CHECK_FALSE(f.correct.has_value());
    Feedback w = submit_response(s, {"answer", "spu1-q2", s.bank->incorrect(s.bank->question("spu1-q2")), std::nullopt});
    CHECK(w.points == 0);
    CHECK(current_screen(s).payload["current_question"] == "spu1-q3");
    CHECK(s.log.back().correct == false);
}

TEST_CASE("response errors leave the state unchanged") {
    SessionState s = create_session(Treatment::TradDA, {}, 1);
    run_to(s, "real-1");
    json before = snapshot(s);
    CHECK_THROWS_AS(submit_response(s, {"ranking", std::nullopt, {{"ranking", "AABC"}}, std::nullopt}),
                    MalformedResponse);
    CHECK_THROWS_AS(submit_response(s, {"ranking", std::nullopt, {{"order", "ABCD"}}, std::nullopt}),
                    MalformedResponse);
    CHECK_THROWS_AS(submit_response(s, {"continue", std::nullopt, json(), std::nullopt}), OutOfOrder);
    CHECK_THROWS_AS(submit_response(s, {"ranking", std::nullopt, {{"ranking", "ABCD"}}, s.next_seq() + 1}),
                    OutOfOrder);
    CHECK(snapshot(s) == before);
    run_all(s);
    CHECK_THROWS_AS(submit_response(s, {"continue", std::nullopt, json(), std::nullopt}), OutOfOrder);
}

TEST_CASE("completed session log, score and replay") {
    for (Treatment t : kTreatments) {
        SessionState s = create_session(t, {}, 77);
        run_all(s, 1);
        int rankings = 0;
        for (const auto& e : s.log) rankings += e.type == "ranking";
        CHECK(rankings == 10);
        CHECK(s.earnings() <= 990);
        ScoreReport r = score(s);
        CHECK(r.points_earned == s.points);
        CHECK(r.tr == 0.0);  // one wrong attempt first on every retryable question
        CHECK(r.spu == 1.0);
        CHECK(r.cognitive == 4);
        CHECK(r.attention == 2);
        SessionState back = replay(s.log);
        CHECK(snapshot(back) == snapshot(s));
        CHECK(back.log[3].timestamp == s.log[3].timestamp);
        auto end = current_screen(s);
        CHECK(end.kind == ScreenKind::End);
        CHECK(end.payload["total"] == s.earnings() + r.bonus);
    }
}

TEST_CASE("perfect Trad-DA session scores everything") {
    SessionState s = create_session(Treatment::TradDA, {}, 3);
    run_all(s);
    ScoreReport r = score(s);
    CHECK(r.tr == 1.0);
    CHECK(r.points_earned == r.points_max);
    CHECK(r.bonus == 450);
}

TEST_CASE("replay of partial sessions and tamper detection") {
    SessionState s = create_session(Treatment::MenuSP, {}, 8);
    run_to(s, "training-menu-sp-2", 2);
    SessionState back = replay(s.log);
    CHECK(snapshot(back) == snapshot(s));
    CHECK(to_json(current_screen(back)) == to_json(current_screen(s)));

    auto log = s.log;
    for (auto& e : log)
        if (e.type == "answer" && e.correct == true) {
            e.points += 1;
            break;
        }
    CHECK_THROWS_AS(replay(log), InvariantViolation);
    auto no_header = s.log;
    no_header.erase(no_header.begin());
    CHECK_THROWS_AS(replay(no_header), InvalidInput);
}

TEST_CASE("real rounds are identical across treatments") {
    for (std::uint64_t seed : {0ull, 1ull, 99ull, 123456789ull}) {
        auto base = create_session(Treatment::Null, {}, seed).rounds;
        for (Treatment t : kTreatments) CHECK(create_session(t, {}, seed).rounds == base);
    }
}

TEST_CASE("treatment assignment follows weights") {
    SessionConfig c;
    c.weights = {{"menu-sp", 1.0}};
    for (std::uint64_t seed = 0; seed < 50; ++seed) CHECK(assign_treatment(c, seed) == Treatment::MenuSP);
    SessionConfig bad;
    bad.weights = {{"nope", 1.0}};
    CHECK_THROWS_AS(assign_treatment(bad, 0), InvalidInput);
    std::set<Treatment> seen;
    for (std::uint64_t seed = 0; seed < 200; ++seed) seen.insert(assign_treatment({}, seed));
    CHECK(seen.size() == 5);
}

TEST_CASE("config round trip and validation") {
    SessionConfig c;
    c.currency = "$";
    c.bonus_budget = 300;
    c.weights = {{"trad-da", 2}, {"null", 1}};
    CHECK(session_config_from_json(to_json(c)) == c);
    CHECK_THROWS_AS(session_config_from_json({{"r2", 0}}), InvalidInput);
    CHECK_THROWS_AS(session_config_from_json({{"currency", ""}}), InvalidInput);
    CHECK_THROWS_AS(session_config_from_json(json::array()), InvalidInput);
}

TEST_CASE("description content exists for every flow screen") {
    for (Treatment t : kTreatments)
        for (const auto& id : flow_screen_ids(t)) {
            auto k = screen_kind_of(id);
            if (k == ScreenKind::Consent || k == ScreenKind::NullDescription || k == ScreenKind::TreatmentDescription)
                CHECK_MESSAGE(!content(id).is_null(), id);
        }
    CHECK(content("nothing").is_null());
}

TEST_CASE("responses convert to and from JSON") {
    Response r{"answer", "spu1-q1", {{"answer", "No"}}, 4};
    Response back = response_from_json(to_json(r));
    CHECK(back.type == r.type);
    CHECK(back.question == r.question);
    CHECK(back.payload == r.payload);
    CHECK(back.seq == r.seq);
    CHECK_THROWS_AS(response_from_json({{"type", "dance"}}), MalformedResponse);
    CHECK_THROWS_AS(response_from_json({{"question", "x"}}), InvalidInput);
}
