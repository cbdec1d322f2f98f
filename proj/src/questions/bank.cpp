#include "dalab/bank.hpp"

#include <algorithm>
#include <cctype>

namespace dalab {

namespace {

template <class E, std::size_t N>
E parse_enum(std::string_view s, const std::array<E, N>& all, const char* what) {
    for (E e : all)
        if (to_string(e) == s) return e;
    throw InvalidInput(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

constexpr std::array kKinds{QuestionKind::Counterfactual, QuestionKind::Existential, QuestionKind::PracticalStatement,
                            QuestionKind::Info,           QuestionKind::Attention,   QuestionKind::Cognitive,
                            QuestionKind::Demographic,    QuestionKind::GuiStep,     QuestionKind::GuiFull,
                            QuestionKind::MenuEntry,      QuestionKind::AllocationEntry, QuestionKind::PrizeEntry};
constexpr std::array kMeasures{Measure::None,     Measure::Training,  Measure::Abstract,
                               Measure::Practical, Measure::Attention, Measure::Cognitive};
constexpr std::array kPointRules{PointRule::None, PointRule::One, PointRule::Two, PointRule::FiveTwo};
constexpr std::array kAttemptPolicies{AttemptPolicy::SingleShot, AttemptPolicy::UntilCorrect,
                                      AttemptPolicy::ThreeThenReveal};

bool has_options(QuestionKind k) {
    switch (k) {
        case QuestionKind::Counterfactual:
        case QuestionKind::Existential:
        case QuestionKind::PracticalStatement:
        case QuestionKind::Info:
        case QuestionKind::Attention: return true;
        default: return false;
    }
}

bool uses_scenario(QuestionKind k) {
    switch (k) {
        case QuestionKind::GuiStep:
        case QuestionKind::GuiFull:
        case QuestionKind::MenuEntry:
        case QuestionKind::AllocationEntry:
        case QuestionKind::PrizeEntry: return true;
        default: return false;
    }
}

std::string trim(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

const json& field(const json& response, const char* key) {
    if (!response.is_object() || !response.contains(key))
        throw MalformedResponse(std::string("response needs a '") + key + "' field");
    return response.at(key);
}

template <class F>
auto malformed_guard(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const MalformedResponse&) {
        throw;
    } catch (const InvalidInput& e) {
        throw MalformedResponse(e.what());
    } catch (const json::exception& e) {
        throw MalformedResponse(e.what());
    }
}

std::string answer_word(bool yes, QuestionKind k) {
    if (k == QuestionKind::PracticalStatement) return yes ? "True" : "False";
    return yes ? "Yes" : "No";
}

}  // namespace

std::string_view to_string(QuestionKind k) {
    switch (k) {
        case QuestionKind::Counterfactual: return "counterfactual";
        case QuestionKind::Existential: return "existential";
        case QuestionKind::PracticalStatement: return "practical-statement";
        case QuestionKind::Info: return "info";
        case QuestionKind::Attention: return "attention";
        case QuestionKind::Cognitive: return "cognitive";
        case QuestionKind::Demographic: return "demographic";
        case QuestionKind::GuiStep: return "gui-step";
        case QuestionKind::GuiFull: return "gui-full";
        case QuestionKind::MenuEntry: return "menu-entry";
        case QuestionKind::AllocationEntry: return "allocation-entry";
        case QuestionKind::PrizeEntry: return "prize-entry";
    }
    return "?";
}

std::string_view to_string(Measure m) {
    switch (m) {
        case Measure::None: return "none";
        case Measure::Training: return "training";
        case Measure::Abstract: return "abstract";
        case Measure::Practical: return "practical";
        case Measure::Attention: return "attention";
        case Measure::Cognitive: return "cognitive";
    }
    return "?";
}

std::string_view to_string(PointRule p) {
    switch (p) {
        case PointRule::None: return "none";
        case PointRule::One: return "1";
        case PointRule::Two: return "2";
        case PointRule::FiveTwo: return "5/2";
    }
    return "?";
}

std::string_view to_string(AttemptPolicy a) {
    switch (a) {
        case AttemptPolicy::SingleShot: return "single-shot";
        case AttemptPolicy::UntilCorrect: return "until-correct";
        case AttemptPolicy::ThreeThenReveal: return "three-then-reveal";
    }
    return "?";
}

int points_for(PointRule rule, int attempt) {
    switch (rule) {
        case PointRule::None: return 0;
        case PointRule::One: return attempt == 1 ? 1 : 0;
        case PointRule::Two: return attempt == 1 ? 2 : 0;
        case PointRule::FiveTwo: return attempt == 1 ? 5 : attempt == 2 ? 2 : 0;
    }
    return 0;
}

int max_points(PointRule rule) { return points_for(rule, 1); }

QuestionBank::QuestionBank(std::vector<Scenario> scenarios, std::vector<Question> questions,
                           std::map<std::string, std::string, std::less<>> screen_scenarios)
    : scenarios_(std::move(scenarios)), questions_(std::move(questions)), screen_scenarios_(std::move(screen_scenarios)) {
    validate();
}

void QuestionBank::validate() {
    for (const auto& [screen, id] : screen_scenarios_) scenario(id);
    by_id_.clear();
    for (std::size_t i = 0; i < questions_.size(); ++i) {
        auto& q = questions_[i];
        if (q.id.empty()) throw InvalidInput("question without id");
        if (!by_id_.emplace(q.id, i).second) throw InvalidInput("duplicate question id '" + q.id + "'");
        if (has_options(q.kind) && q.options.empty()) throw InvalidInput("question '" + q.id + "' has no options");

        if (q.kind == QuestionKind::Counterfactual || q.kind == QuestionKind::Existential) {
            bool truth = q.kind == QuestionKind::Counterfactual
                             ? (q.counterfactual ? grade_counterfactual(*q.counterfactual)
                                                 : throw InvalidInput("question '" + q.id + "' lacks parameters"))
                             : (q.existential ? grade_existential(*q.existential)
                                              : throw InvalidInput("question '" + q.id + "' lacks parameters"));
            auto derived = answer_word(truth, q.kind);
            if (!q.answer.empty() && q.answer != derived)
                throw InvalidInput("question '" + q.id + "' stores answer '" + q.answer + "' but the grader derives '" +
                                   derived + "'");
            q.answer = derived;
        }
        if (has_options(q.kind) && std::find(q.options.begin(), q.options.end(), q.answer) == q.options.end())
            throw InvalidInput("answer of question '" + q.id + "' is not one of its options");

        if (uses_scenario(q.kind)) {
            const auto& sc = scenario(q.scenario);
            if (q.kind == QuestionKind::GuiStep) {
                if (!q.step) throw InvalidInput("gui-step question '" + q.id + "' lacks a step");
                auto len = q.direction == Direction::ParticipantProposing ? canonical_schedule(sc.market).size()
                                                                          : canonical_schedule(others_of(sc.market)).size();
                if (*q.step >= len) throw InvalidInput("gui-step question '" + q.id + "' addresses a missing step");
            }
        }
    }
}

const Question& QuestionBank::question(std::string_view id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw InvalidInput("unknown question id '" + std::string(id) + "'");
    return questions_[it->second];
}

bool QuestionBank::contains(std::string_view id) const { return by_id_.find(id) != by_id_.end(); }

const Scenario& QuestionBank::scenario(std::string_view id) const {
    for (const auto& s : scenarios_)
        if (s.id == id) return s;
    throw InvalidInput("unknown scenario '" + std::string(id) + "'");
}

const Scenario* QuestionBank::scenario_for_screen(std::string_view screen) const {
    auto it = screen_scenarios_.find(screen);
    return it == screen_scenarios_.end() ? nullptr : &scenario(it->second);
}

std::vector<const Question*> QuestionBank::on_screen(std::string_view screen) const {
    std::vector<const Question*> out;
    for (const auto& q : questions_)
        if (q.screen == screen) out.push_back(&q);
    return out;
}

std::vector<const Question*> QuestionBank::for_treatment(Treatment t) const {
    std::vector<const Question*> out;
    for (const auto& screen : flow_screen_ids(t))
        for (const auto* q : on_screen(screen)) out.push_back(q);
    return out;
}

std::vector<const Question*> QuestionBank::spu_questions() const {
    std::vector<const Question*> out;
    for (const auto& q : questions_)
        if (q.measure == Measure::Abstract || q.measure == Measure::Practical) out.push_back(&q);
    return out;
}

Grade QuestionBank::grade(const Question& q, const json& response) const {
    return malformed_guard([&]() -> Grade {
        switch (q.kind) {
            case QuestionKind::Counterfactual:
            case QuestionKind::Existential:
            case QuestionKind::PracticalStatement:
            case QuestionKind::Info:
            case QuestionKind::Attention: {
                const auto& a = field(response, "answer");
                if (!a.is_string()) throw MalformedResponse("answer must be a string");
                auto s = a.get<std::string>();
                if (std::find(q.options.begin(), q.options.end(), s) == q.options.end())
                    throw MalformedResponse("'" + s + "' is not an option of question '" + q.id + "'");
                return {s == q.answer, json{{"answer", q.answer}}};
            }
            case QuestionKind::Cognitive: {
                const auto& a = field(response, "answer");
                std::string s = a.is_string() ? a.get<std::string>() : a.is_number() ? a.dump() : "";
                if (!a.is_string() && !a.is_number()) throw MalformedResponse("answer must be a number or string");
                return {trim(s) == q.answer, json{{"answer", q.answer}}};
            }
            case QuestionKind::Demographic: {
                field(response, "answer");
                return {std::nullopt, json()};
            }
            case QuestionKind::GuiStep:
            case QuestionKind::GuiFull: {
                const Market& m = scenario(q.scenario).market;
                auto schedule = q.direction == Direction::ParticipantProposing ? canonical_schedule(m)
                                                                               : canonical_schedule(others_of(m));
                const Board& expected = q.kind == QuestionKind::GuiFull ? schedule.back() : schedule.at(*q.step);
                Board got = board_from_json(field(response, "board"), q.direction);
                bool ok = compare_boards(expected, got, q.direction).valid;
                return {ok, json{{"board", board_to_json(expected, q.direction)}}};
            }
            case QuestionKind::MenuEntry: {
                Menu expected = compute_menu(others_of(scenario(q.scenario).market));
                Menu got = field(response, "menu").get<PrizeSet>();
                return {got == expected, json{{"menu", expected}}};
            }
            case QuestionKind::AllocationEntry: {
                Matching expected = run_da_participant_proposing(scenario(q.scenario).market).matching;
                Matching got = matching_from_json(field(response, "matching"));
                return {got == expected, json{{"matching", matching_to_json(expected)}}};
            }
            case QuestionKind::PrizeEntry: {
                Prize expected = run_da_participant_proposing(scenario(q.scenario).market).matching.prize_of(Agent::Y);
                Prize got = field(response, "prize").get<Prize>();
                return {got == expected, json{{"prize", std::string(1, label(expected))}}};
            }
        }
        throw MalformedResponse("unsupported question kind");
    });
}

json QuestionBank::expected(const Question& q) const {
    switch (q.kind) {
        case QuestionKind::Demographic: return json();
        case QuestionKind::GuiStep:
        case QuestionKind::GuiFull: {
            const Market& m = scenario(q.scenario).market;
            auto schedule = q.direction == Direction::ParticipantProposing ? canonical_schedule(m)
                                                                           : canonical_schedule(others_of(m));
            const Board& b = q.kind == QuestionKind::GuiFull ? schedule.back() : schedule.at(*q.step);
            return {{"board", board_to_json(b, q.direction)}};
        }
        case QuestionKind::MenuEntry: return {{"menu", compute_menu(others_of(scenario(q.scenario).market))}};
        case QuestionKind::AllocationEntry:
            return {{"matching", matching_to_json(run_da_participant_proposing(scenario(q.scenario).market).matching)}};
        case QuestionKind::PrizeEntry: {
            Prize p = run_da_participant_proposing(scenario(q.scenario).market).matching.prize_of(Agent::Y);
            return {{"prize", std::string(1, label(p))}};
        }
        default: return {{"answer", q.answer}};
    }
}

json QuestionBank::incorrect(const Question& q) const {
    json e = expected(q);
    switch (q.kind) {
        case QuestionKind::Demographic: return {{"answer", ""}};
        case QuestionKind::Cognitive: return {{"answer", q.answer == "0" ? "1" : "0"}};
        case QuestionKind::GuiStep:
        case QuestionKind::GuiFull: return {{"board", json::object()}};
        case QuestionKind::MenuEntry: {
            Menu m = e.at("menu").get<PrizeSet>();
            if (m.size() > 1)
                m.erase(m.elements().front());
            else
                m.insert(m.contains(Prize::A) ? Prize::B : Prize::A);
            return {{"menu", m}};
        }
        case QuestionKind::AllocationEntry: {
            Matching m = matching_from_json(e.at("matching"));
            std::array<Prize, kSize> shifted{};
            for (Agent a : kAgents) shifted[index(a)] = m.prize_of(kAgents[(index(a) + 1) % kSize]);
            return {{"matching", matching_to_json(Matching(shifted))}};
        }
        case QuestionKind::PrizeEntry: {
            Prize p = e.at("prize").get<Prize>();
            return {{"prize", std::string(1, label(kPrizes[(index(p) + 1) % kSize]))}};
        }
        default:
            for (const auto& o : q.options)
                if (o != q.answer) return {{"answer", o}};
            throw InvalidInput("question '" + q.id + "' has no incorrect option");
    }
}

namespace {

json question_params(const Question& q) {
    json p = json::object();
    if (q.counterfactual) {
        const auto& c = *q.counterfactual;
        p = {{"submitted", c.observation.submitted}, {"received", c.observation.received},
             {"alternative", c.alternative},         {"target", c.target},
             {"modality", std::string(to_string(c.modality))}};
    } else if (q.existential) {
        const auto& e = *q.existential;
        p = {{"submitted", e.observation.submitted}, {"received", e.observation.received},
             {"target", e.target}, {"modality", std::string(to_string(e.modality))}};
    } else if (uses_scenario(q.kind)) {
        p["scenario"] = q.scenario;
        if (q.kind == QuestionKind::GuiStep || q.kind == QuestionKind::GuiFull)
            p["direction"] = std::string(to_string(q.direction));
        if (q.step) p["step"] = *q.step;
    }
    return p;
}

Question question_from(const json& j) {
    Question q;
    q.id = j.at("id").get<std::string>();
    q.screen = j.at("screen").get<std::string>();
    q.kind = parse_enum(j.at("kind").get<std::string>(), kKinds, "question kind");
    q.measure = parse_enum(j.value("measure", std::string("none")), kMeasures, "measure");
    q.points = parse_enum(j.value("points", std::string("none")), kPointRules, "point rule");
    q.attempts = parse_enum(j.value("attempts", std::string("single-shot")), kAttemptPolicies, "attempt policy");
    q.prompt = j.value("prompt", std::string());
    q.options = j.value("options", std::vector<std::string>{});
    q.answer = j.value("answer", std::string());
    q.reconstructed = j.value("reconstructed", false);
    const json p = j.value("params", json::object());
    if (q.kind == QuestionKind::Counterfactual) {
        q.counterfactual = CounterfactualQuery{{p.at("submitted").get<Ranking>(), p.at("received").get<Prize>()},
                                               p.at("alternative").get<Ranking>(), p.at("target").get<Prize>(),
                                               modality_from_string(p.at("modality").get<std::string>())};
    } else if (q.kind == QuestionKind::Existential) {
        q.existential = ExistentialQuery{{p.at("submitted").get<Ranking>(), p.at("received").get<Prize>()},
                                         p.at("target").get<Prize>(),
                                         modality_from_string(p.at("modality").get<std::string>())};
    } else if (uses_scenario(q.kind)) {
        q.scenario = p.at("scenario").get<std::string>();
        if (p.contains("direction")) q.direction = direction_from_string(p.at("direction").get<std::string>());
        if (p.contains("step")) q.step = p.at("step").get<std::size_t>();
    }
    return q;
}

}  // namespace

json QuestionBank::to_json() const {
    json scen = json::array();
    for (const auto& s : scenarios_) scen.push_back({{"id", s.id}, {"market", s.market}});
    json qs = json::array();
    for (const auto& q : questions_) {
        json r = {{"id", q.id},
                  {"screen", q.screen},
                  {"kind", std::string(to_string(q.kind))},
                  {"measure", std::string(to_string(q.measure))},
                  {"points", std::string(to_string(q.points))},
                  {"attempts", std::string(to_string(q.attempts))},
                  {"prompt", q.prompt}};
        if (!q.options.empty()) r["options"] = q.options;
        if (!q.answer.empty()) r["answer"] = q.answer;
        auto params = question_params(q);
        if (!params.empty()) r["params"] = params;
        if (q.reconstructed) r["reconstructed"] = true;
        qs.push_back(std::move(r));
    }
    json ss = json::object();
    for (const auto& [screen, id] : screen_scenarios_) ss[screen] = id;
    return {{"schema_version", kSchemaVersion}, {"scenarios", scen}, {"screen_scenarios", ss}, {"questions", qs}};
}

QuestionBank QuestionBank::from_json(const json& j) {
    return guarded([&] {
        if (j.at("schema_version").get<int>() != kSchemaVersion)
            throw InvalidInput("unsupported question bank schema version");
        std::vector<Scenario> scen;
        for (const auto& s : j.at("scenarios")) scen.push_back({s.at("id").get<std::string>(), s.at("market").get<Market>()});
        std::vector<Question> qs;
        for (const auto& q : j.at("questions")) qs.push_back(question_from(q));
        std::map<std::string, std::string, std::less<>> ss;
        const json shown = j.value("screen_scenarios", json::object());
        for (const auto& [screen, id] : shown.items()) ss.emplace(screen, id.get<std::string>());
        return QuestionBank(std::move(scen), std::move(qs), std::move(ss));
    });
}

QuestionBank load_bank(const std::string& path) { return QuestionBank::from_json(read_json_file(path)); }

bool grade_practical(const QuestionBank& bank, std::string_view statement_id, bool response) {
    const auto& q = bank.question(statement_id);
    if (q.kind != QuestionKind::PracticalStatement)
        throw InvalidInput("question '" + q.id + "' is not a practical statement");
    return (response ? "True" : "False") == q.answer;
}

double random_benchmark(const std::vector<const Question*>& questions) {
    if (questions.empty()) return 0.0;
    double total = 0;
    for (const auto* q : questions) {
        if (q->options.empty()) throw InvalidInput("question '" + q->id + "' has no finite option set");
        total += 1.0 / static_cast<double>(q->options.size());
    }
    return total / static_cast<double>(questions.size());
}

}  // namespace dalab
