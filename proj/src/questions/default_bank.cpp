#include <functional>

#include "dalab/bank.hpp"

namespace dalab {

namespace {

const std::vector<std::string> kYesNo{"Yes", "No"};
const std::vector<std::string> kTrueFalse{"True", "False"};
const std::vector<std::string> kPrizeOptions{"A", "B", "C", "D"};
const std::vector<std::string> kNameOptions{"You", "Ruth", "Shirley", "Theresa"};
const std::vector<std::string> kPositionOptions{"1", "2", "3", "4"};

Market make_market(const char* y, const char* r, const char* s, const char* t, const char* pa, const char* pb,
                   const char* pc, const char* pd) {
    return Market{{parse_ranking(y), parse_ranking(r), parse_ranking(s), parse_ranking(t)},
                  {parse_priority(pa), parse_priority(pb), parse_priority(pc), parse_priority(pd)}};
}

std::vector<Scenario> training_scenarios() {
    return {
        {"scenario-1", make_market("CADB", "CDAB", "ABCD", "CDAB", "SRTY", "RSTY", "STYR", "YSTR")},
        {"scenario-2", make_market("DACB", "DCAB", "DCBA", "DABC", "RYST", "RTSY", "RTYS", "TSYR")},
        {"scenario-3", make_market("BCDA", "ADCB", "ACBD", "ACBD", "YRTS", "TSYR", "RYTS", "RYTS")},
    };
}

Observation observation_of(const Market& m) {
    return {m.ranking(Agent::Y), run_da_participant_proposing(m).matching.prize_of(Agent::Y)};
}

std::string describe(const Observation& o) {
    return "Suppose you submitted " + to_string(o.submitted, '-') + " and received Prize " +
           std::string(1, label(o.received)) + ".";
}

class Builder {
public:
    explicit Builder(std::vector<Scenario> scen) : scenarios_(std::move(scen)) {}

    const Market& market(const std::string& id) const {
        for (const auto& s : scenarios_)
            if (s.id == id) return s.market;
        throw InvalidInput("unknown scenario '" + id + "'");
    }

    Question& add(std::string id, std::string screen, QuestionKind kind, Measure measure, PointRule points,
                  AttemptPolicy attempts, std::string prompt) {
        Question q;
        q.id = std::move(id);
        q.screen = std::move(screen);
        q.kind = kind;
        q.measure = measure;
        q.points = points;
        q.attempts = attempts;
        q.prompt = std::move(prompt);
        q.reconstructed = true;
        questions_.push_back(std::move(q));
        return questions_.back();
    }

    Question& choice(std::string id, std::string screen, Measure measure, PointRule points, AttemptPolicy attempts,
                     std::string prompt, std::vector<std::string> options, std::string answer) {
        auto& q = add(std::move(id), std::move(screen), QuestionKind::Info, measure, points, attempts,
                      std::move(prompt));
        q.options = std::move(options);
        q.answer = std::move(answer);
        return q;
    }

    Question& statement(std::string id, std::string screen, Measure measure, PointRule points,
                        AttemptPolicy attempts, std::string prompt, bool key) {
        auto& q = add(std::move(id), std::move(screen), QuestionKind::PracticalStatement, measure, points, attempts,
                      std::move(prompt));
        q.options = kTrueFalse;
        q.answer = key ? "True" : "False";
        return q;
    }

    Question& counterfactual(std::string id, std::string screen, Measure measure, PointRule points,
                             AttemptPolicy attempts, const Observation& obs, const char* alt, Prize target,
                             Modality mod) {
        CounterfactualQuery cq{obs, parse_ranking(alt), target, mod};
        std::string prompt = describe(obs) + " Had you instead submitted " + to_string(cq.alternative, '-') +
                             ", is it " + std::string(to_string(mod)) + " that you would have received Prize " +
                             std::string(1, label(target)) + "?";
        auto& q = add(std::move(id), std::move(screen), QuestionKind::Counterfactual, measure, points, attempts,
                      std::move(prompt));
        q.options = kYesNo;
        q.counterfactual = cq;
        return q;
    }

    Question& existential(std::string id, std::string screen, Measure measure, PointRule points,
                          AttemptPolicy attempts, const Observation& obs, Prize target, Modality mod) {
        ExistentialQuery eq{obs, target, mod};
        std::string t(1, label(target));
        std::string prompt = describe(obs) + " Is there some other ranking you could have submitted with which " +
                             (mod == Modality::Possible ? "it is possible that you would have received Prize " + t
                                                        : "you would certainly have received Prize " + t) +
                             "?";
        auto& q = add(std::move(id), std::move(screen), QuestionKind::Existential, measure, points, attempts,
                      std::move(prompt));
        q.options = kYesNo;
        q.existential = eq;
        return q;
    }

    Question& on_scenario(std::string id, std::string screen, QuestionKind kind, PointRule points,
                          AttemptPolicy attempts, std::string prompt, std::string scenario) {
        auto& q = add(std::move(id), std::move(screen), kind, Measure::Training, points, attempts, std::move(prompt));
        q.scenario = std::move(scenario);
        return q;
    }

    void show(std::string screen, std::string scenario) { screens_[std::move(screen)] = std::move(scenario); }

    QuestionBank build() { return QuestionBank(std::move(scenarios_), std::move(questions_), std::move(screens_)); }

private:
    std::vector<Scenario> scenarios_;
    std::vector<Question> questions_;
    std::map<std::string, std::string, std::less<>> screens_;
};

void add_null_training(Builder& b) {
    const auto once = AttemptPolicy::UntilCorrect;
    // Common to every treatment; not part of %TR outside the Null treatment.
    b.choice("nt1-priority-top", "null-training-1", Measure::None, PointRule::One, once,
             "Which participant has the highest priority for Prize A?", kNameOptions, "Shirley");
    b.choice("nt1-ranking-top", "null-training-1", Measure::None, PointRule::One, once,
             "Which prize does Ruth rank first?", kPrizeOptions, "C");
    auto& att = b.choice("nt1-attention", "null-training-1", Measure::Attention, PointRule::None,
                         AttemptPolicy::SingleShot,
                         "This question checks that you are reading carefully. Please select Theresa.", kNameOptions,
                         "Theresa");
    att.kind = QuestionKind::Attention;
    b.choice("nt2-priority-bottom", "null-training-2", Measure::None, PointRule::One, once,
             "Which participant has the lowest priority for Prize D?", kNameOptions, "Ruth");
    b.choice("nt2-own-priority", "null-training-2", Measure::None, PointRule::One, once,
             "What is your position in the priority order of Prize A (1 is highest)?", kPositionOptions, "2");

    // Null treatment: two further scored rounds on the third scenario, then an unscored one.
    b.choice("tn1-priority-top", "training-null-1", Measure::Training, PointRule::One, once,
             "Which participant has the highest priority for Prize B?", kNameOptions, "Theresa");
    b.choice("tn1-ranking-top", "training-null-1", Measure::Training, PointRule::One, once,
             "Which prize does Shirley rank second?", kPrizeOptions, "C");
    b.choice("tn2-own-priority", "training-null-2", Measure::Training, PointRule::One, once,
             "What is your position in the priority order of Prize C (1 is highest)?", kPositionOptions, "2");
    b.choice("tn2-ranking-last", "training-null-2", Measure::Training, PointRule::One, once,
             "Which prize does Ruth rank last?", kPrizeOptions, "B");
}

void add_mechanics_training(Builder& b, Treatment t, Direction d) {
    const std::string s(slug(t));
    const char* scen[] = {"scenario-1", "scenario-2", "scenario-3"};
    for (int round = 1; round <= kTrainingRounds; ++round) {
        std::string screen = "training-" + s + "-" + std::to_string(round);
        std::string prefix = "t" + s + "-" + std::to_string(round) + "-";
        const Market& m = b.market(scen[round - 1]);
        if (round == 1) {
            std::size_t steps = d == Direction::ParticipantProposing ? canonical_schedule(m).size()
                                                                     : canonical_schedule(others_of(m)).size();
            for (std::size_t k = 0; k < steps; ++k) {
                std::string prompt = k == 0 ? "Pair every proposer with its first choice."
                                            : "Solve conflict #" + std::to_string(k) + ".";
                auto& q = b.on_scenario(prefix + "step-" + std::to_string(k), screen, QuestionKind::GuiStep,
                                        PointRule::One, AttemptPolicy::ThreeThenReveal, prompt, scen[0]);
                q.direction = d;
                q.step = k;
            }
        } else {
            auto& q = b.on_scenario(prefix + "board", screen, QuestionKind::GuiFull, PointRule::FiveTwo,
                                    AttemptPolicy::ThreeThenReveal, "Carry out the whole calculation.",
                                    scen[round - 1]);
            q.direction = d;
        }
        if (d == Direction::PrizeProposingExcluding)
            b.on_scenario(prefix + "menu", screen, QuestionKind::MenuEntry, PointRule::One,
                          AttemptPolicy::UntilCorrect, "Which prizes are Obtainable for you?", scen[round - 1]);
        else
            b.on_scenario(prefix + "matching", screen, QuestionKind::AllocationEntry, PointRule::One,
                          AttemptPolicy::UntilCorrect, "Enter the prize each participant receives.",
                          scen[round - 1]);
        b.on_scenario(prefix + "prize", screen, QuestionKind::PrizeEntry, PointRule::One, AttemptPolicy::UntilCorrect,
                      "Which prize do you receive?", scen[round - 1]);
    }
}

void add_property_training(Builder& b, Treatment t) {
    const std::string s(slug(t));
    const auto m = Measure::Training;
    const auto one = PointRule::One;
    const auto until = AttemptPolicy::UntilCorrect;
    const auto P = Modality::Possible;
    const auto C = Modality::Certain;
    auto screen = [&](int r) { return "training-" + s + "-" + std::to_string(r); };
    auto id = [&](int r, const char* tail) { return "t" + s + "-" + std::to_string(r) + "-" + tail; };

    Observation o1 = observation_of(b.market("scenario-1"));
    if (t == Treatment::MenuSP)
        b.statement(id(1, "intro"), screen(1), m, one, until,
                    "The ranking you submit changes which prizes are Obtainable for you.", false);
    else
        b.statement(id(1, "intro"), screen(1), m, one, until,
                    "Ranking a prize higher than you truly rank it can get you a prize you like more.", false);
    b.statement(id(1, "insure"), screen(1), m, one, until,
                "Placing first a prize you are likely to get, rather than your favorite, protects you from ending "
                "up with a worse prize.",
                false);
    b.statement(id(1, "flip"), screen(1), m, one, until,
                "If your priority for your favorite prize is low, swapping your top two prizes can get you a "
                "better prize.",
                false);
    b.counterfactual(id(1, "cf-b-possible"), screen(1), m, one, until, o1, "ABCD", Prize::B, P);
    b.counterfactual(id(1, "cf-b-certain"), screen(1), m, one, until, o1, "ABCD", Prize::B, C);

    Observation o2 = observation_of(b.market("scenario-2"));
    b.counterfactual(id(2, "cf-d-possible"), screen(2), m, one, until, o2, "ADCB", Prize::D, P);
    b.counterfactual(id(2, "cf-a-certain"), screen(2), m, one, until, o2, "ACBD", Prize::A, C);
    b.existential(id(2, "ex-c-possible"), screen(2), m, one, until, o2, Prize::C, P);
    b.existential(id(2, "ex-b-certain"), screen(2), m, one, until, o2, Prize::B, C);

    Observation o3 = observation_of(b.market("scenario-3"));
    b.counterfactual(id(3, "cf-b-possible"), screen(3), m, one, until, o3, "CBDA", Prize::B, P);
    b.counterfactual(id(3, "cf-d-possible"), screen(3), m, one, until, o3, "DCBA", Prize::D, P);
    b.existential(id(3, "ex-a-possible"), screen(3), m, one, until, o3, Prize::A, P);
    b.existential(id(3, "ex-d-certain"), screen(3), m, one, until, o3, Prize::D, C);
}

void add_spu(Builder& b) {
    const auto a = Measure::Abstract;
    const auto two = PointRule::Two;
    const auto once = AttemptPolicy::SingleShot;
    const auto P = Modality::Possible;
    const auto C = Modality::Certain;
    Observation bacd_c{parse_ranking("BACD"), Prize::C};
    Observation abcd_b{parse_ranking("ABCD"), Prize::B};
    Observation dcba_b{parse_ranking("DCBA"), Prize::B};
    Observation cdab_a{parse_ranking("CDAB"), Prize::A};
    Observation bcad_b{parse_ranking("BCAD"), Prize::B};

    b.counterfactual("spu1-q1", "spu-1", a, two, once, bacd_c, "ABCD", Prize::A, P);
    b.counterfactual("spu1-q2", "spu-1", a, two, once, bacd_c, "ABCD", Prize::C, C);
    b.counterfactual("spu1-q3", "spu-1", a, two, once, abcd_b, "CABD", Prize::C, P);
    b.counterfactual("spu1-q4", "spu-1", a, two, once, abcd_b, "CABD", Prize::C, C);
    auto& att = b.choice("spu1-attention", "spu-1", Measure::Attention, PointRule::None, once,
                         "This question checks that you are reading carefully. Please select Prize D.",
                         kPrizeOptions, "D");
    att.kind = QuestionKind::Attention;

    b.existential("spu2-q1", "spu-2", a, two, once, abcd_b, Prize::D, P);
    b.existential("spu2-q2", "spu-2", a, two, once, abcd_b, Prize::D, C);
    b.existential("spu2-q3", "spu-2", a, two, once, abcd_b, Prize::A, P);
    b.counterfactual("spu2-q4", "spu-2", a, two, once, dcba_b, "BDCA", Prize::B, C);

    b.counterfactual("spu3-q1", "spu-3", a, two, once, cdab_a, "ACDB", Prize::A, C);
    b.counterfactual("spu3-q2", "spu-3", a, two, once, cdab_a, "BACD", Prize::B, P);
    b.counterfactual("spu3-q3", "spu-3", a, two, once, cdab_a, "DCBA", Prize::D, P);
    b.existential("spu3-q4", "spu-3", a, two, once, bcad_b, Prize::D, P);
    b.existential("spu3-q5", "spu-3", a, two, once, bcad_b, Prize::A, C);

    const auto p = Measure::Practical;
    b.statement("spu4-q1", "spu-4", p, two, once,
                "To earn as much as possible I may need to put the prize that pays me most somewhere other than "
                "first.",
                false);
    b.statement("spu4-q2", "spu-4", p, two, once,
                "Ranking the prizes from the one that pays most to the one that pays least always earns me the most "
                "I can get.",
                true);
    b.statement("spu4-q3", "spu-4", p, two, once,
                "When my priority for the best-paying prize is low, I earn more by moving that prize down my "
                "ranking.",
                false);
    b.statement("spu4-q4", "spu-4", p, two, once,
                "Putting first a prize I am unlikely to get can lower my earnings.", false);
    b.statement("spu4-q5", "spu-4", p, two, once,
                "How the computerized participants rank the prizes should change how I rank them.", false);
}

void add_exit(Builder& b) {
    const auto once = AttemptPolicy::SingleShot;
    auto cog = [&](const char* id, const char* prompt, const char* key) {
        auto& q = b.add(id, "exit", QuestionKind::Cognitive, Measure::Cognitive, PointRule::None, once, prompt);
        q.answer = key;
    };
    cog("exit-cog-1",
        "A pen and a notebook cost 1.10 together. The notebook costs 1.00 more than the pen. How many cents does "
        "the pen cost?",
        "5");
    cog("exit-cog-2",
        "Five printers take five minutes to print five posters. How many minutes would 100 printers take to print "
        "100 posters?",
        "5");
    cog("exit-cog-3",
        "Algae on a pond double in area every day and cover the whole pond after 48 days. After how many days did "
        "they cover half of it?",
        "47");
    cog("exit-cog-4",
        "A price is cut by 50% and the reduced price is then raised by 50%. By what percentage is the final price "
        "below the original?",
        "25");
    for (const char* field : {"age", "gender", "field-of-study", "comments"})
        b.add(std::string("exit-demo-") + field, "exit", QuestionKind::Demographic, Measure::None, PointRule::None,
              once, field);
}

}  // namespace

const QuestionBank& default_bank() {
    static const QuestionBank bank = [] {
        Builder b(training_scenarios());
        b.show("null-training-1", "scenario-1");
        b.show("null-training-2", "scenario-2");
        b.show("training-null-1", "scenario-3");
        b.show("training-null-2", "scenario-3");
        b.show("training-null-3", "scenario-1");
        for (Treatment t : {Treatment::TradDA, Treatment::MenuDA, Treatment::MenuSP, Treatment::TextbookSP})
            for (int r = 1; r <= kTrainingRounds; ++r)
                b.show("training-" + std::string(slug(t)) + "-" + std::to_string(r), "scenario-" + std::to_string(r));
        add_null_training(b);
        add_mechanics_training(b, Treatment::TradDA, Direction::ParticipantProposing);
        add_mechanics_training(b, Treatment::MenuDA, Direction::PrizeProposingExcluding);
        add_property_training(b, Treatment::MenuSP);
        add_property_training(b, Treatment::TextbookSP);
        add_spu(b);
        add_exit(b);
        return b.build();
    }();
    return bank;
}

}  // namespace dalab
