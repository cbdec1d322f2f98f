#pragma once

// Question bank: every scored or recorded question of a session, the
// training scenarios they refer to, and the grader that checks a response
// against a question.
//
// File format (JSON):
//   {"schema_version": 1,
//    "scenarios": [{"id": "scenario-1", "market": Market}, ...],
//    "screen_scenarios": {"null-training-1": "scenario-1", ...},
//    "questions": [Question, ...]}
//
// A question record:
//   {"id", "screen", "kind", "measure", "points", "attempts", "prompt",
//    "options": [...], "answer": "...", "params": {...}, "reconstructed": bool}
//
//   kind      counterfactual | existential | practical-statement | info |
//             attention | cognitive | demographic | gui-step | gui-full |
//             menu-entry | allocation-entry | prize-entry
//   measure   none | training | abstract | practical | attention | cognitive
//   points    none | 1 | 2 | 5/2   (5/2: 5 on the first attempt, 2 on the second)
//   attempts  single-shot | until-correct | three-then-reveal
//   params    counterfactual: submitted, received, alternative, target, modality
//             existential:    submitted, received, target, modality
//             gui-*, menu-entry, allocation-entry, prize-entry: scenario,
//             direction (gui-* only), step (gui-step only)
//
// "answer" may be omitted for counterfactual and existential questions; it
// is derived on load. A stored answer that disagrees with the derivation is
// rejected.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dalab/json_io.hpp"
#include "dalab/questions.hpp"
#include "dalab/treatment.hpp"

namespace dalab {

/// A response that does not have the shape its question expects.
class MalformedResponse : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

enum class QuestionKind {
    Counterfactual,
    Existential,
    PracticalStatement,
    Info,
    Attention,
    Cognitive,
    Demographic,
    GuiStep,
    GuiFull,
    MenuEntry,
    AllocationEntry,
    PrizeEntry,
};

enum class Measure { None, Training, Abstract, Practical, Attention, Cognitive };
enum class PointRule { None, One, Two, FiveTwo };
enum class AttemptPolicy { SingleShot, UntilCorrect, ThreeThenReveal };

std::string_view to_string(QuestionKind k);
std::string_view to_string(Measure m);
std::string_view to_string(PointRule p);
std::string_view to_string(AttemptPolicy a);

/// Points for a correct answer on attempt `attempt` (1-based).
int points_for(PointRule rule, int attempt);
int max_points(PointRule rule);

struct Question {
    std::string id;
    std::string screen;
    QuestionKind kind = QuestionKind::Info;
    Measure measure = Measure::None;
    PointRule points = PointRule::None;
    AttemptPolicy attempts = AttemptPolicy::SingleShot;
    std::string prompt;
    std::vector<std::string> options;
    std::string answer;

    std::optional<CounterfactualQuery> counterfactual;
    std::optional<ExistentialQuery> existential;
    std::string scenario;
    Direction direction = Direction::ParticipantProposing;
    std::optional<std::size_t> step;

    bool reconstructed = false;

    bool graded() const { return kind != QuestionKind::Demographic; }
};

struct Scenario {
    std::string id;
    Market market;  // includes Y's instructed ranking
};

struct Grade {
    std::optional<bool> correct;  // empty for ungraded questions
    json answer;                  // the correct answer, in response shape
};

class QuestionBank {
public:
    static constexpr int kSchemaVersion = 1;

    QuestionBank() = default;
    QuestionBank(std::vector<Scenario> scenarios, std::vector<Question> questions,
                 std::map<std::string, std::string, std::less<>> screen_scenarios = {});

    const std::vector<Question>& questions() const { return questions_; }
    const std::vector<Scenario>& scenarios() const { return scenarios_; }

    const Question& question(std::string_view id) const;
    bool contains(std::string_view id) const;
    const Scenario& scenario(std::string_view id) const;
    /// Scenario displayed on a training screen, if any.
    const Scenario* scenario_for_screen(std::string_view screen) const;
    const std::map<std::string, std::string, std::less<>>& screen_scenarios() const { return screen_scenarios_; }

    /// Questions shown on `screen`, in bank order.
    std::vector<const Question*> on_screen(std::string_view screen) const;
    /// Questions on any screen of the treatment's flow, in flow order.
    std::vector<const Question*> for_treatment(Treatment t) const;
    /// The 18 strategyproofness-understanding questions (abstract + practical).
    std::vector<const Question*> spu_questions() const;

    Grade grade(const Question& q, const json& response) const;
    /// The correct answer in response shape; null for ungraded questions.
    json expected(const Question& q) const;
    /// A well-formed response that grades as incorrect (any response for
    /// ungraded questions).
    json incorrect(const Question& q) const;

    json to_json() const;
    static QuestionBank from_json(const json& j);

private:
    void validate();

    std::vector<Scenario> scenarios_;
    std::vector<Question> questions_;
    std::map<std::string, std::string, std::less<>> screen_scenarios_;
    std::map<std::string, std::size_t, std::less<>> by_id_;
};

/// The bank shipped with the project (data/question_bank.json is an export).
const QuestionBank& default_bank();
QuestionBank load_bank(const std::string& path);

/// Answer key for a practical statement; `response` is the participant's
/// True (true) / False (false).
bool grade_practical(const QuestionBank& bank, std::string_view statement_id, bool response);

/// Mean over questions of 1 / option count. Throws InvalidInput if a
/// question has no options.
double random_benchmark(const std::vector<const Question*>& questions);

}  // namespace dalab
