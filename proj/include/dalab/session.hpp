#pragma once

// Experiment session state machine.
//
// A session walks the treatment's screens in order (flow_screen_ids). Screens
// with questions are answered one question at a time; screens without
// questions are left with a "continue" response; real rounds take a
// ranking. Every accepted response appends one EventRecord, and a session
// can be rebuilt from its log with replay().
//
// Response (wire and in-process):
//   {"type": "continue"}
//   {"type": "answer", "question": "spu1-q1", "payload": {"answer": "Yes"}}
//   {"type": "ranking", "payload": {"ranking": ["A","B","C","D"]}}
// An optional "seq" names the sequence number the response expects to
// create; a mismatch is rejected as out of order.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dalab/bank.hpp"
#include "dalab/event.hpp"
#include "dalab/sampler.hpp"
#include "dalab/scoring.hpp"
#include "dalab/treatment.hpp"

namespace dalab {

/// A well-formed response that the session cannot accept in its current
/// position: wrong screen or question, completed question, finished session,
/// or an unexpected sequence number.
class OutOfOrder : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ScreenKind {
    Consent,
    NullDescription,
    NullTraining,
    TreatmentDescription,
    TrainingRound,
    RealRound,
    SpuScreen,
    Exit,
    End,
};

std::string_view to_string(ScreenKind k);
ScreenKind screen_kind_of(std::string_view screen_id);

struct ScreenSpec {
    std::string id;
    ScreenKind kind = ScreenKind::Consent;
    json payload;
};

json to_json(const ScreenSpec& s);

struct SessionConfig {
    std::string currency = "£";
    Cents bonus_budget = kDefaultBonusBudget;
    double r1 = 1.7;
    double r2 = 0.5;
    std::string bank_path;                 // empty: the shipped default bank
    std::map<std::string, double> weights;  // treatment slug -> assignment weight; empty: uniform
    std::string video_url;

    void validate() const;
    friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

json to_json(const SessionConfig& c);
SessionConfig session_config_from_json(const json& j);

/// Draws a treatment from the configured weights with Rng(seed, {1000}).
Treatment assign_treatment(const SessionConfig& config, std::uint64_t seed);

enum class QuestionStatus { Open, Correct, Revealed, Answered };
std::string_view to_string(QuestionStatus s);

struct Response {
    std::string type;
    std::optional<std::string> question;
    json payload;
    std::optional<std::uint64_t> seq;
};

Response response_from_json(const json& j);
json to_json(const Response& r);

struct SessionState {
    std::string id;
    Treatment treatment = Treatment::Null;
    std::uint64_t seed = 0;
    SessionConfig config;
    std::shared_ptr<const QuestionBank> bank;

    std::vector<std::string> screens;
    std::vector<RoundSpec> rounds;

    std::size_t screen_index = 0;
    std::size_t question_index = 0;
    std::map<std::string, int> attempts;
    std::map<std::string, QuestionStatus> status;
    int points = 0;
    std::vector<Cents> round_earnings;
    std::vector<Ranking> round_rankings;
    std::vector<Prize> round_prizes;
    std::vector<EventRecord> log;

    bool complete() const;
    Cents earnings() const;
    std::uint64_t next_seq() const { return log.size(); }
};

struct Feedback {
    std::uint64_t seq = 0;
    std::optional<bool> correct;
    int attempt = 0;
    int points = 0;
    json revealed;       // correct answer, shown after the final failed attempt
    std::string message;
    json detail;
    std::string next_screen;
};

json to_json(const Feedback& f);

/// Builds a session positioned at the first screen and appends its "created"
/// record. `id` defaults to a name derived from treatment and seed. Throws
/// InvalidInput for an invalid config or an unloadable bank.
SessionState create_session(Treatment treatment, const SessionConfig& config, std::uint64_t seed,
                            std::string id = {}, std::shared_ptr<const QuestionBank> bank = nullptr);

ScreenSpec current_screen(const SessionState& state);

/// Applies a response. Throws OutOfOrder or InvalidInput (MalformedResponse
/// for payloads of the wrong shape); on a throw the state is unchanged.
Feedback submit_response(SessionState& state, const Response& response);

const std::vector<EventRecord>& event_log(const SessionState& state);

/// Rebuilds a session from its log and checks that every regenerated record
/// matches the logged one (timestamps aside). Throws InvariantViolation on a
/// mismatch and InvalidInput on a log without a leading "created" record.
/// With `feedback`, also collects the feedback of every regenerated response.
SessionState replay(const std::vector<EventRecord>& log, std::shared_ptr<const QuestionBank> bank = nullptr,
                    std::vector<Feedback>* feedback = nullptr);

/// Timestamp-free summary used for equality checks between sessions.
json snapshot(const SessionState& state);

ScoreReport score(const SessionState& state);

/// Structured description text, keyed by content id ("consent",
/// "null-description", "description-<slug>"). Returns null for unknown ids.
json content(std::string_view content_id);

}  // namespace dalab
