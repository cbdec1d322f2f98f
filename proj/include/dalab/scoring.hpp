#pragma once

// Score reports recomputed from an event log.
//
// Points per answer follow the question's point rule and attempt number
// (points_for). Fractions count first-attempt correctness:
//   %TR        training-measure questions
//   Abstract   the bank's abstract SP-U questions
//   Practical  the bank's practical SP-U questions
//   %SP-U      (n_abstract * Abstract + n_practical * Practical) / (n_abstract + n_practical)
// Denominators are the questions of the session's treatment flow when the
// log starts with a "created" record, otherwise the questions that appear
// in the log. Unanswered questions count as incorrect.
//
// bonus = budget * earned / maximum, rounded half-up to a hundredth.

#include <optional>
#include <vector>

#include "dalab/bank.hpp"
#include "dalab/event.hpp"
#include "dalab/sampler.hpp"

namespace dalab {

inline constexpr Cents kDefaultBonusBudget = 450;

struct ScoreReport {
    double tr = 0;
    double spu = 0;
    double abstract_score = 0;
    double practical = 0;
    int points_earned = 0;
    int points_max = 0;
    Cents bonus = 0;
    int cognitive = 0;  // 0..4
    int attention = 0;  // 0..2

    friend bool operator==(const ScoreReport&, const ScoreReport&) = default;
};

/// Throws InvalidInput on an unknown question id, an attempt after a
/// correct answer, attempts out of sequence, or more attempts than the
/// question's policy allows.
ScoreReport score_event_log(const std::vector<EventRecord>& events, const QuestionBank& bank,
                            Cents bonus_budget = kDefaultBonusBudget);

json to_json(const ScoreReport& r);

/// Half-up rounding of budget * earned / maximum; 0 when maximum is 0.
Cents bonus_amount(Cents budget, int earned, int maximum);

}  // namespace dalab
