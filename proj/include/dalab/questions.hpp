#pragma once

// Grading of strategyproofness questions from the participant's own
// information: the ranking they submitted and the prize they received.
//
// The mechanism awards the best element, under the submitted ranking, of a
// menu that does not depend on that ranking. So an observation (L, x) is
// consistent with exactly those menus M for which menu_best(M, L) = x:
// M contains x and nothing L ranks above x. Every counterfactual question
// is answered by quantifying over those menus.

#include <vector>

#include "dalab/da.hpp"
#include "dalab/market.hpp"

namespace dalab {

enum class Modality { Possible, Certain };

std::string_view to_string(Modality m);
Modality modality_from_string(std::string_view s);

struct Observation {
    Ranking submitted;
    Prize received = Prize::A;
    friend bool operator==(const Observation&, const Observation&) = default;
};

/// "Had you submitted `alternative`, is it possible/certain you would have
/// received `target`?"
struct CounterfactualQuery {
    Observation observation;
    Ranking alternative;
    Prize target = Prize::A;
    Modality modality = Modality::Possible;
};

/// "Is there a ranking that would have possibly/certainly given you `target`?"
struct ExistentialQuery {
    Observation observation;
    Prize target = Prize::A;
    Modality modality = Modality::Possible;
};

/// All nonempty menus M with menu_best(M, obs.submitted) == obs.received,
/// ordered by bit pattern.
std::vector<Menu> consistent_menus(const Observation& obs);

/// { menu_best(M, alternative) : M consistent with obs }.
PrizeSet counterfactual_outcomes(const Observation& obs, const Ranking& alternative);

bool grade_counterfactual(const CounterfactualQuery& q);
bool grade_existential(const ExistentialQuery& q);

}  // namespace dalab
