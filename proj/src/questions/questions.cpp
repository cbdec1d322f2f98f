#include "dalab/questions.hpp"

#include <algorithm>

namespace dalab {

std::string_view to_string(Modality m) { return m == Modality::Possible ? "possible" : "certain"; }

Modality modality_from_string(std::string_view s) {
    if (s == "possible") return Modality::Possible;
    if (s == "certain") return Modality::Certain;
    throw InvalidInput("unknown modality '" + std::string(s) + "'");
}

std::vector<Menu> consistent_menus(const Observation& obs) {
    std::vector<Menu> out;
    for (unsigned bits = 1; bits < 16; ++bits) {
        Menu m = Menu::from_bits(bits);
        if (menu_best(m, obs.submitted) == obs.received) out.push_back(m);
    }
    return out;
}

PrizeSet counterfactual_outcomes(const Observation& obs, const Ranking& alternative) {
    PrizeSet out;
    for (const Menu& m : consistent_menus(obs)) out.insert(menu_best(m, alternative));
    return out;
}

bool grade_counterfactual(const CounterfactualQuery& q) {
    PrizeSet outcomes = counterfactual_outcomes(q.observation, q.alternative);
    if (q.modality == Modality::Possible) return outcomes.contains(q.target);
    return outcomes == PrizeSet{q.target};
}

bool grade_existential(const ExistentialQuery& q) {
    auto menus = consistent_menus(q.observation);
    auto has_target = [&](const Menu& m) { return m.contains(q.target); };
    if (q.modality == Modality::Possible) return std::any_of(menus.begin(), menus.end(), has_target);
    return std::all_of(menus.begin(), menus.end(), has_target);
}

}  // namespace dalab
