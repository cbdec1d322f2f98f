#pragma once

// Seeded property suites over random markets. Shared by `dalab verify` and
// the acceptance binary.
//
// Market i of a suite is drawn from Rng(seed, {0x6d6b, i}): every ranking
// and priority order uniform and independent. Suites run with the same
// (n, seed) see the same markets.

#include <cstdint>
#include <string>
#include <vector>

#include "dalab/da.hpp"
#include "dalab/rng.hpp"

namespace dalab {

Market random_market(Rng& rng);
Market suite_market(std::uint64_t seed, std::size_t i);

struct SuiteResult {
    std::string name;
    std::size_t checked = 0;
    std::size_t passed = 0;
    double seconds = 0;
    std::string first_failure;  // JSON of the first failing market, if any

    bool ok() const { return checked == passed; }
    /// "menu/DA equivalence: 10000/10000"
    std::string line() const;
};

/// compute_menu of the prize-proposing allocation equals the brute-force
/// achievable set, and Y's DA prize is menu_best.
SuiteResult verify_menu_equivalence(std::size_t n, std::uint64_t seed);
/// No misreport gives Y a prize it truly prefers.
SuiteResult verify_strategyproofness(std::size_t n, std::uint64_t seed);
/// Both DA directions: `orders` random execution orders give the canonical
/// result, and every proposal count equals the sum-of-ranks identity.
SuiteResult verify_proposal_identity(std::size_t n, std::uint64_t seed, std::size_t orders = 4);
/// (market, observation, random alternative): the realized counterfactual
/// prize is graded possible, and certain implies possible for every target.
SuiteResult verify_counterfactual_soundness(std::size_t n, std::uint64_t seed);
/// Exhaustive over every observation, alternative and target.
SuiteResult verify_certain_implies_possible();

std::vector<SuiteResult> verify_all(std::size_t n, std::uint64_t seed);

}  // namespace dalab
