#include "dalab/verify.hpp"

#include <chrono>
#include <sstream>

#include "dalab/json_io.hpp"
#include "dalab/questions.hpp"

namespace dalab {

namespace {

template <class T>
StrictOrder<T> random_order(Rng& rng) {
    std::array<T, kSize> items{T{0}, T{1}, T{2}, T{3}};
    rng.shuffle(std::span<T>(items));
    return StrictOrder<T>(items);
}

// Runs check(i) for i < n, timing the loop and keeping the first failure.
template <class F>
SuiteResult run_suite(std::string name, std::size_t n, std::uint64_t seed, F check) {
    SuiteResult r;
    r.name = std::move(name);
    auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < n; ++i) {
        Market m = suite_market(seed, i);
        ++r.checked;
        if (check(m, i)) {
            ++r.passed;
        } else if (r.first_failure.empty()) {
            json j = m;
            r.first_failure = j.dump();
        }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace

Market random_market(Rng& rng) {
    Market m;
    for (auto& r : m.rankings) r = random_order<Prize>(rng);
    for (auto& p : m.priorities) p = random_order<Agent>(rng);
    return m;
}

Market suite_market(std::uint64_t seed, std::size_t i) {
    Rng rng(seed, {0x6d6b, static_cast<std::uint64_t>(i)});
    return random_market(rng);
}

std::string SuiteResult::line() const {
    std::ostringstream os;
    os << name << ": " << passed << '/' << checked;
    return os.str();
}

SuiteResult verify_menu_equivalence(std::size_t n, std::uint64_t seed) {
    return run_suite("menu/DA equivalence", n, seed, [](const Market& m, std::size_t) {
        OthersMarket o = others_of(m);
        Menu menu = compute_menu(o);
        Prize y = run_da_participant_proposing(m).matching.prize_of(Agent::Y);
        return menu == achievable_set_bruteforce(o) && y == menu_best(menu, m.ranking(Agent::Y));
    });
}

SuiteResult verify_strategyproofness(std::size_t n, std::uint64_t seed) {
    return run_suite("strategyproofness", n, seed, [](const Market& m, std::size_t) {
        OthersMarket o = others_of(m);
        const Ranking& truth = m.ranking(Agent::Y);
        Prize honest = run_da_participant_proposing(m).matching.prize_of(Agent::Y);
        for (const auto& lie : all_rankings())
            if (truth.prefers(run_da_participant_proposing(o.with_human(lie)).matching.prize_of(Agent::Y), honest))
                return false;
        return true;
    });
}

SuiteResult verify_proposal_identity(std::size_t n, std::uint64_t seed, std::size_t orders) {
    return run_suite("proposal-count identity and order invariance", n, seed, [&](const Market& m, std::size_t i) {
        OthersMarket o = others_of(m);
        auto da = run_da_participant_proposing(m);
        auto temp = run_da_prize_proposing_excluding(o);
        if (da.trace.total() != proposal_count_identity(da.matching, m)) return false;
        if (temp.trace.total() != proposal_count_identity(temp.allocation, o)) return false;
        for (std::size_t k = 0; k < orders; ++k) {
            Rng rng(seed, {0x6f72, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k)});
            auto pick = [&](const std::vector<std::uint8_t>& free) { return free[rng.below(free.size())]; };
            auto d = run_da_participant_proposing(m, pick);
            auto t = run_da_prize_proposing_excluding(o, pick);
            if (!(d.matching == da.matching) || d.trace.total() != da.trace.total()) return false;
            if (!(t.allocation == temp.allocation) || t.trace.total() != temp.trace.total()) return false;
        }
        return true;
    });
}

SuiteResult verify_counterfactual_soundness(std::size_t n, std::uint64_t seed) {
    return run_suite("counterfactual grader soundness", n, seed, [&](const Market& m, std::size_t i) {
        Rng rng(seed, {0x6366, static_cast<std::uint64_t>(i)});
        Observation obs{m.ranking(Agent::Y), run_da_participant_proposing(m).matching.prize_of(Agent::Y)};
        Ranking alt = random_order<Prize>(rng);
        Prize realized = run_da_participant_proposing(others_of(m).with_human(alt)).matching.prize_of(Agent::Y);
        if (!grade_counterfactual({obs, alt, realized, Modality::Possible})) return false;
        for (Prize t : kPrizes)
            if (grade_counterfactual({obs, alt, t, Modality::Certain}) &&
                !grade_counterfactual({obs, alt, t, Modality::Possible}))
                return false;
        return true;
    });
}

SuiteResult verify_certain_implies_possible() {
    SuiteResult r;
    r.name = "certain implies possible";
    auto start = std::chrono::steady_clock::now();
    for (const auto& submitted : all_rankings())
        for (Prize received : kPrizes) {
            Observation obs{submitted, received};
            for (Prize t : kPrizes) {
                ++r.checked;
                r.passed +=
                    !grade_existential({obs, t, Modality::Certain}) || grade_existential({obs, t, Modality::Possible});
                for (const auto& alt : all_rankings()) {
                    ++r.checked;
                    r.passed += !grade_counterfactual({obs, alt, t, Modality::Certain}) ||
                                grade_counterfactual({obs, alt, t, Modality::Possible});
                }
            }
        }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<SuiteResult> verify_all(std::size_t n, std::uint64_t seed) {
    return {verify_menu_equivalence(n, seed), verify_strategyproofness(n, seed), verify_proposal_identity(n, seed),
            verify_counterfactual_soundness(n, seed), verify_certain_implies_possible()};
}

}  // namespace dalab
