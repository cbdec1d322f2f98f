#pragma once

// Behavioral analysis of session logs.
//
// Logs are replayed through the session engine before anything is measured,
// so a log that does not replay is rejected rather than analyzed.
//
// Standard errors:
//   mean of a bin          s / sqrt(n), s the sample standard deviation (n - 1); omitted when n < 2
//   fraction p of n        sqrt(p (1 - p) / n)
//   round-trend slope      OLS of the SF indicator on round number with the HC1
//                          heteroskedasticity-robust variance
//                          n / (n - 2) * sum((x_i - xbar)^2 e_i^2) / (sum((x_i - xbar)^2))^2

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dalab/session.hpp"

namespace dalab {

/// Position i holds the value rank (1 = highest) of the prize ranked i-th.
using StrategyPattern = std::array<int, kSize>;

StrategyPattern classify_pattern(const Ranking& ranking, const ValueProfile& values);
bool is_sf(const Ranking& ranking, const ValueProfile& values);
/// "[2,1,3,4]"
std::string to_string(const StrategyPattern& p);
/// Ranking that realizes `pattern` under `values` (inverse of classify_pattern).
Ranking ranking_for_pattern(const StrategyPattern& pattern, const ValueProfile& values);

struct RoundFlags {
    bool not_top_priority_at_best = false;  // Y is not first at the highest-valued prize
    bool lower_than_elsewhere = false;      // Y's priority there is strictly worse than at some other prize
    bool low_value_gap = false;             // best minus second-best value at or below the corpus median
    friend bool operator==(const RoundFlags&, const RoundFlags&) = default;
};

/// Best minus second-best value, in hundredths.
Cents value_gap(const ValueProfile& values);
/// Median of the gaps; the mean of the two middle values for an even count.
double median_gap(const std::vector<RoundSpec>& corpus);
RoundFlags round_condition_flags(const RoundSpec& round, double gap_median);
/// Two passes: the corpus median, then the flags of each round.
std::vector<RoundFlags> round_condition_flags(const std::vector<RoundSpec>& corpus);

struct ParticipantMetrics {
    std::string participant;
    Treatment treatment = Treatment::Null;
    std::string sample;
    double sf = 0;  // denominator 10
    double spu = 0;
    double abstract_score = 0;
    double practical = 0;
    double tr = 0;
    int cognitive = 0;
    int attention = 0;
    int points = 0;
    Cents earnings = 0;
};

struct RoundRecord {
    int round = 0;
    RoundSpec spec;
    Ranking ranking;
    Prize prize = Prize::A;
    StrategyPattern pattern{};
    bool sf = false;
};

struct ParticipantData {
    ParticipantMetrics metrics;
    std::vector<RoundRecord> rounds;
};

/// Replays `log` (throws as replay does) and measures the participant.
ParticipantData analyze_log(const std::vector<EventRecord>& log, std::shared_ptr<const QuestionBank> bank = nullptr);
/// Replays logs in parallel; the output keeps the input order.
std::vector<ParticipantData> analyze_logs(const std::vector<std::vector<EventRecord>>& logs,
                                          std::shared_ptr<const QuestionBank> bank = nullptr);
std::vector<ParticipantMetrics> aggregate_metrics(const std::vector<std::vector<EventRecord>>& logs,
                                                  std::shared_ptr<const QuestionBank> bank = nullptr);

std::vector<ParticipantMetrics> metrics_of(const std::vector<ParticipantData>& data);
std::vector<ParticipantMetrics> filter(const std::vector<ParticipantMetrics>& m, std::optional<Treatment> t);

struct MeanEstimate {
    std::size_t count = 0;
    std::optional<double> mean;
    std::optional<double> se;
};

MeanEstimate estimate_mean(const std::vector<double>& xs);

struct SpuBin {
    int correct = 0;  // questions answered correctly, 0..18
    double spu = 0;   // correct / 18
    MeanEstimate sf;
};

/// One row per attainable SP-U score (19 rows for the 18-question test).
std::vector<SpuBin> conditional_sf_by_spu(const std::vector<ParticipantMetrics>& m, int questions = 18);

struct ThresholdSplit {
    MeanEstimate below;  // spu < threshold
    MeanEstimate above;  // spu >= threshold
};

ThresholdSplit sf_by_spu_threshold(const std::vector<ParticipantMetrics>& m, double threshold = 0.75);

/// Mean %SF by sub-score bin: Abstract (k / 13) or Practical (k / 5).
std::vector<SpuBin> conditional_sf_by_measure(const std::vector<ParticipantMetrics>& m, Measure measure);

struct Fraction {
    double value = 0;
    double se = 0;
};

/// A score counts as high when it is at least the threshold.
struct Quadrants {
    std::size_t n = 0;
    Fraction low_spu_low_sf;
    Fraction low_spu_high_sf;
    Fraction high_spu_low_sf;
    Fraction high_spu_high_sf;
};

Quadrants quadrant_fractions(const std::vector<ParticipantMetrics>& m, double threshold = 0.75);

/// Relative frequency of each observed pattern over all rounds.
std::map<StrategyPattern, double> pattern_histogram(const std::vector<ParticipantData>& data);
std::map<StrategyPattern, std::size_t> pattern_counts(const std::vector<ParticipantData>& data);

struct Trend {
    std::size_t n = 0;
    double intercept = 0;
    double slope = 0;
    double se = 0;
};

Trend ols_trend(const std::vector<double>& x, const std::vector<double>& y);
/// Per treatment SF-on-round regression over every round of every participant;
/// nullopt key pools all treatments.
std::map<std::optional<Treatment>, Trend> sf_round_trend(const std::vector<ParticipantData>& data);

struct ConditionSf {
    MeanEstimate when_true;
    MeanEstimate when_false;
};

/// Mean SF indicator over rounds split by each flag (pooled gap median).
std::array<ConditionSf, 3> sf_by_round_condition(const std::vector<ParticipantData>& data);

// CSV tables. Column schemas are listed in the README.
std::string participants_csv(const std::vector<ParticipantData>& data);
std::string rounds_csv(const std::vector<ParticipantData>& data);
std::string sf_by_spu_csv(const std::vector<ParticipantMetrics>& m);
std::string quadrants_csv(const std::vector<ParticipantMetrics>& m, double threshold = 0.75);
std::string patterns_csv(const std::vector<ParticipantData>& data);
std::string trend_csv(const std::vector<ParticipantData>& data);

std::string markdown_report(const std::vector<ParticipantData>& data);

}  // namespace dalab
