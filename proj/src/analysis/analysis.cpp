#include "dalab/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <thread>

namespace dalab {

StrategyPattern classify_pattern(const Ranking& ranking, const ValueProfile& values) {
    StrategyPattern p{};
    for (std::size_t i = 0; i < kSize; ++i) p[i] = values.value_rank(ranking.at(i));
    return p;
}

bool is_sf(const Ranking& ranking, const ValueProfile& values) {
    return classify_pattern(ranking, values) == StrategyPattern{1, 2, 3, 4};
}

std::string to_string(const StrategyPattern& p) {
    std::string s = "[";
    for (std::size_t i = 0; i < kSize; ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + "]";
}

Ranking ranking_for_pattern(const StrategyPattern& pattern, const ValueProfile& values) {
    Ranking order = values.by_value();
    std::array<Prize, kSize> items{};
    for (std::size_t i = 0; i < kSize; ++i) {
        if (pattern[i] < 1 || pattern[i] > 4) throw InvalidInput("pattern entries must lie in 1..4");
        items[i] = order.at(static_cast<std::size_t>(pattern[i] - 1));
    }
    return Ranking(items);
}

Cents value_gap(const ValueProfile& values) {
    Ranking order = values.by_value();
    return values.value(order.at(0)) - values.value(order.at(1));
}

double median_gap(const std::vector<RoundSpec>& corpus) {
    if (corpus.empty()) return 0;
    std::vector<Cents> gaps;
    for (const auto& r : corpus) gaps.push_back(value_gap(r.values));
    std::sort(gaps.begin(), gaps.end());
    std::size_t n = gaps.size();
    return n % 2 ? static_cast<double>(gaps[n / 2]) : (gaps[n / 2 - 1] + gaps[n / 2]) / 2.0;
}

RoundFlags round_condition_flags(const RoundSpec& round, double gap_median) {
    RoundFlags f;
    Prize best = round.values.best();
    std::size_t at_best = round.priorities[index(best)].position(Agent::Y);
    f.not_top_priority_at_best = at_best != 0;
    for (Prize p : kPrizes)
        if (p != best && round.priorities[index(p)].position(Agent::Y) < at_best) f.lower_than_elsewhere = true;
    f.low_value_gap = static_cast<double>(value_gap(round.values)) <= gap_median;
    return f;
}

std::vector<RoundFlags> round_condition_flags(const std::vector<RoundSpec>& corpus) {
    double med = median_gap(corpus);
    std::vector<RoundFlags> out;
    out.reserve(corpus.size());
    for (const auto& r : corpus) out.push_back(round_condition_flags(r, med));
    return out;
}

ParticipantData analyze_log(const std::vector<EventRecord>& log, std::shared_ptr<const QuestionBank> bank) {
    SessionState s = replay(log, std::move(bank));
    ScoreReport r = score(s);
    ParticipantData d;
    auto& m = d.metrics;
    m.participant = s.id;
    m.treatment = s.treatment;
    m.spu = r.spu;
    m.abstract_score = r.abstract_score;
    m.practical = r.practical;
    m.tr = r.tr;
    m.cognitive = r.cognitive;
    m.attention = r.attention;
    m.points = s.points;
    m.earnings = s.earnings();
    int sf = 0;
    for (std::size_t i = 0; i < s.round_rankings.size(); ++i) {
        RoundRecord rr;
        rr.round = static_cast<int>(i) + 1;
        rr.spec = s.rounds[i];
        rr.ranking = s.round_rankings[i];
        rr.prize = s.round_prizes[i];
        rr.pattern = classify_pattern(rr.ranking, rr.spec.values);
        rr.sf = rr.pattern == StrategyPattern{1, 2, 3, 4};
        sf += rr.sf;
        d.rounds.push_back(std::move(rr));
    }
    m.sf = sf / static_cast<double>(kRealRounds);
    return d;
}

std::vector<ParticipantData> analyze_logs(const std::vector<std::vector<EventRecord>>& logs,
                                          std::shared_ptr<const QuestionBank> bank) {
    std::vector<ParticipantData> out(logs.size());
    std::vector<std::exception_ptr> errors(logs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < logs.size(); i = next++) {
            try {
                out[i] = analyze_log(logs[i], bank);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::size_t threads = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), logs.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<ParticipantMetrics> metrics_of(const std::vector<ParticipantData>& data) {
    std::vector<ParticipantMetrics> out;
    out.reserve(data.size());
    for (const auto& d : data) out.push_back(d.metrics);
    return out;
}

std::vector<ParticipantMetrics> aggregate_metrics(const std::vector<std::vector<EventRecord>>& logs,
                                                  std::shared_ptr<const QuestionBank> bank) {
    return metrics_of(analyze_logs(logs, std::move(bank)));
}

std::vector<ParticipantMetrics> filter(const std::vector<ParticipantMetrics>& m, std::optional<Treatment> t) {
    if (!t) return m;
    std::vector<ParticipantMetrics> out;
    for (const auto& x : m)
        if (x.treatment == *t) out.push_back(x);
    return out;
}

MeanEstimate estimate_mean(const std::vector<double>& xs) {
    MeanEstimate e;
    e.count = xs.size();
    if (xs.empty()) return e;
    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    e.mean = mean;
    if (xs.size() >= 2) {
        double ss = 0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        e.se = std::sqrt(ss / static_cast<double>(xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
    }
    return e;
}

namespace {

std::vector<SpuBin> binned(const std::vector<ParticipantMetrics>& m, int questions,
                           double ParticipantMetrics::*score) {
    std::vector<std::vector<double>> sf(static_cast<std::size_t>(questions) + 1);
    for (const auto& x : m) {
        long k = std::lround(x.*score * questions);
        sf[static_cast<std::size_t>(std::clamp<long>(k, 0, questions))].push_back(x.sf);
    }
    std::vector<SpuBin> out;
    for (int k = 0; k <= questions; ++k)
        out.push_back({k, static_cast<double>(k) / questions, estimate_mean(sf[static_cast<std::size_t>(k)])});
    return out;
}

Fraction fraction(std::size_t hits, std::size_t n) {
    if (n == 0) return {};
    double p = static_cast<double>(hits) / static_cast<double>(n);
    return {p, std::sqrt(p * (1 - p) / static_cast<double>(n))};
}

}  // namespace

std::vector<SpuBin> conditional_sf_by_spu(const std::vector<ParticipantMetrics>& m, int questions) {
    return binned(m, questions, &ParticipantMetrics::spu);
}

std::vector<SpuBin> conditional_sf_by_measure(const std::vector<ParticipantMetrics>& m, Measure measure) {
    if (measure == Measure::Abstract) return binned(m, 13, &ParticipantMetrics::abstract_score);
    if (measure == Measure::Practical) return binned(m, 5, &ParticipantMetrics::practical);
    throw InvalidInput("binning needs the abstract or practical measure");
}

ThresholdSplit sf_by_spu_threshold(const std::vector<ParticipantMetrics>& m, double threshold) {
    std::vector<double> lo, hi;
    for (const auto& x : m) (x.spu >= threshold ? hi : lo).push_back(x.sf);
    return {estimate_mean(lo), estimate_mean(hi)};
}

Quadrants quadrant_fractions(const std::vector<ParticipantMetrics>& m, double threshold) {
    std::array<std::size_t, 4> c{};
    for (const auto& x : m) c[(x.spu >= threshold ? 2 : 0) + (x.sf >= threshold ? 1 : 0)]++;
    Quadrants q;
    q.n = m.size();
    q.low_spu_low_sf = fraction(c[0], q.n);
    q.low_spu_high_sf = fraction(c[1], q.n);
    q.high_spu_low_sf = fraction(c[2], q.n);
    q.high_spu_high_sf = fraction(c[3], q.n);
    return q;
}

std::map<StrategyPattern, std::size_t> pattern_counts(const std::vector<ParticipantData>& data) {
    std::map<StrategyPattern, std::size_t> out;
    for (const auto& d : data)
        for (const auto& r : d.rounds) out[r.pattern]++;
    return out;
}

std::map<StrategyPattern, double> pattern_histogram(const std::vector<ParticipantData>& data) {
    auto counts = pattern_counts(data);
    std::size_t total = 0;
    for (const auto& [p, c] : counts) total += c;
    std::map<StrategyPattern, double> out;
    for (const auto& [p, c] : counts) out[p] = static_cast<double>(c) / static_cast<double>(total);
    return out;
}

Trend ols_trend(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw InvalidInput("regression needs equal-length vectors");
    Trend t;
    t.n = x.size();
    if (t.n < 3) return t;
    double n = static_cast<double>(t.n);
    double xbar = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ybar = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < t.n; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
    }
    if (sxx == 0) return t;
    t.slope = sxy / sxx;
    t.intercept = ybar - t.slope * xbar;
    double meat = 0;
    for (std::size_t i = 0; i < t.n; ++i) {
        double e = y[i] - t.intercept - t.slope * x[i];
        meat += (x[i] - xbar) * (x[i] - xbar) * e * e;
    }
    t.se = std::sqrt(n / (n - 2) * meat / (sxx * sxx));
    return t;
}

std::map<std::optional<Treatment>, Trend> sf_round_trend(const std::vector<ParticipantData>& data) {
    std::map<std::optional<Treatment>, std::pair<std::vector<double>, std::vector<double>>> xy;
    for (const auto& d : data)
        for (const auto& r : d.rounds)
            for (std::optional<Treatment> key : {std::optional<Treatment>(), std::optional(d.metrics.treatment)}) {
                xy[key].first.push_back(r.round);
                xy[key].second.push_back(r.sf ? 1.0 : 0.0);
            }
    std::map<std::optional<Treatment>, Trend> out;
    for (const auto& [k, v] : xy) out[k] = ols_trend(v.first, v.second);
    return out;
}

std::array<ConditionSf, 3> sf_by_round_condition(const std::vector<ParticipantData>& data) {
    std::vector<RoundSpec> corpus;
    std::vector<double> sf;
    for (const auto& d : data)
        for (const auto& r : d.rounds) {
            corpus.push_back(r.spec);
            sf.push_back(r.sf ? 1.0 : 0.0);
        }
    auto flags = round_condition_flags(corpus);
    std::array<std::array<std::vector<double>, 2>, 3> split;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        split[0][flags[i].not_top_priority_at_best].push_back(sf[i]);
        split[1][flags[i].lower_than_elsewhere].push_back(sf[i]);
        split[2][flags[i].low_value_gap].push_back(sf[i]);
    }
    std::array<ConditionSf, 3> out;
    for (std::size_t f = 0; f < 3; ++f) out[f] = {estimate_mean(split[f][1]), estimate_mean(split[f][0])};
    return out;
}

namespace {

std::string num(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

std::string opt(const std::optional<double>& x) { return x ? num(*x) : ""; }

std::vector<std::optional<Treatment>> groups() {
    std::vector<std::optional<Treatment>> g{std::nullopt};
    for (Treatment t : kTreatments) g.push_back(t);
    return g;
}

std::string group_name(const std::optional<Treatment>& t) { return t ? std::string(to_string(*t)) : "all"; }

}  // namespace

std::string participants_csv(const std::vector<ParticipantData>& data) {
    std::ostringstream os;
    os << "participant,treatment,sample,sf,spu,abstract,practical,tr,cognitive,attention,points,earnings,ebrd\n";
    for (const auto& d : data) {
        const auto& m = d.metrics;
        os << m.participant << ',' << to_string(m.treatment) << ',' << m.sample << ',' << num(m.sf) << ','
           << num(m.spu) << ',' << num(m.abstract_score) << ',' << num(m.practical) << ',' << num(m.tr) << ','
           << m.cognitive << ',' << m.attention << ',' << m.points << ',' << m.earnings << ",unclassified\n";
    }
    return os.str();
}

std::string rounds_csv(const std::vector<ParticipantData>& data) {
    std::vector<RoundSpec> corpus;
    for (const auto& d : data)
        for (const auto& r : d.rounds) corpus.push_back(r.spec);
    auto flags = round_condition_flags(corpus);
    std::ostringstream os;
    os << "participant,treatment,round,ranking,pattern,sf,not_top_priority_at_best,lower_than_elsewhere,"
          "low_value_gap,value_gap,prize,value\n";
    std::size_t i = 0;
    for (const auto& d : data)
        for (const auto& r : d.rounds) {
            const auto& f = flags[i++];
            os << d.metrics.participant << ',' << to_string(d.metrics.treatment) << ',' << r.round << ','
               << to_string(r.ranking, '-') << ",\"" << to_string(r.pattern) << "\"," << r.sf << ','
               << f.not_top_priority_at_best << ',' << f.lower_than_elsewhere << ',' << f.low_value_gap << ','
               << value_gap(r.spec.values) << ',' << label(r.prize) << ',' << r.spec.values.value(r.prize) << '\n';
        }
    return os.str();
}

std::string sf_by_spu_csv(const std::vector<ParticipantMetrics>& m) {
    std::ostringstream os;
    os << "treatment,correct,spu,count,mean_sf,se\n";
    for (const auto& g : groups())
        for (const auto& b : conditional_sf_by_spu(filter(m, g)))
            os << group_name(g) << ',' << b.correct << ',' << num(b.spu) << ',' << b.sf.count << ','
               << opt(b.sf.mean) << ',' << opt(b.sf.se) << '\n';
    return os.str();
}

std::string quadrants_csv(const std::vector<ParticipantMetrics>& m, double threshold) {
    std::ostringstream os;
    os << "treatment,quadrant,fraction,se,n\n";
    for (const auto& g : groups()) {
        Quadrants q = quadrant_fractions(filter(m, g), threshold);
        std::pair<const char*, Fraction> rows[] = {{"low_spu_low_sf", q.low_spu_low_sf},
                                                   {"low_spu_high_sf", q.low_spu_high_sf},
                                                   {"high_spu_low_sf", q.high_spu_low_sf},
                                                   {"high_spu_high_sf", q.high_spu_high_sf}};
        for (const auto& [name, f] : rows)
            os << group_name(g) << ',' << name << ',' << num(f.value) << ',' << num(f.se) << ',' << q.n << '\n';
    }
    return os.str();
}

std::string patterns_csv(const std::vector<ParticipantData>& data) {
    auto counts = pattern_counts(data);
    auto freq = pattern_histogram(data);
    std::vector<std::pair<StrategyPattern, std::size_t>> rows(counts.begin(), counts.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::ostringstream os;
    os << "pattern,count,frequency\n";
    for (const auto& [p, c] : rows) os << '"' << to_string(p) << "\"," << c << ',' << num(freq[p]) << '\n';
    return os.str();
}

std::string trend_csv(const std::vector<ParticipantData>& data) {
    std::ostringstream os;
    os << "treatment,n,intercept,slope,se\n";
    auto trends = sf_round_trend(data);
    for (const auto& g : groups()) {
        auto it = trends.find(g);
        if (it == trends.end()) continue;
        const Trend& t = it->second;
        os << group_name(g) << ',' << t.n << ',' << num(t.intercept) << ',' << num(t.slope) << ',' << num(t.se)
           << '\n';
    }
    return os.str();
}

std::string markdown_report(const std::vector<ParticipantData>& data) {
    auto m = metrics_of(data);
    std::ostringstream os;
    os << std::fixed << std::setprecision(3);
    os << "# Analysis report\n\n" << m.size() << " participants.\n\n";
    os << "## Means by treatment\n\n| treatment | n | %SF | %SP-U | Abstract | Practical | %TR |\n"
       << "|---|---|---|---|---|---|---|\n";
    for (const auto& g : groups()) {
        auto sub = filter(m, g);
        if (sub.empty()) continue;
        auto mean = [&](double ParticipantMetrics::*f) {
            std::vector<double> xs;
            for (const auto& x : sub) xs.push_back(x.*f);
            return *estimate_mean(xs).mean;
        };
        os << "| " << group_name(g) << " | " << sub.size() << " | " << mean(&ParticipantMetrics::sf) << " | "
           << mean(&ParticipantMetrics::spu) << " | " << mean(&ParticipantMetrics::abstract_score) << " | "
           << mean(&ParticipantMetrics::practical) << " | " << mean(&ParticipantMetrics::tr) << " |\n";
    }
    ThresholdSplit split = sf_by_spu_threshold(m);
    auto est = [](const MeanEstimate& e) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(3);
        if (!e.mean) return std::string("n/a");
        s << *e.mean;
        if (e.se) s << " (SE " << *e.se << ")";
        s << ", n = " << e.count;
        return s.str();
    };
    os << "\n## %SF by %SP-U\n\n- %SP-U below 0.75: " << est(split.below) << "\n- %SP-U at least 0.75: "
       << est(split.above) << "\n";
    Quadrants q = quadrant_fractions(m);
    os << "\n## Quadrants at 0.75\n\n| | low %SF | high %SF |\n|---|---|---|\n"
       << "| low %SP-U | " << q.low_spu_low_sf.value << " | " << q.low_spu_high_sf.value << " |\n"
       << "| high %SP-U | " << q.high_spu_low_sf.value << " | " << q.high_spu_high_sf.value << " |\n";
    os << "\n## Most common patterns\n\n";
    auto counts = pattern_counts(data);
    std::vector<std::pair<StrategyPattern, std::size_t>> rows(counts.begin(), counts.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    auto freq = pattern_histogram(data);
    for (std::size_t i = 0; i < rows.size() && i < 5; ++i)
        os << "- " << to_string(rows[i].first) << ": " << freq[rows[i].first] << "\n";
    os << "\n## SF trend over rounds\n\n| treatment | slope | SE |\n|---|---|---|\n";
    auto trends = sf_round_trend(data);
    for (const auto& g : groups()) {
        auto it = trends.find(g);
        if (it != trends.end()) os << "| " << group_name(g) << " | " << it->second.slope << " | " << it->second.se << " |\n";
    }
    auto cond = sf_by_round_condition(data);
    const char* names[] = {"not top priority at best prize", "priority at best prize below another",
                           "low value gap"};
    os << "\n## %SF by round condition\n\n| condition | true | false |\n|---|---|---|\n";
    for (std::size_t f = 0; f < 3; ++f)
        os << "| " << names[f] << " | " << est(cond[f].when_true) << " | " << est(cond[f].when_false) << " |\n";
    return os.str();
}

}  // namespace dalab
