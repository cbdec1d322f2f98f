// dalab: command-line entry points for the DA lab engine.

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dalab/analysis.hpp"
#include "dalab/api.hpp"
#include "dalab/json_io.hpp"
#include "dalab/server.hpp"
#include "dalab/simulate.hpp"
#include "dalab/verify.hpp"

using namespace dalab;
namespace fs = std::filesystem;

namespace {

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    out << text;
    if (!out) throw InvalidInput("cannot write " + path);
}

std::vector<fs::path> log_files(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            for (const auto& e : fs::directory_iterator(in))
                if (e.path().extension() == ".jsonl") files.push_back(e.path());
        } else {
            files.emplace_back(in);
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

PopulationSpec preset(const std::string& name) {
    if (name == "planted-recovery") return planted_recovery_population();
    if (name == "planted-trend") return planted_trend_population(true);
    if (name == "planted-trend-iid") return planted_trend_population(false);
    PopulationSpec p;
    AgentType t;
    t.name = name;
    t.policy = ranking_policy_from_string(name);
    p.types.push_back(t);
    return p;
}

HttpServer* g_server = nullptr;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deferred-acceptance lab: markets, sessions, simulation and analysis"};
    app.require_subcommand(1);

    // sample-rounds
    auto* sample = app.add_subcommand("sample-rounds", "Write seeded real-round specs as JSONL");
    std::uint64_t seed = 0;
    std::size_t n = 10;
    double r1 = 1.7, r2 = 0.5;
    std::string out;
    sample->add_option("--seed", seed, "Session seed")->required();
    sample->add_option("--n", n, "Number of rounds")->capture_default_str();
    sample->add_option("--r1", r1, "Priority weight of the best prize")->capture_default_str();
    sample->add_option("--r2", r2, "Computerized ranking weight")->capture_default_str();
    sample->add_option("--out", out, "Output file (default stdout)");

    // run-da
    auto* run_da = app.add_subcommand("run-da", "Run participant-proposing DA on a market file");
    std::string market_path;
    bool as_json = false, trace = false;
    run_da->add_option("--market", market_path, "Market JSON")->required()->check(CLI::ExistingFile);
    run_da->add_flag("--json", as_json, "Print JSON");
    run_da->add_flag("--trace", trace, "Print every proposal");

    // menu
    auto* menu_cmd = app.add_subcommand("menu", "Compute Y's menu from the other agents' market");
    std::string others_path, ranking_text;
    menu_cmd->add_option("--others", others_path, "Market JSON (Y's ranking ignored)")
        ->required()
        ->check(CLI::ExistingFile);
    menu_cmd->add_option("--ranking", ranking_text, "Also print the best menu prize under this ranking");
    menu_cmd->add_flag("--json", as_json, "Print JSON");

    // grade-question
    auto* grade_cmd = app.add_subcommand("grade-question", "Grade one response against the question bank");
    std::string bank_path, question_id, response_text;
    grade_cmd->add_option("--bank", bank_path, "Question bank JSON (default built-in)")->check(CLI::ExistingFile);
    grade_cmd->add_option("--question", question_id, "Question id")->required();
    grade_cmd->add_option("--response", response_text, "Response payload JSON, e.g. '{\"answer\":\"Yes\"}'")
        ->required();

    // verify
    auto* verify = app.add_subcommand("verify", "Run the seeded property suites");
    std::uint64_t vseed = 7;
    std::size_t vn = 10000;
    verify->add_option("--n", vn, "Markets per suite")->capture_default_str();
    verify->add_option("--seed", vseed, "Suite seed")->capture_default_str();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Drive synthetic participants through sessions");
    std::string population_path, preset_name = "planted-recovery", out_dir;
    std::uint64_t sseed = 1;
    std::size_t sn = 500;
    auto* pop_opt =
        simulate->add_option("--population", population_path, "Population spec JSON")->check(CLI::ExistingFile);
    simulate
        ->add_option("--preset", preset_name,
                     "planted-recovery, planted-trend, planted-trend-iid, or a ranking policy name")
        ->excludes(pop_opt)
        ->capture_default_str();
    simulate->add_option("--n", sn, "Participants")->capture_default_str();
    simulate->add_option("--seed", sseed, "Population seed")->capture_default_str();
    simulate->add_option("--out", out_dir, "Directory for <session>.jsonl logs")->required();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Replay logs and write CSV tables and a report");
    std::vector<std::string> inputs;
    std::string sample_tag;
    analyze->add_option("logs", inputs, "Log files or directories")->required();
    analyze->add_option("--out", out_dir, "Directory for CSV tables and report.md");
    analyze->add_option("--sample", sample_tag, "Sample tag written to the participants table");
    analyze->add_option("--bank", bank_path, "Question bank JSON (default built-in)")->check(CLI::ExistingFile);

    // serve
    auto* serve = app.add_subcommand("serve", "Serve the session API over HTTP");
    std::string host = "127.0.0.1", log_dir, static_dir, config_path;
    int port = 8080;
    serve->add_option("--host", host)->capture_default_str();
    serve->add_option("--port", port)->capture_default_str();
    serve->add_option("--log-dir", log_dir, "Persist and reload session logs here");
    serve->add_option("--static", static_dir, "Static UI bundle directory")->check(CLI::ExistingDirectory);
    serve->add_option("--config", config_path, "Default session config JSON")->check(CLI::ExistingFile);
    serve->add_option("--bank", bank_path, "Question bank JSON (default built-in)")->check(CLI::ExistingFile);

    // bank
    auto* bank_cmd = app.add_subcommand("bank", "Question bank files");
    bank_cmd->require_subcommand(1);
    auto* bank_export = bank_cmd->add_subcommand("export", "Write the built-in bank as JSON");
    bank_export->add_option("--out", out, "Output file (default stdout)");
    auto* bank_check = bank_cmd->add_subcommand("check", "Validate a bank file");
    bank_check->add_option("file", bank_path)->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    auto load = [&]() -> std::shared_ptr<const QuestionBank> {
        if (bank_path.empty()) return nullptr;
        return std::make_shared<const QuestionBank>(load_bank(bank_path));
    };

    try {
        if (*sample) {
            std::ostringstream os;
            for (const auto& r : sample_rounds(SamplerConfig{r1, r2, seed}, n)) os << round_to_json(r).dump() << '\n';
            emit(out, os.str());
        } else if (*run_da) {
            Market m = guarded([&] { return read_json_file(market_path).get<Market>(); });
            auto da = run_da_participant_proposing(m);
            if (as_json) {
                json j = {{"matching", matching_to_json(da.matching)}, {"proposals", da.trace.total()}};
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << "matching: " << to_string(da.matching) << "\nproposals: " << da.trace.total() << '\n';
            }
            if (trace)
                for (const auto& e : da.trace.events)
                    std::cout << "step " << e.step << ": " << label(static_cast<Agent>(e.proposer)) << " -> "
                              << label(static_cast<Prize>(e.receiver)) << (e.accepted ? " (held)" : "") << '\n';
        } else if (*menu_cmd) {
            OthersMarket o = guarded([&] { return read_json_file(others_path).get<OthersMarket>(); });
            Menu menu = compute_menu(o);
            std::optional<Prize> best;
            if (!ranking_text.empty()) best = menu_best(menu, parse_ranking(ranking_text));
            if (as_json) {
                json j = {{"menu", static_cast<const PrizeSet&>(menu)}};
                if (best) j["best"] = *best;
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << to_string(menu) << '\n';
                if (best) std::cout << "best: " << label(*best) << '\n';
            }
        } else if (*grade_cmd) {
            auto owned = load();
            const QuestionBank& bank = owned ? *owned : default_bank();
            json response = guarded([&] { return json::parse(response_text); });
            Grade g = bank.grade(bank.question(question_id), response);
            json j = {{"question", question_id}, {"correct", g.correct ? json(*g.correct) : json()}};
            if (!g.answer.is_null()) j["answer"] = g.answer;
            std::cout << j.dump() << '\n';
        } else if (*verify) {
            bool ok = true;
            for (const auto& r : verify_all(vn, vseed)) {
                std::cout << r.line() << " (" << r.seconds << " s)\n";
                if (!r.ok()) std::cout << "  first failure: " << r.first_failure << '\n';
                ok = ok && r.ok();
            }
            return ok ? 0 : 1;
        } else if (*simulate) {
            PopulationSpec spec =
                population_path.empty() ? preset(preset_name) : population_from_json(read_json_file(population_path));
            fs::create_directories(out_dir);
            auto logs = simulate_population(spec, sn, sseed);
            for (const auto& log : logs) {
                auto path = fs::path(out_dir) / (log.front().session + ".jsonl");
                if (fs::exists(path)) throw InvalidInput("duplicate session id " + log.front().session);
                std::ofstream f(path);
                write_jsonl(f, log);
            }
            std::cout << "wrote " << logs.size() << " logs to " << out_dir << '\n';
        } else if (*analyze) {
            std::vector<std::vector<EventRecord>> logs;
            for (const auto& f : log_files(inputs)) logs.push_back(read_jsonl_file(f.string()));
            auto data = analyze_logs(logs, load());
            for (auto& d : data) d.metrics.sample = sample_tag;
            std::string report = markdown_report(data);
            if (!out_dir.empty()) {
                fs::create_directories(out_dir);
                auto m = metrics_of(data);
                auto at = [&](const char* name) { return (fs::path(out_dir) / name).string(); };
                emit(at("participants.csv"), participants_csv(data));
                emit(at("rounds.csv"), rounds_csv(data));
                emit(at("sf_by_spu.csv"), sf_by_spu_csv(m));
                emit(at("quadrants.csv"), quadrants_csv(m));
                emit(at("patterns.csv"), patterns_csv(data));
                emit(at("trend.csv"), trend_csv(data));
                emit(at("report.md"), report);
            }
            std::cout << report;
        } else if (*serve) {
            SessionConfig config;
            if (!config_path.empty()) config = session_config_from_json(read_json_file(config_path));
            auto store = std::make_shared<SessionStore>(
                load(), log_dir.empty() ? std::nullopt : std::optional<fs::path>(log_dir));
            store->open();
            auto router = std::make_shared<ApiRouter>(store, config);
            HttpServer server(router, static_dir.empty() ? std::nullopt : std::optional<std::string>(static_dir));
            int bound = server.bind(host, port);
            if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
            std::cout << "listening on http://" << host << ':' << bound << " (" << store->ids().size()
                      << " sessions loaded)" << std::endl;
            g_server = &server;
            std::signal(SIGINT, [](int) { g_server->stop(); });
            std::signal(SIGTERM, [](int) { g_server->stop(); });
            server.listen();
        } else if (*bank_export) {
            emit(out, default_bank().to_json().dump(2) + "\n");
        } else if (*bank_check) {
            auto b = load_bank(bank_path);
            std::cout << bank_path << ": " << b.questions().size() << " questions, " << b.scenarios().size()
                      << " scenarios\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
