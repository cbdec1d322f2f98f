// Drives one session per treatment through ApiRouter and writes every
// request and reply body to <out>/<schema>/<n>.json for schema validation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "dalab/api.hpp"
#include "driver.hpp"

using namespace dalab;
namespace fs = std::filesystem;

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: wire_samples OUT_DIR\n";
        return 2;
    }
    const fs::path out = argv[1];
    fs::remove_all(out);
    std::map<std::string, int> counts;
    auto save = [&](const std::string& schema, const std::string& body) {
        fs::create_directories(out / schema);
        std::ofstream(out / schema / (std::to_string(counts[schema]++) + ".json")) << body;
    };

    auto store = std::make_shared<SessionStore>();
    ApiRouter router(store);
    auto call = [&](std::string method, std::string path, std::string body, std::string token = "") {
        ApiRequest r{std::move(method), std::move(path), {{"X-Dalab-Api-Version", "1"}}, std::move(body)};
        if (!token.empty()) r.headers["X-Session-Token"] = token;
        return router.handle(r);
    };

    for (Treatment t : kTreatments) {
        json create = {{"treatment", std::string(to_string(t))}, {"seed", 17}, {"config", {{"currency", "$"}}}};
        save("api-create-request", create.dump());
        auto created = call("POST", "/sessions", create.dump());
        save("api-handle", created.body);
        json h = created.json_body();
        const std::string id = h["session"], token = h["token"];
        const std::string base = "/sessions/" + id;
        int step = 0;
        while (!store->find(id)->state.complete()) {
            save("api-screen", call("GET", base + "/screen", "", token).body);
            Response r = test::next_response(store->find(id)->state, step++ % 3);
            std::string body = to_json(r).dump();
            save("api-response", body);
            auto fb = call("POST", base + "/response", body, token);
            if (fb.status != 200) {
                std::cerr << "unexpected " << fb.status << ": " << fb.body << '\n';
                return 1;
            }
            save("api-feedback", fb.body);
            if (step == 3) save("api-feedback", call("POST", base + "/response", body, token).body);  // replayed
        }
        save("api-screen", call("GET", base + "/screen", "", token).body);
        save("api-handle", call("GET", base, "", token).body);
        save("score-report", call("GET", base + "/score", "", token).body);
        std::istringstream log(call("GET", base + "/log", "", token).body);
        for (std::string line; std::getline(log, line);) save("event-record", line);
        save("session-config", to_json(store->find(id)->state.config).dump());
        for (const auto& r : store->find(id)->state.rounds) save("round", round_to_json(r).dump());
    }

    save("api-error", call("GET", "/sessions/none/screen", "").body);
    save("api-error", router.handle({"GET", "/sessions", {}, ""}).body);
    save("api-error", call("POST", "/sessions", "{\"seed\": -4}").body);
    std::cout << "wrote samples for " << counts.size() << " schemas\n";
    return 0;
}
