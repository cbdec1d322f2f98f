#include "dalab/api.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>

#include "dalab/json_io.hpp"

namespace dalab {

namespace {

bool iequal(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

bool valid_id(std::string_view id) {
    if (id.empty() || id.size() > 64 || id.front() == '.') return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    });
}

std::vector<std::string> split_path(std::string_view path) {
    if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < path.size()) {
        if (path[i] == '/') {
            ++i;
            continue;
        }
        std::size_t j = path.find('/', i);
        if (j == std::string_view::npos) j = path.size();
        parts.emplace_back(path.substr(i, j - i));
        i = j;
    }
    return parts;
}

ApiResponse ok(const json& body, int status = 200) {
    return {status, body.dump(), "application/json"};
}

std::string random_token() {
    std::random_device rd;
    std::ostringstream os;
    os << std::hex;
    for (int i = 0; i < 4; ++i) os << static_cast<std::uint32_t>(rd());
    return os.str();
}

const char* status_of(const SessionState& s) {
    return s.complete() ? "complete" : "active";
}

}  // namespace

std::optional<std::string> ApiRequest::header(std::string_view name) const {
    for (const auto& [k, v] : headers)
        if (iequal(k, name)) return v;
    return std::nullopt;
}

ApiResponse api_error(int status, std::string_view code, std::string_view message) {
    return ok({{"error", {{"code", code}, {"message", message}}}}, status);
}

SessionStore::SessionStore(std::shared_ptr<const QuestionBank> bank, std::optional<std::filesystem::path> log_dir)
    : bank_(std::move(bank)), dir_(std::move(log_dir)) {
    if (dir_) std::filesystem::create_directories(*dir_);
}

void SessionStore::open() {
    if (!dir_) return;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(*dir_))
        if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        auto s = std::make_shared<StoredSession>();
        auto log = read_jsonl_file(path.string());
        std::vector<Feedback> feedback;
        s->state = replay(log, bank_, &feedback);
        for (const Feedback& f : feedback) s->feedback[f.seq] = to_json(f);
        auto token_path = path;
        token_path.replace_extension(".token");
        std::ifstream in(token_path);
        if (!std::getline(in, s->token) || s->token.empty())
            throw InvalidInput("missing session token file " + token_path.string());
        if (!insert(s)) throw InvalidInput("duplicate session id " + s->state.id + " in " + dir_->string());
    }
}

bool SessionStore::insert(std::shared_ptr<StoredSession> s) {
    std::unique_lock lock(mutex_);
    return sessions_.emplace(s->state.id, std::move(s)).second;
}

std::shared_ptr<StoredSession> SessionStore::find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::vector<std::string> SessionStore::ids() const {
    std::shared_lock lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [id, s] : sessions_) out.push_back(id);
    return out;
}

void SessionStore::persist(const StoredSession& s, std::size_t from) const {
    if (!dir_) return;
    const auto base = *dir_ / s.state.id;
    if (from == 0) {
        std::ofstream token(std::filesystem::path(base).replace_extension(".token"), std::ios::trunc);
        token << s.token << '\n';
    }
    std::ofstream out(std::filesystem::path(base).replace_extension(".jsonl"),
                      from == 0 ? std::ios::trunc : std::ios::app);
    for (std::size_t i = from; i < s.state.log.size(); ++i) write_jsonl(out, s.state.log[i]);
    out.flush();
    if (!out) throw std::runtime_error("cannot write the log of session " + s.state.id);
}

ApiRouter::ApiRouter(std::shared_ptr<SessionStore> store, SessionConfig defaults, std::function<std::string()> token)
    : store_(std::move(store)), defaults_(std::move(defaults)), token_(token ? std::move(token) : random_token) {}

ApiResponse ApiRouter::handle(const ApiRequest& r) {
    try {
        auto version = r.header(kVersionHeader);
        if (!version) return api_error(400, "missing_version", "missing header " + std::string(kVersionHeader));
        if (*version != kApiVersion)
            return api_error(400, "unsupported_version", "unsupported API version " + *version);

        auto parts = split_path(r.path);
        if (parts.empty() || parts[0] != "sessions" || parts.size() > 3)
            return api_error(404, "not_found", "no such route");
        if (parts.size() == 1) {
            if (r.method != "POST") return api_error(405, "method_not_allowed", "use POST /sessions");
            return create(r);
        }

        auto s = store_->find(parts[1]);
        if (!s) return api_error(404, "unknown_session", "unknown session " + parts[1]);
        auto token = r.header(kTokenHeader);
        if (!token || *token != s->token) return api_error(403, "bad_token", "missing or wrong session token");

        const std::string action = parts.size() == 3 ? parts[2] : "";
        const bool post = action == "response";
        if (action != "" && action != "screen" && action != "response" && action != "log" && action != "score")
            return api_error(404, "not_found", "no such route");
        if (r.method != (post ? "POST" : "GET"))
            return api_error(405, "method_not_allowed", std::string("use ") + (post ? "POST" : "GET"));
        if (post) return respond(*s, r);

        std::shared_lock lock(s->mutex);
        if (action == "") return handle_of(*s);
        if (action == "screen") return screen(*s);
        if (action == "log") return log(*s);
        return score_of(*s);
    } catch (const OutOfOrder& e) {
        return api_error(409, "out_of_order", e.what());
    } catch (const InvalidInput& e) {
        return api_error(422, "malformed", e.what());
    } catch (const std::exception& e) {
        return api_error(500, "internal", e.what());
    }
}

ApiResponse ApiRouter::create(const ApiRequest& r) {
    json body = json::parse(r.body.empty() ? "{}" : r.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) return api_error(422, "malformed", "body must be a JSON object");

    return guarded([&]() -> ApiResponse {
        if (!body.contains("seed") || !body["seed"].is_number_unsigned())
            return api_error(422, "malformed", "seed must be a non-negative integer");
        std::uint64_t seed = body["seed"].get<std::uint64_t>();
        SessionConfig config = defaults_;
        if (body.contains("config")) {
            if (body["config"].contains("bank_path"))
                return api_error(422, "malformed", "bank_path is set by the server");
            json merged = to_json(defaults_);
            merged.update(body["config"]);
            config = session_config_from_json(merged);
        }
        Treatment t = body.contains("treatment") ? treatment_from_string(body["treatment"].get<std::string>())
                                                 : assign_treatment(config, seed);

        auto stored = std::make_shared<StoredSession>();
        stored->token = token_();
        if (body.contains("id")) {
            std::string id = body["id"].get<std::string>();
            if (!valid_id(id)) return api_error(422, "malformed", "session ids use letters, digits, '-', '_' and '.'");
            stored->state = create_session(t, config, seed, id, store_->bank());
            if (!store_->insert(stored)) return api_error(409, "duplicate_id", "session " + id + " exists");
        } else {
            const std::string base = create_session(t, config, seed, {}, store_->bank()).id;
            for (int k = 1;; ++k) {
                std::string id = k == 1 ? base : base + "-" + std::to_string(k);
                if (store_->find(id)) continue;
                stored->state = create_session(t, config, seed, id, store_->bank());
                if (store_->insert(stored)) break;
            }
        }
        std::unique_lock lock(stored->mutex);
        store_->persist(*stored, 0);
        ApiResponse res = handle_of(*stored);
        json j = res.json_body();
        j["token"] = stored->token;
        j["screen"] = to_json(current_screen(stored->state));
        return ok(j, 201);
    });
}

ApiResponse ApiRouter::handle_of(const StoredSession& s) const {
    return ok({{"session", s.state.id},
               {"treatment", std::string(to_string(s.state.treatment))},
               {"status", status_of(s.state)},
               {"seq", s.state.next_seq()}});
}

ApiResponse ApiRouter::screen(const StoredSession& s) const {
    return ok({{"session", s.state.id},
               {"seq", s.state.next_seq()},
               {"status", status_of(s.state)},
               {"screen", to_json(current_screen(s.state))}});
}

ApiResponse ApiRouter::respond(StoredSession& s, const ApiRequest& r) {
    json body = json::parse(r.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) return api_error(422, "malformed", "body must be a JSON object");
    Response response = response_from_json(body);
    if (!response.seq) return api_error(422, "malformed", "seq is required");
    const std::uint64_t seq = *response.seq;

    // The log keeps rankings as label arrays; compare retries in that form.
    json logged = response.payload;
    if (response.type == "ranking" && logged.is_object() && logged.contains("ranking") &&
        logged["ranking"].is_string()) {
        try {
            logged["ranking"] = parse_ranking(logged["ranking"].get<std::string>());
        } catch (const InvalidInput&) {
        }
    }

    std::unique_lock lock(s.mutex);
    const auto& log = s.state.log;
    if (seq < log.size()) {
        const EventRecord& e = log[seq];
        auto it = s.feedback.find(seq);
        if (e.type == response.type && e.question == response.question && e.response == logged &&
            it != s.feedback.end()) {
            json j = it->second;
            j["replayed"] = true;
            return ok(j);
        }
        return api_error(409, "out_of_order", "sequence number " + std::to_string(seq) + " is already taken");
    }
    const std::size_t from = log.size();
    Feedback f = submit_response(s.state, response);
    store_->persist(s, from);
    json j = to_json(f);
    s.feedback[seq] = j;
    return ok(j);
}

ApiResponse ApiRouter::log(const StoredSession& s) const {
    std::ostringstream os;
    write_jsonl(os, s.state.log);
    return {200, os.str(), "application/x-ndjson"};
}

ApiResponse ApiRouter::score_of(const StoredSession& s) const {
    return ok(to_json(score(s.state)));
}

}  // namespace dalab
