#pragma once

// Wire API over the session engine.
//
// ApiRouter::handle is a pure function of the request and the store, so the
// HTTP layer in server.hpp is a thin adapter and tests drive the router
// directly. Every request must carry `X-Dalab-Api-Version: 1`.
//
//   POST /sessions                  {"treatment"?, "seed", "id"?, "config"?} -> 201 handle
//   GET  /sessions/{id}             handle
//   GET  /sessions/{id}/screen      {"session", "seq", "status", "screen"}
//   POST /sessions/{id}/response    Response with "seq" -> feedback
//   GET  /sessions/{id}/log         event log, JSONL
//   GET  /sessions/{id}/score       ScoreReport
//
// Per-session requests carry the token from the create response in
// `X-Session-Token`. Errors are {"error": {"code", "message"}} with status
// 400 (version), 403 (token), 404 (unknown session or route), 405, 409 (out
// of order or duplicate id) or 422 (malformed body).

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "dalab/session.hpp"

namespace dalab {

inline constexpr std::string_view kApiVersion = "1";
inline constexpr std::string_view kVersionHeader = "X-Dalab-Api-Version";
inline constexpr std::string_view kTokenHeader = "X-Session-Token";

struct ApiRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> headers;  // names compared case-insensitively
    std::string body;

    std::optional<std::string> header(std::string_view name) const;
};

struct ApiResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";

    json json_body() const { return json::parse(body); }
};

/// One live session. `mutex` serializes submissions; readers take it
/// shared and see only committed events.
struct StoredSession {
    SessionState state;
    std::string token;
    /// Feedback returned for each committed response, by sequence number,
    /// so that a retry with the same seq gets the same answer.
    std::map<std::uint64_t, json> feedback;
    mutable std::shared_mutex mutex;
};

/// In-memory session store. With a log directory, every committed event is
/// appended to <dir>/<id>.jsonl and the token kept in <dir>/<id>.token;
/// open() replays the directory, so the logs are the source of truth.
class SessionStore {
public:
    explicit SessionStore(std::shared_ptr<const QuestionBank> bank = nullptr,
                          std::optional<std::filesystem::path> log_dir = std::nullopt);

    /// Loads every log in the directory; throws on a log that does not replay.
    void open();

    /// Inserts a new session; false if the id is taken.
    bool insert(std::shared_ptr<StoredSession> s);
    std::shared_ptr<StoredSession> find(const std::string& id) const;
    std::vector<std::string> ids() const;
    const std::shared_ptr<const QuestionBank>& bank() const { return bank_; }

    /// Writes events [from, end) of the session's log. Caller holds the
    /// session's exclusive lock.
    void persist(const StoredSession& s, std::size_t from) const;

private:
    std::shared_ptr<const QuestionBank> bank_;
    std::optional<std::filesystem::path> dir_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<StoredSession>> sessions_;
};

class ApiRouter {
public:
    /// `defaults` is the config of sessions created without one; clients may
    /// not set bank_path. `token` mints per-session tokens; the default draws
    /// from std::random_device. Tokens never enter the event log.
    explicit ApiRouter(std::shared_ptr<SessionStore> store, SessionConfig defaults = {},
                       std::function<std::string()> token = nullptr);

    ApiResponse handle(const ApiRequest& request);

    SessionStore& store() { return *store_; }

private:
    ApiResponse create(const ApiRequest& r);
    ApiResponse handle_of(const StoredSession& s) const;
    ApiResponse screen(const StoredSession& s) const;
    ApiResponse respond(StoredSession& s, const ApiRequest& r);
    ApiResponse log(const StoredSession& s) const;
    ApiResponse score_of(const StoredSession& s) const;

    std::shared_ptr<SessionStore> store_;
    SessionConfig defaults_;
    std::function<std::string()> token_;
};

ApiResponse api_error(int status, std::string_view code, std::string_view message);

}  // namespace dalab
