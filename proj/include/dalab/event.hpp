#pragma once

// Append-only session event records and their line-delimited JSON form.
//
// One record per line:
//   {"v": 1, "session": "...", "seq": 3, "ts": "2026-01-01T12:00:00.000Z",
//    "type": "answer", "screen": "spu-1", "question": "spu1-q1", "attempt": 1,
//    "response": {...}, "correct": true, "points": 2, "detail": {...}}
//
// type      created | continue | answer | ranking
// question  absent unless type is answer
// correct   absent for ungraded answers and for non-answer records
// detail    created: {"treatment", "seed", "config"}
//           ranking: {"round", "prize", "value", "earnings"}
//
// "ts" is informational; it takes no part in replay or equality.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dalab/json_io.hpp"

namespace dalab {

struct EventRecord {
    static constexpr int kSchemaVersion = 1;

    std::string session;
    std::uint64_t seq = 0;
    std::string timestamp;
    std::string type;
    std::string screen;
    std::optional<std::string> question;
    int attempt = 0;
    json response;
    std::optional<bool> correct;
    int points = 0;
    json detail;

    /// Equality ignoring the timestamp.
    friend bool operator==(const EventRecord& a, const EventRecord& b);
};

void to_json(json& j, const EventRecord& e);
void from_json(const json& j, EventRecord& e);

/// Current UTC time, millisecond precision, ISO-8601.
std::string utc_timestamp();

void write_jsonl(std::ostream& out, const EventRecord& e);
void write_jsonl(std::ostream& out, const std::vector<EventRecord>& events);
/// Blank lines are skipped. Throws InvalidInput naming the offending line.
std::vector<EventRecord> read_jsonl(std::istream& in);
std::vector<EventRecord> read_jsonl_file(const std::string& path);

}  // namespace dalab
