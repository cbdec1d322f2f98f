#include "dalab/event.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dalab {

bool operator==(const EventRecord& a, const EventRecord& b) {
    return a.session == b.session && a.seq == b.seq && a.type == b.type && a.screen == b.screen &&
           a.question == b.question && a.attempt == b.attempt && a.response == b.response && a.correct == b.correct &&
           a.points == b.points && a.detail == b.detail;
}

void to_json(json& j, const EventRecord& e) {
    j = {{"v", EventRecord::kSchemaVersion}, {"session", e.session}, {"seq", e.seq},
         {"ts", e.timestamp},                {"type", e.type},       {"screen", e.screen}};
    if (e.question) j["question"] = *e.question;
    if (e.attempt) j["attempt"] = e.attempt;
    if (!e.response.is_null()) j["response"] = e.response;
    if (e.correct) j["correct"] = *e.correct;
    if (e.points) j["points"] = e.points;
    if (!e.detail.is_null()) j["detail"] = e.detail;
}

void from_json(const json& j, EventRecord& e) {
    if (j.value("v", 0) != EventRecord::kSchemaVersion) throw InvalidInput("unsupported event schema version");
    e.session = j.at("session").get<std::string>();
    e.seq = j.at("seq").get<std::uint64_t>();
    e.timestamp = j.value("ts", std::string());
    e.type = j.at("type").get<std::string>();
    e.screen = j.at("screen").get<std::string>();
    e.question = j.contains("question") ? std::optional(j.at("question").get<std::string>()) : std::nullopt;
    e.attempt = j.value("attempt", 0);
    e.response = j.value("response", json());
    e.correct = j.contains("correct") ? std::optional(j.at("correct").get<bool>()) : std::nullopt;
    e.points = j.value("points", 0);
    e.detail = j.value("detail", json());
}

std::string utc_timestamp() {
    using namespace std::chrono;
    auto now = system_clock::now();
    auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
    std::time_t t = system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0') << ms << 'Z';
    return os.str();
}

void write_jsonl(std::ostream& out, const EventRecord& e) { out << json(e).dump() << '\n'; }

void write_jsonl(std::ostream& out, const std::vector<EventRecord>& events) {
    for (const auto& e : events) write_jsonl(out, e);
}

std::vector<EventRecord> read_jsonl(std::istream& in) {
    std::vector<EventRecord> out;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(json::parse(line).get<EventRecord>());
        } catch (const std::exception& e) {
            throw InvalidInput("event log line " + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

std::vector<EventRecord> read_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    return read_jsonl(in);
}

}  // namespace dalab
