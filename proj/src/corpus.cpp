#include "topicflow/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace topicflow {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;
constexpr std::int64_t kSecondsPerHour = 3600;

// floor division, timestamps before 1970 included
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if (a % b != 0 && (a < 0) != (b < 0)) --q;
    return q;
}

std::vector<std::string> normalize_all(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    out.reserve(raw.size());
    for (const auto& t : raw) {
        std::string n = normalize_token(t);
        if (!n.empty()) out.push_back(std::move(n));
    }
    return out;
}

void validate_labels(const std::vector<std::string>& labels, long line) {
    if (labels.size() > 3) {
        throw ParseError("labels has " + std::to_string(labels.size()) + " entries, at most 3 allowed", line);
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

Document parse_jsonl_record(const std::string& text, long line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), line);
    }
    if (!j.is_object()) throw ParseError("record is not a JSON object", line);
    if (!j.contains("id") || !j["id"].is_string()) throw ParseError("missing or non-string \"id\" field", line);
    if (!j.contains("timestamp") || !j["timestamp"].is_string())
        throw ParseError("missing or non-string \"timestamp\" field", line);
    if (!j.contains("tokens") || !j["tokens"].is_array())
        throw ParseError("missing or non-array \"tokens\" field", line);

    Document doc;
    doc.id = j["id"].get<std::string>();
    if (doc.id.empty()) throw ParseError("empty document id", line);
    try {
        doc.timestamp = parse_timestamp(j["timestamp"].get<std::string>());
    } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
    }
    std::vector<std::string> raw_tokens;
    for (const auto& t : j["tokens"]) {
        if (!t.is_string()) throw ParseError("non-string entry in \"tokens\"", line);
        raw_tokens.push_back(t.get<std::string>());
    }
    doc.tokens = normalize_all(raw_tokens);

    if (j.contains("labels")) {
        if (!j["labels"].is_array()) throw ParseError("\"labels\" is not an array", line);
        std::vector<std::string> raw_labels;
        for (const auto& l : j["labels"]) {
            if (!l.is_string()) throw ParseError("non-string entry in \"labels\"", line);
            raw_labels.push_back(l.get<std::string>());
        }
        validate_labels(raw_labels, line);
        doc.labels = normalize_all(raw_labels);
    }
    return doc;
}

Document parse_tsv_record(const std::string& text, long line) {
    std::vector<std::string> fields = split(text, '\t');
    if (fields.size() != 3 && fields.size() != 4) {
        throw ParseError("expected 3 or 4 tab-separated fields, got " + std::to_string(fields.size()), line);
    }
    Document doc;
    doc.id = fields[0];
    if (doc.id.empty()) throw ParseError("empty document id", line);
    try {
        doc.timestamp = parse_timestamp(fields[1]);
    } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
    }
    doc.tokens = normalize_all(split(fields[2], '|'));
    if (fields.size() == 4 && !fields[3].empty()) {
        std::vector<std::string> raw_labels = split(fields[3], '|');
        validate_labels(raw_labels, line);
        doc.labels = normalize_all(raw_labels);
    }
    return doc;
}

std::string escape_json(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out.push_back(c);
            }
        }
    }
    return out;
}

} // namespace

std::set<std::string> Document::token_set() const {
    return {tokens.begin(), tokens.end()};
}

bool Corpus::has_labels() const {
    return std::any_of(documents.begin(), documents.end(),
                       [](const Document& d) { return d.has_labels(); });
}

std::vector<std::string> Corpus::empty_token_ids() const {
    std::vector<std::string> ids;
    for (const auto& d : documents)
        if (!d.has_tokens()) ids.push_back(d.id);
    return ids;
}

std::string normalize_token(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::int64_t parse_timestamp(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char tail = '\0';
    if (text.size() != 20 ||
        std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s, &tail) != 7 ||
        tail != 'Z') {
        throw ParseError("unparseable timestamp \"" + text + "\" (expected YYYY-MM-DDTHH:MM:SSZ)");
    }
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59 || h < 0 || mi < 0 || s < 0) {
        throw ParseError("invalid calendar date or time in \"" + text + "\"");
    }
    std::int64_t days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return days * kSecondsPerDay + h * kSecondsPerHour + mi * 60 + s;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
    std::int64_t days = floor_div(epoch_seconds, kSecondsPerDay);
    std::int64_t rem = epoch_seconds - days * kSecondsPerDay;
    std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(rem / 3600), static_cast<int>(rem % 3600 / 60), static_cast<int>(rem % 60));
    return buf;
}

namespace {

std::int64_t bucket_number(std::int64_t epoch_seconds, Granularity g) {
    return g == Granularity::day ? floor_div(epoch_seconds, kSecondsPerDay)
                                 : floor_div(epoch_seconds, kSecondsPerHour);
}

std::string bucket_label(std::int64_t bucket, Granularity g) {
    std::int64_t days = g == Granularity::day ? bucket : floor_div(bucket, 24);
    std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
    char buf[32];
    if (g == Granularity::day) {
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    } else {
        std::int64_t hour = bucket - days * 24;
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                      static_cast<int>(hour));
    }
    return buf;
}

} // namespace

std::string bucket_id(std::int64_t epoch_seconds, Granularity granularity) {
    return bucket_label(bucket_number(epoch_seconds, granularity), granularity);
}

Corpus load_corpus(const std::string& path, CorpusFormat format) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file \"" + path + "\"");

    Corpus corpus;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Document doc = format == CorpusFormat::jsonl ? parse_jsonl_record(line, line_no)
                                                     : parse_tsv_record(line, line_no);
        if (!seen_ids.insert(doc.id).second) {
            throw ParseError("duplicate document id \"" + doc.id + "\"", line_no);
        }
        corpus.documents.push_back(std::move(doc));
    }
    return corpus;
}

void dump_corpus(const Corpus& corpus, const std::string& path, CorpusFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file \"" + path + "\"");
    for (const auto& doc : corpus.documents) {
        if (format == CorpusFormat::jsonl) {
            out << "{\"id\":\"" << escape_json(doc.id) << "\",\"timestamp\":\""
                << format_timestamp(doc.timestamp) << "\",\"tokens\":[";
            for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
                if (i) out << ',';
                out << '"' << escape_json(doc.tokens[i]) << '"';
            }
            out << ']';
            if (doc.has_labels()) {
                out << ",\"labels\":[";
                for (std::size_t i = 0; i < doc.labels.size(); ++i) {
                    if (i) out << ',';
                    out << '"' << escape_json(doc.labels[i]) << '"';
                }
                out << ']';
            }
            out << "}\n";
        } else {
            out << doc.id << '\t' << format_timestamp(doc.timestamp) << '\t';
            for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
                if (i) out << '|';
                out << doc.tokens[i];
            }
            if (doc.has_labels()) {
                out << '\t';
                for (std::size_t i = 0; i < doc.labels.size(); ++i) {
                    if (i) out << '|';
                    out << doc.labels[i];
                }
            }
            out << '\n';
        }
    }
}

std::vector<TimeSlice> partition_by_timepoint(const Corpus& corpus, Granularity granularity) {
    std::vector<TimeSlice> slices;
    if (corpus.documents.empty()) return slices;

    std::map<std::int64_t, std::vector<Document>> buckets;
    for (const auto& doc : corpus.documents) {
        buckets[bucket_number(doc.timestamp, granularity)].push_back(doc);
    }
    std::int64_t first = buckets.begin()->first;
    std::int64_t last = buckets.rbegin()->first;
    for (std::int64_t b = first; b <= last; ++b) {
        TimeSlice slice;
        slice.bucket = b;
        slice.timepoint = bucket_label(b, granularity);
        auto it = buckets.find(b);
        if (it != buckets.end()) slice.documents = std::move(it->second);
        for (const auto& doc : slice.documents) {
            for (const auto& t : doc.tokens) slice.vocabulary.insert(t);
        }
        slices.push_back(std::move(slice));
    }
    return slices;
}

} // namespace topicflow
