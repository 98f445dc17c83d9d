#ifndef TOPICFLOW_CORPUS_HPP
#define TOPICFLOW_CORPUS_HPP

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace topicflow {

/// Raised when an input file cannot be parsed. Carries the 1-based line
/// number of the offending record when one is known.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, long line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    long line() const { return line_; }

private:
    long line_;
};

enum class CorpusFormat { jsonl, tsv };
enum class Granularity { day, hour };

struct Document {
    std::string id;
    std::int64_t timestamp = 0;            // UTC epoch seconds
    std::vector<std::string> tokens;       // normalized, empties dropped
    std::vector<std::string> labels;       // normalized; empty vector = unlabeled

    bool has_tokens() const { return !tokens.empty(); }
    bool has_labels() const { return !labels.empty(); }

    /// Per-document token set (co-occurrence is presence-based).
    std::set<std::string> token_set() const;
};

struct TimeSlice {
    std::string timepoint;                 // bucket id, e.g. "2020-08-19"
    std::int64_t bucket = 0;               // days (or hours) since epoch
    std::vector<Document> documents;
    std::set<std::string> vocabulary;      // union of per-document token sets

    bool empty() const { return documents.empty(); }
};

struct Corpus {
    std::vector<Document> documents;

    bool has_labels() const;
    /// Ids of documents whose token list came out empty after normalization.
    std::vector<std::string> empty_token_ids() const;
};

/// Lowercase, trim, collapse internal whitespace. '#' prefixes survive.
/// May return an empty string; callers drop those tokens.
std::string normalize_token(const std::string& raw);

/// Parses "YYYY-MM-DDTHH:MM:SSZ" to UTC epoch seconds. Throws ParseError.
std::int64_t parse_timestamp(const std::string& text);

std::string format_timestamp(std::int64_t epoch_seconds);

/// Bucket id string for a timestamp at the given granularity.
std::string bucket_id(std::int64_t epoch_seconds, Granularity granularity);

Corpus load_corpus(const std::string& path, CorpusFormat format);

/// Writes the corpus back out in the given format, one document per line,
/// preserving document order.
void dump_corpus(const Corpus& corpus, const std::string& path, CorpusFormat format);

/// Splits the corpus into slices sorted by timepoint. Empty buckets between
/// the first and last timepoint are materialized so the transition engine
/// sees real calendar gaps.
std::vector<TimeSlice> partition_by_timepoint(const Corpus& corpus, Granularity granularity);

} // namespace topicflow

#endif
