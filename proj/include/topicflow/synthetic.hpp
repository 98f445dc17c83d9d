#ifndef TOPICFLOW_SYNTHETIC_HPP
#define TOPICFLOW_SYNTHETIC_HPP

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "topicflow/corpus.hpp"
#include "topicflow/transitions.hpp"

namespace topicflow {

struct TopicSpec {
    std::string name;
    std::set<std::string> tokens;
    std::vector<std::pair<int, int>> intervals; // inclusive [start, end], ascending, gaps >= 2
};

/// Declarative expectation checked against the planted timeline; kinds:
/// split, merge, absorb, dissolve, disappear, emerge, re_emerge, unchanged.
/// `at` is the timepoint on the right side of the step boundary.
struct EventSpec {
    std::string kind;
    int at = 0;
    std::vector<std::string> from;
    std::vector<std::string> to;
};

struct SyntheticSchedule {
    std::uint64_t seed = 1;
    int timepoints = 0;
    std::string start_date = "2025-01-01";
    int docs_per_topic = 40;
    bool labeled = true; // attach the topic name as the document label
    std::vector<std::string> bridging_vocabulary;
    std::vector<TopicSpec> topics;
    std::vector<EventSpec> events;
};

struct GroundTruth {
    std::uint64_t seed = 1;
    double alpha = kDefaultAlpha;
    std::vector<std::string> timepoints;
    Timeline planted;                                    // planted topic token sets per timepoint
    std::vector<std::vector<std::string>> planted_names; // aligned topic names
    std::vector<TransitionEdge> edges;                   // transitions implied by the planted sets
};

SyntheticSchedule parse_schedule(const std::string& json_text);
SyntheticSchedule load_schedule(const std::filesystem::path& path);

/// Throws std::invalid_argument on malformed topics/intervals or on declared
/// events the planted timeline does not actually produce.
void validate_schedule(const SyntheticSchedule& schedule);

GroundTruth schedule_ground_truth(const SyntheticSchedule& schedule, double alpha = kDefaultAlpha);

/// Deterministic corpus: per active (timepoint, topic), docs_per_topic
/// documents each sampling 3-8 topic tokens plus 0-2 bridging tokens.
Corpus generate_synthetic_corpus(const SyntheticSchedule& schedule);

void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth);

} // namespace topicflow

#endif
