#ifndef TOPICFLOW_PIPELINE_HPP
#define TOPICFLOW_PIPELINE_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "topicflow/chart.hpp"
#include "topicflow/clustering.hpp"
#include "topicflow/corpus.hpp"
#include "topicflow/exports.hpp"
#include "topicflow/gow.hpp"
#include "topicflow/itemsets.hpp"
#include "topicflow/transitions.hpp"

namespace topicflow {

enum class Stage { corpus, gow, clustering, transitions, itemsets, exports };

const char* to_string(Stage stage);

class StageError : public std::runtime_error {
public:
    StageError(Stage stage, const std::string& message)
        : std::runtime_error(std::string(to_string(stage)) + ": " + message), stage_(stage) {}

    Stage stage() const noexcept { return stage_; }

private:
    Stage stage_;
};

struct RunConfig {
    std::filesystem::path input;
    std::filesystem::path out_dir;
    std::optional<CorpusFormat> format; // sniffed from the extension when unset
    Granularity granularity = Granularity::day;
    double weight_floor = 0.0;
    MclParams mcl;
    double alpha = kDefaultAlpha;
    double max_removal_fraction = 0.5;
    int early_stop_patience = 0;
    int max_gap = 0;          // <= 0: unbounded re-emergence scan
    double min_support = 0.0; // <= 0: two occurrences
    bool include_bridging_in_match = false;
    int threads = 0; // <= 0: hardware concurrency; TOPICFLOW_THREADS caps either way
};

struct TrackReport {
    Timeline timeline;
    std::vector<TransitionEdge> edges;
    FlowResult flows;
    FlowSummary summary;
};

struct RunReport {
    std::vector<std::string> timepoints;
    std::vector<SliceSummary> slices;
    std::vector<ClusteringResult> results;
    TrackReport computed;
    std::optional<TrackReport> annotated;
    std::vector<MergedTopic> merged_topics;
};

/// Worker count actually used for a request, after the env cap.
int effective_threads(int requested);

/// Full batch: load, slice, cluster every slice (parallel map), classify
/// transitions, mine the annotated track when labels exist, write every
/// artifact into config.out_dir. Throws StageError; no partial output files
/// survive a failure.
RunReport run(const RunConfig& config);

void write_report_json(const std::filesystem::path& path, const RunReport& report);

} // namespace topicflow

#endif
