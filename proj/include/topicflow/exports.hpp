#ifndef TOPICFLOW_EXPORTS_HPP
#define TOPICFLOW_EXPORTS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "topicflow/clustering.hpp"
#include "topicflow/itemsets.hpp"
#include "topicflow/json_writer.hpp"
#include "topicflow/transitions.hpp"

namespace topicflow {

/// One column of the stats table.
struct SliceSummary {
    std::string timepoint;
    int documents = 0;
    int nodes = 0;
    int clusters = 0;
    double q = 0.0;
    SliceStats stats;
};

/// Edge object shape shared by transitions.json and the generator's ground
/// truth: {"from": {"t": label, "i": n}|null, "to": ..., "kind", "fwd",
/// "bwd", "gap"}.
void json_write_edge(JsonWriter& w, const TransitionEdge& edge, const std::vector<std::string>& labels);

/// Ground-truth variant: timepoint indices double as labels' positions; uses
/// the edge's own indices when no label list is available.
void json_write_edge(JsonWriter& w, const TransitionEdge& edge);

void write_clusters_json(const std::filesystem::path& path, const std::vector<SliceSummary>& summaries,
                         const std::vector<ClusteringResult>& results);

/// Annotated track: same array shape, label clusters only (no Q/bridging/stats).
void write_annotated_clusters_json(const std::filesystem::path& path,
                                   const std::vector<std::string>& labels, const Timeline& timeline);

void write_transitions_json(const std::filesystem::path& path, const std::vector<TransitionEdge>& edges,
                            const std::vector<std::string>& labels);

void write_flows_json(const std::filesystem::path& path, const FlowResult& flows);

void write_merged_topics_json(const std::filesystem::path& path, const std::vector<MergedTopic>& topics);

/// Table layout: one column per timepoint; rows documents, nodes, mean
/// clustering coefficients (removed/all/best), removal percentage, Q,
/// cluster count. Two decimals, "-" for absent values.
void write_stats_tsv(const std::filesystem::path& path, const std::vector<SliceSummary>& summaries);

// -- readers for re-rendering without re-clustering --------------------------

struct SavedClusters {
    std::vector<SliceSummary> summaries;
    Timeline timeline; // cluster member sets in file order
};

SavedClusters read_clusters_json(const std::filesystem::path& path);

/// Maps "t" labels back to timeline indices via the label order in `labels`.
std::vector<TransitionEdge> read_transitions_json(const std::filesystem::path& path,
                                                  const std::vector<std::string>& labels);

struct SavedFlow {
    int id = 0;
    std::vector<int> edge_indices;
    int length = 0;
};

std::vector<SavedFlow> read_flows_json(const std::filesystem::path& path);

} // namespace topicflow

#endif
