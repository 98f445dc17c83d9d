#ifndef TOPICFLOW_TRANSITIONS_HPP
#define TOPICFLOW_TRANSITIONS_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace topicflow {

inline constexpr double kDefaultAlpha = 2.0 / 3.0;

struct ClusterRef {
    std::string timepoint;
    int timepoint_index = 0;
    int index = 0;
    std::set<std::string> members; // core members; bridging attachments only if configured in
};

struct ClusterKey {
    int timepoint_index = 0;
    int cluster_index = 0;

    friend auto operator<=>(const ClusterKey&, const ClusterKey&) = default;
};

enum class TransitionKind {
    unchanged,
    absorbed,
    dissolved,
    split,
    merged,
    disappeared,
    emerged,
    re_emerged,
};

const char* to_string(TransitionKind kind);

struct TransitionEdge {
    std::optional<ClusterKey> from; // absent for emerged
    std::optional<ClusterKey> to;   // absent for disappeared
    TransitionKind kind = TransitionKind::unchanged;
    double overlap_forward = 0.0;
    double overlap_backward = 0.0;
    int gap = 1; // timepoint distance; > 1 only for re_emerged
};

/// Clusters of one timeline, outer index = timepoint position. Empty inner
/// vectors are gap timepoints.
using Timeline = std::vector<std::vector<ClusterRef>>;

struct Overlap {
    double forward = 0.0;  // |X ∩ Y| / |X|
    double backward = 0.0; // |X ∩ Y| / |Y|
};

Overlap overlap(const std::set<std::string>& x, const std::set<std::string>& y);

/// Classifies one consecutive step. Per prev cluster the precedence is
/// unchanged > absorbed > split > dissolved; merged edges are emitted per
/// next cluster alongside their constituents' forward edges; anything left
/// uncovered becomes disappeared (prev side) or emerged (next side).
std::vector<TransitionEdge> classify_step(const std::vector<ClusterRef>& prev,
                                          const std::vector<ClusterRef>& next,
                                          double alpha = kDefaultAlpha);

/// Scans past each disappearance for a later emerged cluster matching the
/// unchanged criterion. max_gap <= 0 means unbounded. Returned edges carry
/// gap >= 2; the caller is expected to drop the matched clusters' emerged
/// edges (classify_timeline does).
std::vector<TransitionEdge> detect_reemergence(const std::vector<TransitionEdge>& step_edges,
                                               const Timeline& timeline, double alpha = kDefaultAlpha,
                                               int max_gap = 0);

/// Full pass: consecutive classification over every pair (including a leading
/// empty timepoint so the first slice's clusters emerge), re-emergence
/// detection, suppression of re-emerged clusters' emerged edges, canonical
/// ordering.
std::vector<TransitionEdge> classify_timeline(const Timeline& timeline, double alpha = kDefaultAlpha,
                                              int max_gap = 0);

struct Flow {
    int id = 0;
    ClusterKey root;                 // earliest emerged cluster of the component
    std::vector<ClusterKey> members; // sorted by (timepoint, index)
    std::vector<int> edge_indices;   // indices into the edge list passed to build_flows
    int length = 0;                  // distinct timepoints touched
};

struct FlowResult {
    std::vector<Flow> flows;             // components with >= 2 clusters
    std::vector<ClusterKey> singletons;  // clusters that exist at a single timepoint
};

FlowResult build_flows(const std::vector<TransitionEdge>& edges, const Timeline& timeline);

struct FlowSummary {
    int flow_count = 0;
    double mean_length = 0.0;
    int singleton_count = 0;
};

FlowSummary flow_summary(const FlowResult& flows);

} // namespace topicflow

#endif
