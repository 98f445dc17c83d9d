#ifndef TOPICFLOW_CLUSTERING_HPP
#define TOPICFLOW_CLUSTERING_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "topicflow/gow.hpp"

namespace topicflow {

struct MclParams {
    int expansion = 2;              // matrix power per iteration
    double inflation = 2.0;         // entrywise power, > 1
    double prune_epsilon = 1e-5;    // entries below this are dropped
    double convergence_tol = 1e-6;  // max entrywise change to declare convergence
    int max_iterations = 100;

    void validate() const;
};

using Partition = std::vector<std::vector<std::string>>;

struct SliceStats {
    std::optional<double> mean_c_removed; // C̄ of removed nodes, on the original graph
    std::optional<double> mean_c_all;     // C̄ over the original graph
    std::optional<double> mean_c_best;    // C̄ over the retained subgraph
    double pct_removed = 0.0;             // 100 * |removed| / |V|
};

struct ClusteringResult {
    std::string timepoint;
    Partition clusters;                      // canonical order: size desc, then first member
    std::vector<std::string> bridging_nodes; // removal order
    std::map<std::string, std::set<int>> bridging_membership;
    double modularity_q = 0.0;
    SliceStats stats;
    bool mcl_converged = true;
};

/// Watts–Strogatz local clustering coefficient, 2e_i / (k_i (k_i - 1)) with
/// unweighted degree. Nodes of degree <= 1 return the sentinel 1.0 and are
/// never removal candidates.
double clustering_coefficient(const TemporalGraph& graph, const std::string& node);

/// Weighted Newman modularity of a partition. The partition must cover the
/// graph's nodes exactly and disjointly. Zero total weight yields 0.
double modularity(const TemporalGraph& graph, const Partition& partition);

/// Markov Clustering. Deterministic for a given graph regardless of how it
/// was assembled (nodes are ordered canonically inside). The optional
/// observer sees the column-stochastic matrix after every iteration, with
/// node count as leading dimension.
struct MclOutcome {
    Partition clusters;
    bool converged = true;
    int iterations = 0;
};
MclOutcome mcl(const TemporalGraph& graph, const MclParams& params,
               const std::function<void(const std::vector<double>&, std::size_t)>* observer = nullptr);

/// Candidate removal order: ascending clustering coefficient, ties broken by
/// higher degree then token order. Degree <= 1 nodes are excluded.
std::vector<std::string> removal_order(const TemporalGraph& graph);

/// Runs the node-removal loop: cluster the full graph, then strip candidate
/// nodes one at a time in removal order, re-clustering after each and keeping
/// the first maximal-modularity clustering. Removal stops when fewer than 3
/// nodes would remain or the removed fraction would exceed
/// max_removal_fraction; early_stop_patience > 0 additionally stops after
/// that many consecutive non-improving iterations.
ClusteringResult find_optimal_clustering(const TemporalGraph& graph, const MclParams& params = {},
                                         double max_removal_fraction = 0.5,
                                         int early_stop_patience = 0);

/// Recomputes bridging membership from the original graph: a removed node
/// attaches to every cluster holding at least one of its original neighbors.
ClusteringResult attach_bridging_membership(ClusteringResult result, const TemporalGraph& original_graph);

SliceStats compute_slice_stats(const ClusteringResult& result, const TemporalGraph& original_graph);

} // namespace topicflow

#endif
