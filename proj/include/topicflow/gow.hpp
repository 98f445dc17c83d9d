#ifndef TOPICFLOW_GOW_HPP
#define TOPICFLOW_GOW_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "topicflow/corpus.hpp"

namespace topicflow {

/// Document-level presence counts for one time slice. n_x counts documents
/// containing x at least once; pair counts documents containing both tokens.
struct CooccurrenceTable {
    std::int64_t total_documents = 0;
    std::map<std::string, std::int64_t> unigram;
    std::map<std::pair<std::string, std::string>, std::int64_t> pair; // key.first < key.second

    std::int64_t pair_count(const std::string& a, const std::string& b) const;
};

/// Undirected weighted graph over tokens for one timepoint. No self-loops.
/// Tokens from the slice vocabulary that ended up with no retained edge are
/// kept in a separate isolated set for statistics.
class TemporalGraph {
public:
    TemporalGraph() = default;
    explicit TemporalGraph(std::string timepoint) : timepoint_(std::move(timepoint)) {}

    const std::string& timepoint() const { return timepoint_; }
    void set_timepoint(std::string t) { timepoint_ = std::move(t); }

    void add_edge(const std::string& a, const std::string& b, double weight);
    void remove_node(const std::string& node);

    bool has_node(const std::string& node) const { return adjacency_.count(node) > 0; }
    bool has_edge(const std::string& a, const std::string& b) const;
    double weight(const std::string& a, const std::string& b) const; // 0 if absent

    std::size_t node_count() const { return adjacency_.size(); }
    std::size_t edge_count() const;
    std::size_t degree(const std::string& node) const;
    double strength(const std::string& node) const; // weighted degree
    double total_weight() const;                    // each undirected edge once

    /// Nodes in lexicographic order; the canonical ordering used everywhere.
    std::vector<std::string> nodes() const;
    const std::map<std::string, double>& neighbors(const std::string& node) const;

    /// Visits each undirected edge once with a < b, lexicographic order.
    template <typename Fn>
    void for_each_edge(Fn&& fn) const {
        for (const auto& [a, nbrs] : adjacency_)
            for (const auto& [b, w] : nbrs)
                if (a < b) fn(a, b, w);
    }

    std::set<std::string>& isolated() { return isolated_; }
    const std::set<std::string>& isolated() const { return isolated_; }

private:
    std::string timepoint_;
    std::map<std::string, std::map<std::string, double>> adjacency_;
    std::set<std::string> isolated_;
};

CooccurrenceTable count_cooccurrence(const TimeSlice& slice);

/// ln(n_xy * N / (n_x * n_y)). Preconditions: n_xy >= 1, counts consistent.
double pmi(std::int64_t n_x, std::int64_t n_y, std::int64_t n_xy, std::int64_t total);

/// pmi normalized by self-information -ln(n_xy/N), bounded in [-1, 1].
/// The degenerate n_xy == N case (zero self-information) is defined as 1.
double npmi(std::int64_t n_x, std::int64_t n_y, std::int64_t n_xy, std::int64_t total);

/// Builds the NPMI-weighted graph for one slice. An edge is retained iff the
/// tokens co-occur at least once and their npmi exceeds weight_floor.
TemporalGraph build_gow(const TimeSlice& slice, double weight_floor = 0.0);

/// Edge-list TSV "a<TAB>b<TAB>weight" with 6-decimal weights, rows sorted.
void dump_graph(const TemporalGraph& graph, std::ostream& out);

} // namespace topicflow

#endif
