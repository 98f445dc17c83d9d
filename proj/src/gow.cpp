#include "topicflow/gow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace topicflow {

std::int64_t CooccurrenceTable::pair_count(const std::string& a, const std::string& b) const {
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto it = pair.find(key);
    return it == pair.end() ? 0 : it->second;
}

void TemporalGraph::add_edge(const std::string& a, const std::string& b, double weight) {
    if (a == b) throw std::invalid_argument("self-loop rejected: " + a);
    adjacency_[a][b] = weight;
    adjacency_[b][a] = weight;
}

void TemporalGraph::remove_node(const std::string& node) {
    auto it = adjacency_.find(node);
    if (it == adjacency_.end()) return;
    for (const auto& [nbr, w] : it->second) adjacency_[nbr].erase(node);
    adjacency_.erase(it);
}

bool TemporalGraph::has_edge(const std::string& a, const std::string& b) const {
    auto it = adjacency_.find(a);
    return it != adjacency_.end() && it->second.count(b) > 0;
}

double TemporalGraph::weight(const std::string& a, const std::string& b) const {
    auto it = adjacency_.find(a);
    if (it == adjacency_.end()) return 0.0;
    auto jt = it->second.find(b);
    return jt == it->second.end() ? 0.0 : jt->second;
}

std::size_t TemporalGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& [node, nbrs] : adjacency_) twice += nbrs.size();
    return twice / 2;
}

std::size_t TemporalGraph::degree(const std::string& node) const {
    auto it = adjacency_.find(node);
    return it == adjacency_.end() ? 0 : it->second.size();
}

double TemporalGraph::strength(const std::string& node) const {
    auto it = adjacency_.find(node);
    if (it == adjacency_.end()) return 0.0;
    double s = 0.0;
    for (const auto& [nbr, w] : it->second) s += w;
    return s;
}

double TemporalGraph::total_weight() const {
    double twice = 0.0;
    for (const auto& [node, nbrs] : adjacency_)
        for (const auto& [nbr, w] : nbrs) twice += w;
    return twice / 2.0;
}

std::vector<std::string> TemporalGraph::nodes() const {
    std::vector<std::string> out;
    out.reserve(adjacency_.size());
    for (const auto& [node, nbrs] : adjacency_) out.push_back(node);
    return out;
}

const std::map<std::string, double>& TemporalGraph::neighbors(const std::string& node) const {
    auto it = adjacency_.find(node);
    if (it == adjacency_.end()) throw std::invalid_argument("unknown node: " + node);
    return it->second;
}

CooccurrenceTable count_cooccurrence(const TimeSlice& slice) {
    CooccurrenceTable table;
    table.total_documents = static_cast<std::int64_t>(slice.documents.size());
    for (const auto& doc : slice.documents) {
        std::set<std::string> tokens = doc.token_set();
        for (const auto& t : tokens) ++table.unigram[t];
        for (auto it = tokens.begin(); it != tokens.end(); ++it) {
            auto jt = it;
            for (++jt; jt != tokens.end(); ++jt) ++table.pair[{*it, *jt}];
        }
    }
    return table;
}

namespace {

void check_counts(std::int64_t n_x, std::int64_t n_y, std::int64_t n_xy, std::int64_t total) {
    if (n_xy < 1 || n_x < n_xy || n_y < n_xy || total < n_x || total < n_y) {
        throw std::invalid_argument("inconsistent co-occurrence counts: n_x=" + std::to_string(n_x) +
                                    " n_y=" + std::to_string(n_y) + " n_xy=" + std::to_string(n_xy) +
                                    " N=" + std::to_string(total));
    }
}

} // namespace

double pmi(std::int64_t n_x, std::int64_t n_y, std::int64_t n_xy, std::int64_t total) {
    check_counts(n_x, n_y, n_xy, total);
    return std::log(static_cast<double>(n_xy) * static_cast<double>(total) /
                    (static_cast<double>(n_x) * static_cast<double>(n_y)));
}

double npmi(std::int64_t n_x, std::int64_t n_y, std::int64_t n_xy, std::int64_t total) {
    check_counts(n_x, n_y, n_xy, total);
    if (n_xy == total) return 1.0; // zero self-information, perfect association limit
    double self_information = std::log(static_cast<double>(total) / static_cast<double>(n_xy));
    // the two logs round independently, so the ratio can overshoot the
    // mathematical bounds by an ulp near -1
    return std::clamp(pmi(n_x, n_y, n_xy, total) / self_information, -1.0, 1.0);
}

TemporalGraph build_gow(const TimeSlice& slice, double weight_floor) {
    TemporalGraph graph(slice.timepoint);
    CooccurrenceTable table = count_cooccurrence(slice);
    for (const auto& [key, n_xy] : table.pair) {
        double w = npmi(table.unigram.at(key.first), table.unigram.at(key.second), n_xy,
                        table.total_documents);
        if (w > weight_floor) graph.add_edge(key.first, key.second, w);
    }
    for (const auto& token : slice.vocabulary) {
        if (!graph.has_node(token)) graph.isolated().insert(token);
    }
    return graph;
}

void dump_graph(const TemporalGraph& graph, std::ostream& out) {
    graph.for_each_edge([&](const std::string& a, const std::string& b, double w) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", w);
        out << a << '\t' << b << '\t' << buf << '\n';
    });
}

} // namespace topicflow
