#include "topicflow/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace topicflow {

void MclParams::validate() const {
    if (expansion < 2) throw std::invalid_argument("MCL expansion must be >= 2");
    if (!(inflation > 1.0)) throw std::invalid_argument("MCL inflation must be > 1");
    if (!(prune_epsilon > 0.0)) throw std::invalid_argument("MCL prune_epsilon must be positive");
    if (!(convergence_tol > 0.0)) throw std::invalid_argument("MCL convergence_tol must be positive");
    if (max_iterations < 1) throw std::invalid_argument("MCL max_iterations must be positive");
}

double clustering_coefficient(const TemporalGraph& graph, const std::string& node) {
    const auto& nbrs = graph.neighbors(node); // throws on unknown node
    std::size_t k = nbrs.size();
    if (k <= 1) return 1.0; // sentinel; leaves cannot bridge
    std::size_t edges_among = 0;
    for (auto it = nbrs.begin(); it != nbrs.end(); ++it) {
        auto jt = it;
        for (++jt; jt != nbrs.end(); ++jt)
            if (graph.has_edge(it->first, jt->first)) ++edges_among;
    }
    return 2.0 * static_cast<double>(edges_among) / (static_cast<double>(k) * static_cast<double>(k - 1));
}

double modularity(const TemporalGraph& graph, const Partition& partition) {
    std::unordered_map<std::string, int> community;
    std::size_t covered = 0;
    for (std::size_t c = 0; c < partition.size(); ++c) {
        for (const auto& node : partition[c]) {
            if (!graph.has_node(node))
                throw std::invalid_argument("partition names node not in graph: " + node);
            if (!community.emplace(node, static_cast<int>(c)).second)
                throw std::invalid_argument("partition assigns node twice: " + node);
            ++covered;
        }
    }
    if (covered != graph.node_count())
        throw std::invalid_argument("partition does not cover the graph's nodes");

    double total = graph.total_weight();
    if (total == 0.0) return 0.0;

    std::vector<double> internal(partition.size(), 0.0);
    std::vector<double> volume(partition.size(), 0.0);
    graph.for_each_edge([&](const std::string& a, const std::string& b, double w) {
        int ca = community.at(a);
        int cb = community.at(b);
        if (ca == cb) internal[static_cast<std::size_t>(ca)] += w;
    });
    for (const auto& [node, c] : community) volume[static_cast<std::size_t>(c)] += graph.strength(node);

    double q = 0.0;
    for (std::size_t c = 0; c < partition.size(); ++c) {
        double frac = volume[c] / (2.0 * total);
        q += internal[c] / total - frac * frac;
    }
    return q;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b); // keep lowest index as root
        parent[static_cast<std::size_t>(b)] = a;
    }
};

void normalize_columns(std::vector<double>& m, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += m[i * n + j];
        if (sum <= 0.0) {
            m[j * n + j] = 1.0; // dead column, restore self-loop
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) m[i * n + j] /= sum;
    }
}

std::vector<double> matrix_power(const std::vector<double>& m, std::size_t n, int e) {
    std::vector<double> result = m;
    std::vector<double> next(n * n);
    for (int step = 1; step < e; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                double v = result[i * n + k];
                if (v == 0.0) continue;
                const double* row = &m[k * n];
                double* out = &next[i * n];
                for (std::size_t j = 0; j < n; ++j) out[j] += v * row[j];
            }
        }
        result.swap(next);
    }
    return result;
}

Partition canonicalize(std::vector<std::vector<std::string>> clusters) {
    for (auto& c : clusters) std::sort(c.begin(), c.end());
    std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    return clusters;
}

} // namespace

MclOutcome mcl(const TemporalGraph& graph, const MclParams& params,
               const std::function<void(const std::vector<double>&, std::size_t)>* observer) {
    params.validate();
    std::vector<std::string> nodes = graph.nodes();
    std::size_t n = nodes.size();
    if (n == 0) throw std::invalid_argument("mcl requires a nonempty graph");

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(nodes[i], i);

    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
    graph.for_each_edge([&](const std::string& a, const std::string& b, double w) {
        std::size_t i = index.at(a);
        std::size_t j = index.at(b);
        m[i * n + j] = w;
        m[j * n + i] = w;
    });
    normalize_columns(m, n);
    if (observer) (*observer)(m, n);

    MclOutcome outcome;
    outcome.converged = false;
    std::vector<double> prev;
    for (int it = 0; it < params.max_iterations; ++it) {
        prev = m;
        m = matrix_power(m, n, params.expansion);
        for (auto& v : m)
            if (v != 0.0) v = std::pow(v, params.inflation);
        normalize_columns(m, n);
        for (auto& v : m)
            if (v < params.prune_epsilon) v = 0.0;
        normalize_columns(m, n);
        outcome.iterations = it + 1;
        if (observer) (*observer)(m, n);

        double change = 0.0;
        for (std::size_t i = 0; i < n * n; ++i) change = std::max(change, std::abs(m[i] - prev[i]));
        if (change < params.convergence_tol) {
            outcome.converged = true;
            break;
        }
    }

    // Attractors carry positive diagonal mass; attractors reachable from one
    // another belong to the same attractor system and form one cluster.
    std::vector<std::size_t> attractors;
    for (std::size_t i = 0; i < n; ++i)
        if (m[i * n + i] > 0.0) attractors.push_back(i);

    UnionFind uf(attractors.size());
    for (std::size_t a = 0; a < attractors.size(); ++a) {
        for (std::size_t b = a + 1; b < attractors.size(); ++b) {
            std::size_t i = attractors[a];
            std::size_t j = attractors[b];
            if (m[i * n + j] > 0.0 || m[j * n + i] > 0.0) uf.unite(static_cast<int>(a), static_cast<int>(b));
        }
    }

    std::map<int, int> root_to_cluster; // ordered: lowest attractor index first
    for (std::size_t a = 0; a < attractors.size(); ++a) {
        int root = uf.find(static_cast<int>(a));
        if (!root_to_cluster.count(root)) {
            int next_id = static_cast<int>(root_to_cluster.size());
            root_to_cluster[root] = next_id;
        }
    }
    std::vector<int> attractor_cluster(attractors.size());
    for (std::size_t a = 0; a < attractors.size(); ++a)
        attractor_cluster[a] = root_to_cluster.at(uf.find(static_cast<int>(a)));

    std::vector<std::vector<std::string>> clusters(root_to_cluster.size());
    std::vector<bool> is_attractor(n, false);
    for (std::size_t a = 0; a < attractors.size(); ++a) {
        is_attractor[attractors[a]] = true;
        clusters[static_cast<std::size_t>(attractor_cluster[a])].push_back(nodes[attractors[a]]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (is_attractor[k]) continue;
        double best_mass = 0.0;
        int best_cluster = -1;
        for (std::size_t a = 0; a < attractors.size(); ++a) {
            double mass = m[attractors[a] * n + k];
            if (mass > best_mass ||
                (mass == best_mass && mass > 0.0 && attractor_cluster[a] < best_cluster)) {
                best_mass = mass;
                best_cluster = attractor_cluster[a];
            }
        }
        if (best_cluster >= 0) {
            clusters[static_cast<std::size_t>(best_cluster)].push_back(nodes[k]);
        } else {
            clusters.push_back({nodes[k]}); // no attractor mass; non-converged leftover
        }
    }

    outcome.clusters = canonicalize(std::move(clusters));
    return outcome;
}

std::vector<std::string> removal_order(const TemporalGraph& graph) {
    struct Candidate {
        std::string node;
        double coefficient;
        std::size_t degree;
    };
    std::vector<Candidate> candidates;
    for (const auto& node : graph.nodes()) {
        std::size_t k = graph.degree(node);
        if (k <= 1) continue;
        candidates.push_back({node, clustering_coefficient(graph, node), k});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.coefficient != b.coefficient) return a.coefficient < b.coefficient;
        if (a.degree != b.degree) return a.degree > b.degree;
        return a.node < b.node;
    });
    std::vector<std::string> order;
    order.reserve(candidates.size());
    for (auto& c : candidates) order.push_back(std::move(c.node));
    return order;
}

ClusteringResult find_optimal_clustering(const TemporalGraph& graph, const MclParams& params,
                                         double max_removal_fraction, int early_stop_patience) {
    params.validate();
    if (!(max_removal_fraction >= 0.0 && max_removal_fraction <= 1.0))
        throw std::invalid_argument("max_removal_fraction must be in [0, 1]");

    ClusteringResult result;
    result.timepoint = graph.timepoint();
    std::size_t n = graph.node_count();
    if (n == 0) {
        result.stats = compute_slice_stats(result, graph);
        return result;
    }

    MclOutcome base = mcl(graph, params);
    Partition best_clusters = base.clusters;
    double best_q = modularity(graph, base.clusters);
    bool best_converged = base.converged;
    std::size_t best_removed = 0;

    if (n >= 3) {
        std::vector<std::string> order = removal_order(graph);
        TemporalGraph working = graph;
        int non_improving = 0;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (working.node_count() - 1 < 3) break;
            if (static_cast<double>(i + 1) / static_cast<double>(n) > max_removal_fraction) break;
            working.remove_node(order[i]);
            MclOutcome out = mcl(working, params);
            double q = modularity(working, out.clusters);
            if (q > best_q) {
                best_q = q;
                best_clusters = out.clusters;
                best_converged = out.converged;
                best_removed = i + 1;
                non_improving = 0;
            } else {
                ++non_improving;
                if (early_stop_patience > 0 && non_improving >= early_stop_patience) break;
            }
        }
        result.bridging_nodes.assign(order.begin(), order.begin() + static_cast<long>(best_removed));
    }

    result.clusters = std::move(best_clusters);
    result.modularity_q = best_q;
    result.mcl_converged = best_converged;
    result = attach_bridging_membership(std::move(result), graph);
    result.stats = compute_slice_stats(result, graph);
    return result;
}

ClusteringResult attach_bridging_membership(ClusteringResult result, const TemporalGraph& original_graph) {
    std::unordered_map<std::string, int> cluster_of;
    for (std::size_t c = 0; c < result.clusters.size(); ++c)
        for (const auto& node : result.clusters[c]) cluster_of[node] = static_cast<int>(c);

    result.bridging_membership.clear();
    for (const auto& removed : result.bridging_nodes) {
        std::set<int>& attached = result.bridging_membership[removed]; // empty set = orphan
        for (const auto& [nbr, w] : original_graph.neighbors(removed)) {
            auto it = cluster_of.find(nbr);
            if (it != cluster_of.end()) attached.insert(it->second);
        }
    }
    return result;
}

SliceStats compute_slice_stats(const ClusteringResult& result, const TemporalGraph& original_graph) {
    SliceStats stats;
    std::size_t n = original_graph.node_count();
    if (n == 0) return stats;

    double sum_all = 0.0;
    for (const auto& node : original_graph.nodes()) sum_all += clustering_coefficient(original_graph, node);
    stats.mean_c_all = sum_all / static_cast<double>(n);

    if (!result.bridging_nodes.empty()) {
        double sum_removed = 0.0;
        for (const auto& node : result.bridging_nodes)
            sum_removed += clustering_coefficient(original_graph, node);
        stats.mean_c_removed = sum_removed / static_cast<double>(result.bridging_nodes.size());
    }

    TemporalGraph retained = original_graph;
    for (const auto& node : result.bridging_nodes) retained.remove_node(node);
    if (retained.node_count() > 0) {
        double sum_best = 0.0;
        for (const auto& node : retained.nodes()) sum_best += clustering_coefficient(retained, node);
        stats.mean_c_best = sum_best / static_cast<double>(retained.node_count());
    }

    stats.pct_removed = 100.0 * static_cast<double>(result.bridging_nodes.size()) / static_cast<double>(n);
    return stats;
}

} // namespace topicflow
