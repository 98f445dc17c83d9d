#include "topicflow/transitions.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace topicflow {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("alpha must be in (0, 1]");
}

std::size_t intersection_size(const std::set<std::string>& x, const std::set<std::string>& y) {
    std::size_t n = 0;
    auto ix = x.begin();
    auto iy = y.begin();
    while (ix != x.end() && iy != y.end()) {
        if (*ix < *iy)
            ++ix;
        else if (*iy < *ix)
            ++iy;
        else {
            ++n;
            ++ix;
            ++iy;
        }
    }
    return n;
}

int kind_rank(TransitionKind k) { return static_cast<int>(k); }

// Canonical order: anchor on the earlier endpoint, then kind, then the far
// endpoint. Gives a stable serialization that flows can index into.
std::tuple<int, int, int, int, int> edge_sort_key(const TransitionEdge& e) {
    const int a_t = e.from ? e.from->timepoint_index : e.to->timepoint_index;
    const int a_i = e.from ? e.from->cluster_index : e.to->cluster_index;
    const int b_t = e.to ? e.to->timepoint_index : std::numeric_limits<int>::max();
    const int b_i = e.to ? e.to->cluster_index : std::numeric_limits<int>::max();
    return {a_t, a_i, kind_rank(e.kind), b_t, b_i};
}

struct DisjointSet {
    std::vector<int> parent;

    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (a > b)
            std::swap(a, b);
        parent[b] = a;
    }
};

} // namespace

const char* to_string(TransitionKind kind) {
    switch (kind) {
    case TransitionKind::unchanged: return "unchanged";
    case TransitionKind::absorbed: return "absorbed";
    case TransitionKind::dissolved: return "dissolved";
    case TransitionKind::split: return "split";
    case TransitionKind::merged: return "merged";
    case TransitionKind::disappeared: return "disappeared";
    case TransitionKind::emerged: return "emerged";
    case TransitionKind::re_emerged: return "re_emerged";
    }
    throw std::invalid_argument("unknown transition kind");
}

Overlap overlap(const std::set<std::string>& x, const std::set<std::string>& y) {
    if (x.empty() || y.empty())
        throw std::invalid_argument("overlap requires non-empty clusters");
    const auto common = static_cast<double>(intersection_size(x, y));
    return {common / static_cast<double>(x.size()), common / static_cast<double>(y.size())};
}

std::vector<TransitionEdge> classify_step(const std::vector<ClusterRef>& prev,
                                          const std::vector<ClusterRef>& next, double alpha) {
    check_alpha(alpha);

    const std::size_t np = prev.size();
    const std::size_t nn = next.size();
    std::vector<std::vector<Overlap>> ov(np, std::vector<Overlap>(nn));
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < nn; ++j)
            ov[i][j] = overlap(prev[i].members, next[j].members);

    std::vector<TransitionEdge> edges;
    std::vector<bool> prev_covered(np, false);
    std::vector<bool> next_covered(nn, false);

    auto emit = [&](std::optional<std::size_t> i, std::optional<std::size_t> j, TransitionKind kind) {
        TransitionEdge e;
        e.kind = kind;
        if (i) {
            e.from = ClusterKey{prev[*i].timepoint_index, prev[*i].index};
            prev_covered[*i] = true;
        }
        if (j) {
            e.to = ClusterKey{next[*j].timepoint_index, next[*j].index};
            next_covered[*j] = true;
        }
        if (i && j) {
            e.overlap_forward = ov[*i][*j].forward;
            e.overlap_backward = ov[*i][*j].backward;
        }
        edges.push_back(std::move(e));
    };

    for (std::size_t i = 0; i < np; ++i) {
        // unchanged: some next cluster matches in both directions
        std::size_t best = nn;
        for (std::size_t j = 0; j < nn; ++j)
            if (ov[i][j].forward >= alpha && ov[i][j].backward >= alpha)
                if (best == nn || ov[i][j].forward > ov[i][best].forward)
                    best = j;
        if (best != nn) {
            emit(i, best, TransitionKind::unchanged);
            continue;
        }

        // absorbed: pushed forward into a bigger cluster
        for (std::size_t j = 0; j < nn; ++j)
            if (ov[i][j].forward >= alpha)
                if (best == nn || ov[i][j].forward > ov[i][best].forward)
                    best = j;
        if (best != nn) {
            emit(i, best, TransitionKind::absorbed);
            continue;
        }

        // split: several next clusters each dominated by this one, jointly
        // covering most of it
        std::vector<std::size_t> parts;
        std::set<std::string> covered;
        for (std::size_t j = 0; j < nn; ++j) {
            if (ov[i][j].backward < alpha)
                continue;
            parts.push_back(j);
            std::set_intersection(prev[i].members.begin(), prev[i].members.end(),
                                  next[j].members.begin(), next[j].members.end(),
                                  std::inserter(covered, covered.end()));
        }
        if (parts.size() >= 2 &&
            static_cast<double>(covered.size()) / static_cast<double>(prev[i].members.size()) >= alpha) {
            for (std::size_t j : parts)
                emit(i, j, TransitionKind::split);
            continue;
        }

        // dissolved: survives only as the dominant part of something smaller
        for (std::size_t j = 0; j < nn; ++j)
            if (ov[i][j].backward >= alpha)
                if (best == nn || ov[i][j].backward > ov[i][best].backward)
                    best = j;
        if (best != nn)
            emit(i, best, TransitionKind::dissolved);
    }

    // merged: a next cluster built mostly out of several prev clusters; these
    // edges coexist with the constituents' own forward edges
    for (std::size_t j = 0; j < nn; ++j) {
        std::vector<std::size_t> sources;
        std::set<std::string> covered;
        for (std::size_t i = 0; i < np; ++i) {
            if (ov[i][j].forward < alpha)
                continue;
            sources.push_back(i);
            std::set_intersection(prev[i].members.begin(), prev[i].members.end(),
                                  next[j].members.begin(), next[j].members.end(),
                                  std::inserter(covered, covered.end()));
        }
        if (sources.size() >= 2 &&
            static_cast<double>(covered.size()) / static_cast<double>(next[j].members.size()) >= alpha)
            for (std::size_t i : sources)
                emit(i, j, TransitionKind::merged);
    }

    for (std::size_t i = 0; i < np; ++i)
        if (!prev_covered[i])
            emit(i, std::nullopt, TransitionKind::disappeared);
    for (std::size_t j = 0; j < nn; ++j)
        if (!next_covered[j])
            emit(std::nullopt, j, TransitionKind::emerged);

    return edges;
}

std::vector<TransitionEdge> detect_reemergence(const std::vector<TransitionEdge>& step_edges,
                                               const Timeline& timeline, double alpha, int max_gap) {
    check_alpha(alpha);
    if (max_gap == 1)
        throw std::invalid_argument("max_gap must be >= 2 (or <= 0 for unbounded)");

    std::map<ClusterKey, const ClusterRef*> refs;
    for (const auto& slice : timeline)
        for (const auto& c : slice)
            refs[{c.timepoint_index, c.index}] = &c;

    std::vector<ClusterKey> disappeared;
    std::set<ClusterKey> emerged;
    for (const auto& e : step_edges) {
        if (e.kind == TransitionKind::disappeared)
            disappeared.push_back(*e.from);
        else if (e.kind == TransitionKind::emerged)
            emerged.insert(*e.to);
    }

    // Earliest disappearance gets first pick; ties resolved by member order.
    std::sort(disappeared.begin(), disappeared.end(), [&](const ClusterKey& a, const ClusterKey& b) {
        if (a.timepoint_index != b.timepoint_index)
            return a.timepoint_index < b.timepoint_index;
        const auto& ma = refs.at(a)->members;
        const auto& mb = refs.at(b)->members;
        if (ma != mb)
            return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(), mb.end());
        return a.cluster_index < b.cluster_index;
    });

    const int last = static_cast<int>(timeline.size()) - 1;
    std::vector<TransitionEdge> found;
    for (const ClusterKey& x : disappeared) {
        const ClusterRef& ref = *refs.at(x);
        const int limit = max_gap <= 0 ? last : std::min(last, x.timepoint_index + max_gap);
        bool matched = false;
        for (int t = x.timepoint_index + 2; t <= limit && !matched; ++t) {
            for (const ClusterRef& cand : timeline[static_cast<std::size_t>(t)]) {
                const ClusterKey key{cand.timepoint_index, cand.index};
                if (!emerged.count(key))
                    continue;
                const Overlap o = overlap(ref.members, cand.members);
                if (o.forward < alpha || o.backward < alpha)
                    continue;
                TransitionEdge e;
                e.from = x;
                e.to = key;
                e.kind = TransitionKind::re_emerged;
                e.overlap_forward = o.forward;
                e.overlap_backward = o.backward;
                e.gap = t - x.timepoint_index;
                found.push_back(std::move(e));
                emerged.erase(key); // one re-emergence per emerged cluster
                matched = true;
                break;
            }
        }
    }
    return found;
}

std::vector<TransitionEdge> classify_timeline(const Timeline& timeline, double alpha, int max_gap) {
    check_alpha(alpha);

    std::vector<TransitionEdge> edges;
    const std::vector<ClusterRef> empty;
    for (std::size_t t = 0; t < timeline.size(); ++t) {
        const std::vector<ClusterRef>& prev = t == 0 ? empty : timeline[t - 1];
        auto step = classify_step(prev, timeline[t], alpha);
        edges.insert(edges.end(), std::make_move_iterator(step.begin()), std::make_move_iterator(step.end()));
    }

    auto revivals = detect_reemergence(edges, timeline, alpha, max_gap);
    if (!revivals.empty()) {
        std::set<ClusterKey> revived;
        for (const auto& e : revivals)
            revived.insert(*e.to);
        std::erase_if(edges, [&](const TransitionEdge& e) {
            return e.kind == TransitionKind::emerged && revived.count(*e.to) > 0;
        });
        edges.insert(edges.end(), std::make_move_iterator(revivals.begin()),
                     std::make_move_iterator(revivals.end()));
    }

    std::sort(edges.begin(), edges.end(),
              [](const TransitionEdge& a, const TransitionEdge& b) { return edge_sort_key(a) < edge_sort_key(b); });
    return edges;
}

FlowResult build_flows(const std::vector<TransitionEdge>& edges, const Timeline& timeline) {
    std::map<ClusterKey, int> ids;
    std::vector<ClusterKey> keys;
    for (const auto& slice : timeline)
        for (const auto& c : slice) {
            ClusterKey key{c.timepoint_index, c.index};
            ids.emplace(key, static_cast<int>(keys.size()));
            keys.push_back(key);
        }

    auto binds = [](TransitionKind k) {
        return k != TransitionKind::disappeared && k != TransitionKind::emerged;
    };

    DisjointSet dsu(keys.size());
    for (const auto& e : edges)
        if (e.from && e.to && binds(e.kind))
            dsu.unite(ids.at(*e.from), ids.at(*e.to));

    std::map<int, std::vector<ClusterKey>> components;
    for (std::size_t k = 0; k < keys.size(); ++k)
        components[dsu.find(static_cast<int>(k))].push_back(keys[k]);

    std::set<ClusterKey> emerged;
    for (const auto& e : edges)
        if (e.kind == TransitionKind::emerged)
            emerged.insert(*e.to);

    FlowResult result;
    std::vector<Flow> flows;
    for (auto& [root_id, members] : components) {
        if (members.size() == 1) {
            result.singletons.push_back(members.front());
            continue;
        }
        std::sort(members.begin(), members.end());
        Flow flow;
        flow.members = members;
        bool have_root = false;
        for (const ClusterKey& key : flow.members)
            if (emerged.count(key)) {
                flow.root = key;
                have_root = true;
                break;
            }
        if (!have_root)
            flow.root = flow.members.front(); // every flow starts somewhere, even if only via re-emergence
        std::set<int> timepoints;
        for (const ClusterKey& key : flow.members)
            timepoints.insert(key.timepoint_index);
        flow.length = static_cast<int>(timepoints.size());
        flows.push_back(std::move(flow));
    }

    std::sort(flows.begin(), flows.end(), [](const Flow& a, const Flow& b) { return a.root < b.root; });
    std::set<ClusterKey> in_flow;
    for (std::size_t f = 0; f < flows.size(); ++f) {
        flows[f].id = static_cast<int>(f);
        for (const ClusterKey& key : flows[f].members)
            in_flow.insert(key);
    }

    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& edge = edges[e];
        const ClusterKey anchor = edge.from ? *edge.from : *edge.to;
        if (!in_flow.count(anchor))
            continue;
        for (auto& flow : flows)
            if (std::binary_search(flow.members.begin(), flow.members.end(), anchor)) {
                flow.edge_indices.push_back(static_cast<int>(e));
                break;
            }
    }

    std::sort(result.singletons.begin(), result.singletons.end());
    result.flows = std::move(flows);
    return result;
}

FlowSummary flow_summary(const FlowResult& flows) {
    FlowSummary s;
    s.flow_count = static_cast<int>(flows.flows.size());
    s.singleton_count = static_cast<int>(flows.singletons.size());
    if (!flows.flows.empty()) {
        double total = 0.0;
        for (const auto& f : flows.flows)
            total += f.length;
        s.mean_length = total / static_cast<double>(flows.flows.size());
    }
    return s;
}

} // namespace topicflow
