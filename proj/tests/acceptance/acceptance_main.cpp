// Exit-gate checks for the whole library: each criterion exercises one
// behavioral guarantee end to end, prints a single pass/fail line, and
// enforces its wall-clock budget. Run with the CLI binary path as argv[1].

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "temp_dir.hpp"
#include "topicflow/pipeline.hpp"
#include "topicflow/synthetic.hpp"

using namespace topicflow;
using testsupport::TempDir;
using testsupport::read_file;

namespace {

struct Criterion {
    bool ok = true;
    std::vector<std::string> details;

    void expect(bool cond, const std::string& what) {
        if (cond) return;
        ok = false;
        if (details.size() < 8) details.push_back(what);
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool approx(double a, double b, double tol = 1e-9) { return std::fabs(a - b) <= tol; }

std::string cli_path; // set from argv

// ---------------------------------------------------------------------------

void check_npmi(Criterion& c) {
    c.expect(npmi(2, 2, 2, 4) == 1.0, "perfect co-occurrence must score exactly 1");
    c.expect(npmi(3, 3, 3, 3) == 1.0, "saturated co-occurrence must score exactly 1");
    c.expect(npmi(2, 2, 1, 4) == 0.0, "independent pair must score 0");
    c.expect(approx(npmi(2, 2, 1, 8), 1.0 / 3.0, 1e-12), "npmi(2,2,1,8) must be 1/3");
    c.expect(pmi(2, 2, 1, 4) == 0.0, "pmi of an independent pair must be 0");
    c.expect(approx(pmi(2, 2, 2, 4), std::log(2.0), 1e-12), "pmi(2,2,2,4) must be ln 2");
    c.expect(approx(pmi(1, 1, 1, 4), std::log(4.0), 1e-12), "pmi(1,1,1,4) must be ln 4");

    std::mt19937 rng(411);
    for (int round = 0; round < 10000; ++round) {
        const std::int64_t total = 1 + static_cast<std::int64_t>(rng() % 500);
        const std::int64_t n_xy = 1 + static_cast<std::int64_t>(rng() % total);
        const std::int64_t n_x = n_xy + static_cast<std::int64_t>(rng() % (total - n_xy + 1));
        const std::int64_t n_y = n_xy + static_cast<std::int64_t>(rng() % (total - n_xy + 1));
        const double v = npmi(n_x, n_y, n_xy, total);
        c.expect(v >= -1.0 && v <= 1.0, "npmi out of [-1, 1]");
        if (n_x == n_xy && n_y == n_xy)
            c.expect(v == 1.0, "exclusive co-occurrence must score exactly 1");
        else
            c.expect(v < 1.0, "imperfect association must stay below 1");
        if (!c.ok) return;
    }
}

void check_modularity(Criterion& c) {
    // two unit triangles, one community each
    TemporalGraph tri2;
    for (const char* p : {"a", "d"}) {
        const std::string x = std::string(p) + "1", y = std::string(p) + "2", z = std::string(p) + "3";
        tri2.add_edge(x, y, 1.0);
        tri2.add_edge(y, z, 1.0);
        tri2.add_edge(x, z, 1.0);
    }
    c.expect(modularity(tri2, {{"a1", "a2", "a3"}, {"d1", "d2", "d3"}}) == 0.5,
             "two separate triangles must score exactly 0.5");
    TemporalGraph k3;
    k3.add_edge("a", "b", 1.0);
    k3.add_edge("b", "c", 1.0);
    k3.add_edge("a", "c", 1.0);
    c.expect(approx(modularity(k3, {{"a"}, {"b"}, {"c"}}), -1.0 / 3.0, 1e-12),
             "triangle split into singletons must score -1/3");

    std::mt19937 rng(412);
    for (int round = 0; round < 200; ++round) {
        const int n = 4 + static_cast<int>(rng() % 47);
        TemporalGraph g = oracle::random_graph(rng, n, 0.15);
        if (g.node_count() == 0) continue;
        // random partition over the actual nodes
        std::map<int, std::vector<std::string>> groups;
        for (const auto& node : g.nodes())
            groups[static_cast<int>(rng() % 5)].push_back(node);
        Partition partition;
        for (auto& [id, members] : groups) {
            (void)id;
            partition.push_back(std::move(members));
        }
        c.expect(approx(modularity(g, partition), oracle::naive_modularity(g, partition)),
                 "modularity disagrees with the double-loop reference");
        if (!c.ok) return;
    }
}

void check_clustering_coefficient(Criterion& c) {
    std::mt19937 rng(413);
    for (int round = 0; round < 100; ++round) {
        const int n = 5 + static_cast<int>(rng() % 96);
        TemporalGraph g = oracle::random_graph(rng, n, round % 2 ? 0.08 : 0.25);
        for (const auto& node : g.nodes()) {
            c.expect(clustering_coefficient(g, node) == oracle::triangle_clustering_coefficient(g, node),
                     "coefficient disagrees with explicit triangle counting at " + node);
            if (!c.ok) return;
        }
    }
}

TemporalGraph cliques_with_hubs(int k, int clique_size, int hubs) {
    TemporalGraph g;
    std::vector<std::string> members;
    for (int q = 0; q < k; ++q) {
        std::vector<std::string> clique;
        for (int i = 0; i < clique_size; ++i)
            clique.push_back("q" + std::to_string(q) + "m" + std::to_string(i));
        for (std::size_t a = 0; a < clique.size(); ++a)
            for (std::size_t b = a + 1; b < clique.size(); ++b)
                g.add_edge(clique[a], clique[b], 1.0);
        members.insert(members.end(), clique.begin(), clique.end());
    }
    for (int h = 0; h < hubs; ++h)
        for (const auto& m : members)
            g.add_edge("hub" + std::to_string(h), m, 1.0);
    return g;
}

void check_mcl(Criterion& c) {
    // every intermediate matrix stays column-stochastic
    TemporalGraph bridged = cliques_with_hubs(2, 4, 1);
    bool iterated = false;
    bool stochastic = true;
    std::function<void(const std::vector<double>&, std::size_t)> observer =
        [&](const std::vector<double>& matrix, std::size_t n) {
            iterated = true;
            for (std::size_t col = 0; col < n; ++col) {
                double sum = 0.0;
                for (std::size_t row = 0; row < n; ++row)
                    sum += matrix[row * n + col];
                if (!approx(sum, 1.0)) stochastic = false;
            }
        };
    mcl(bridged, MclParams{}, &observer);
    c.expect(iterated, "observer never saw an iteration");
    c.expect(stochastic, "a column sum drifted from 1");

    // two K4s joined by one bridge edge resolve to the two K4s
    TemporalGraph two_k4;
    for (const char* p : {"a", "b"})
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                two_k4.add_edge(std::string(p) + std::to_string(i), std::string(p) + std::to_string(j), 1.0);
    two_k4.add_edge("a0", "b0", 1.0);
    const MclOutcome outcome = mcl(two_k4, MclParams{});
    c.expect(outcome.converged, "bridged K4s must converge");
    const Partition expected{{"a0", "a1", "a2", "a3"}, {"b0", "b1", "b2", "b3"}};
    c.expect(outcome.clusters == expected, "bridged K4s must resolve into the two K4s");

    // clusters never span disconnected components
    std::mt19937 rng(414);
    for (int round = 0; round < 100; ++round) {
        const int side = 4 + static_cast<int>(rng() % 10);
        TemporalGraph g = oracle::random_two_component_graph(rng, side, 0.4);
        for (const auto& cluster : mcl(g, MclParams{}).clusters) {
            std::set<char> prefixes;
            for (const auto& node : cluster)
                prefixes.insert(node[0]);
            c.expect(prefixes.size() == 1, "a cluster spans two disconnected components");
            if (!c.ok) return;
        }
    }
}

void check_optimizer(Criterion& c) {
    for (int k = 2; k <= 5; ++k) {
        for (int hubs = 1; hubs <= 3; ++hubs) {
            const auto start = std::chrono::steady_clock::now();
            const TemporalGraph g = cliques_with_hubs(k, 6, hubs);
            const ClusteringResult result = find_optimal_clustering(g);
            const std::string tag = " (k=" + std::to_string(k) + ", hubs=" + std::to_string(hubs) + ")";

            std::set<std::string> removed(result.bridging_nodes.begin(), result.bridging_nodes.end());
            std::set<std::string> expected_hubs;
            for (int h = 0; h < hubs; ++h)
                expected_hubs.insert("hub" + std::to_string(h));
            c.expect(removed == expected_hubs, "removed set is not exactly the planted hubs" + tag);
            c.expect(result.clusters.size() == static_cast<std::size_t>(k),
                     "cluster count differs from the planted cliques" + tag);
            std::set<std::set<std::string>> found;
            for (const auto& cluster : result.clusters)
                found.insert(std::set<std::string>(cluster.begin(), cluster.end()));
            for (int q = 0; q < k; ++q) {
                std::set<std::string> clique;
                for (int i = 0; i < 6; ++i)
                    clique.insert("q" + std::to_string(q) + "m" + std::to_string(i));
                c.expect(found.count(clique) == 1, "a planted clique was not recovered intact" + tag);
            }

            const oracle::PrefixSearch brute = oracle::best_removal_prefix(g, MclParams{}, 0.5);
            c.expect(approx(result.modularity_q, brute.best_q),
                     "modularity differs from the brute-force prefix optimum" + tag);
            c.expect(removed.size() == brute.best_removed,
                     "removal count differs from the brute-force prefix optimum" + tag);
            const double elapsed = seconds_since(start);
            c.expect(elapsed < 10.0, "instance exceeded its 10 s budget" + tag);
            if (!c.ok) return;
        }
    }
}

std::vector<ClusterRef> make_side(int t, const std::vector<std::set<std::string>>& sets) {
    std::vector<ClusterRef> side;
    for (std::size_t i = 0; i < sets.size(); ++i)
        side.push_back({"t" + std::to_string(t), t, static_cast<int>(i), sets[i]});
    return side;
}

// all ways of grouping a subset of `universe` into at most three clusters
std::vector<std::vector<std::set<std::string>>> all_families(const std::vector<std::string>& universe) {
    std::set<std::set<std::set<std::string>>> canonical;
    const std::size_t n = universe.size();
    std::vector<int> slot(n, 0); // 0 = absent, 1..3 = cluster
    while (true) {
        std::map<int, std::set<std::string>> blocks;
        for (std::size_t i = 0; i < n; ++i)
            if (slot[i] > 0) blocks[slot[i]].insert(universe[i]);
        std::set<std::set<std::string>> family;
        for (auto& [id, members] : blocks) {
            (void)id;
            family.insert(std::move(members));
        }
        canonical.insert(std::move(family));
        std::size_t pos = 0;
        while (pos < n && slot[pos] == 3) slot[pos++] = 0;
        if (pos == n) break;
        ++slot[pos];
    }
    std::vector<std::vector<std::set<std::string>>> out;
    for (const auto& family : canonical)
        out.emplace_back(family.begin(), family.end());
    return out;
}

void check_transition_classifier(Criterion& c) {
    const double alpha = kDefaultAlpha;

    // worked step shapes
    {
        const auto prev = make_side(0, {{"a", "b", "c"}});
        const auto next = make_side(1, {{"a", "b", "c"}});
        const auto edges = classify_step(prev, next, alpha);
        c.expect(edges.size() == 1 && edges[0].kind == TransitionKind::unchanged,
                 "identical clusters must classify as unchanged");
    }
    {
        const auto edges = classify_step(make_side(0, {{"a", "b", "c", "d"}}),
                                         make_side(1, {{"a", "b"}, {"c", "d"}}), alpha);
        int splits = 0;
        for (const auto& e : edges)
            if (e.kind == TransitionKind::split) ++splits;
        c.expect(splits == 2, "an exact partition must classify as a two-way split");
    }
    {
        const auto edges = classify_step(make_side(0, {{"a", "b", "c"}}),
                                         make_side(1, {{"a", "b", "c", "d", "e", "f", "g"}}), alpha);
        c.expect(edges.size() == 1 && edges[0].kind == TransitionKind::absorbed,
                 "a subset flowing into a larger cluster must classify as absorbed");
    }
    {
        const auto edges = classify_step(make_side(0, {{"a", "b"}, {"c", "d"}}),
                                         make_side(1, {{"a", "b", "c", "d"}}), alpha);
        int merged = 0;
        for (const auto& e : edges)
            if (e.kind == TransitionKind::merged) ++merged;
        c.expect(merged == 2, "two exact constituents must produce two merge contributions");
    }

    // exhaustive sweep over every cluster family pair on small universes
    for (std::size_t n = 1; n <= 5 && c.ok; ++n) {
        std::vector<std::string> universe;
        for (std::size_t i = 0; i < n; ++i)
            universe.push_back("t" + std::to_string(i));
        const auto families = all_families(universe);
        for (const auto& prev_sets : families) {
            for (const auto& next_sets : families) {
                const auto prev = make_side(0, prev_sets);
                const auto next = make_side(1, next_sets);
                c.expect(oracle::same_edges(classify_step(prev, next, alpha),
                                            oracle::classify_reference(prev, next, alpha)),
                         "classification disagrees with the set-algebra reference (exhaustive, " +
                             std::to_string(n) + " tokens)");
                if (!c.ok) return;
            }
        }
    }

    // seeded random sweep for the next universe sizes up
    std::mt19937 rng(416);
    for (int n = 6; n <= 8; ++n) {
        for (int round = 0; round < 1200; ++round) {
            auto draw_side = [&](int t) {
                std::map<int, std::set<std::string>> blocks;
                for (int i = 0; i < n; ++i) {
                    const int slot = static_cast<int>(rng() % 5); // 0 = absent
                    if (slot > 0) blocks[slot].insert("t" + std::to_string(i));
                }
                std::vector<std::set<std::string>> sets;
                for (auto& [id, members] : blocks) {
                    (void)id;
                    sets.push_back(std::move(members));
                }
                return make_side(t, sets);
            };
            const auto prev = draw_side(0);
            const auto next = draw_side(1);
            c.expect(oracle::same_edges(classify_step(prev, next, alpha),
                                        oracle::classify_reference(prev, next, alpha)),
                     "classification disagrees with the set-algebra reference (random, " +
                         std::to_string(n) + " tokens)");
            if (!c.ok) return;
        }
    }
}

void check_reemergence(Criterion& c) {
    const std::set<std::string> topic{"x1", "x2", "x3"};
    const std::set<std::string> filler{"y1", "y2", "y3"};

    Timeline gapped;
    gapped.push_back(make_side(0, {topic, filler}));
    gapped.push_back(make_side(1, {filler}));
    gapped.push_back(make_side(2, {topic, filler}));
    gapped.push_back(make_side(3, {topic, filler}));
    gapped.push_back(make_side(4, {topic, filler}));
    const auto edges = classify_timeline(gapped);
    std::vector<TransitionEdge> revived;
    for (const auto& e : edges)
        if (e.kind == TransitionKind::re_emerged) revived.push_back(e);
    c.expect(revived.size() == 1, "exactly one re-emergence expected across the gap");
    if (revived.size() == 1) {
        c.expect(revived[0].gap == 2, "re-emergence across one missing timepoint must carry gap 2");
        c.expect(revived[0].from == std::optional(ClusterKey{0, 0}) &&
                     revived[0].to == std::optional(ClusterKey{2, 0}),
                 "re-emergence must link the disappearance to the revival");
    }
    // the revived cluster must not additionally count as newly emerged
    for (const auto& e : edges)
        if (e.kind == TransitionKind::emerged)
            c.expect(!(e.to == std::optional(ClusterKey{2, 0})),
                     "revived cluster must not also be reported as emerged");

    Timeline survived;
    for (int t = 0; t < 5; ++t)
        survived.push_back(make_side(t, {topic, filler}));
    for (const auto& e : classify_timeline(survived))
        c.expect(e.kind != TransitionKind::re_emerged && e.kind != TransitionKind::disappeared,
                 "a surviving topic must produce no gap events");

    // the scan horizon is honored
    Timeline wide;
    wide.push_back(make_side(0, {topic, filler}));
    wide.push_back(make_side(1, {filler}));
    wide.push_back(make_side(2, {filler}));
    wide.push_back(make_side(3, {topic, filler}));
    int within = 0, beyond = 0;
    for (const auto& e : classify_timeline(wide, kDefaultAlpha, 3))
        if (e.kind == TransitionKind::re_emerged) ++within;
    for (const auto& e : classify_timeline(wide, kDefaultAlpha, 2))
        if (e.kind == TransitionKind::re_emerged) ++beyond;
    c.expect(within == 1, "gap 3 must be found when the horizon allows it");
    c.expect(beyond == 0, "gap 3 must be ignored when the horizon is 2");
}

// maps each computed cluster to the best-overlapping planted cluster
std::map<ClusterKey, ClusterKey> jaccard_mapping(const Timeline& computed, const Timeline& planted) {
    std::map<ClusterKey, ClusterKey> mapping;
    for (std::size_t t = 0; t < computed.size() && t < planted.size(); ++t) {
        for (std::size_t i = 0; i < computed[t].size(); ++i) {
            double best = 0.0;
            int best_j = -1;
            for (std::size_t j = 0; j < planted[t].size(); ++j) {
                std::set<std::string> inter;
                std::set_intersection(computed[t][i].members.begin(), computed[t][i].members.end(),
                                      planted[t][j].members.begin(), planted[t][j].members.end(),
                                      std::inserter(inter, inter.end()));
                const std::size_t uni =
                    computed[t][i].members.size() + planted[t][j].members.size() - inter.size();
                const double jaccard = uni == 0 ? 0.0 : static_cast<double>(inter.size()) / uni;
                if (jaccard > best) {
                    best = jaccard;
                    best_j = static_cast<int>(j);
                }
            }
            if (best >= 0.5 && best_j >= 0)
                mapping[{static_cast<int>(t), static_cast<int>(i)}] = {static_cast<int>(t), best_j};
        }
    }
    return mapping;
}

using EdgeSig = std::tuple<int, int, int, int, int, int>; // kind, from(t,i), to(t,i), gap

std::multiset<EdgeSig> edge_signatures(const std::vector<TransitionEdge>& edges,
                                       const std::map<ClusterKey, ClusterKey>* translate) {
    std::multiset<EdgeSig> out;
    for (const auto& e : edges) {
        EdgeSig sig{static_cast<int>(e.kind), -1, -1, -1, -1, e.gap};
        bool mappable = true;
        auto put = [&](const std::optional<ClusterKey>& key, int slot) {
            if (!key) return;
            ClusterKey k = *key;
            if (translate) {
                auto it = translate->find(k);
                if (it == translate->end()) {
                    mappable = false;
                    return;
                }
                k = it->second;
            }
            if (slot == 0) {
                std::get<1>(sig) = k.timepoint_index;
                std::get<2>(sig) = k.cluster_index;
            } else {
                std::get<3>(sig) = k.timepoint_index;
                std::get<4>(sig) = k.cluster_index;
            }
        };
        put(e.from, 0);
        put(e.to, 1);
        if (mappable) out.insert(sig);
    }
    return out;
}

void check_planted_storyline(Criterion& c) {
    SyntheticSchedule s;
    s.seed = 20250819;
    s.timepoints = 15;
    s.docs_per_topic = 40;
    s.bridging_vocabulary = {"viral", "trending"};
    s.topics = {
        {"alpha", {"a1", "a2", "a3", "a4", "a5", "a6"}, {{0, 4}}},
        {"alphaone", {"a1", "a2", "a3"}, {{5, 14}}},
        {"alphatwo", {"a4", "a5", "a6"}, {{5, 14}}},
        {"beta", {"b1", "b2", "b3", "b4"}, {{0, 8}}},
        {"gamma", {"g1", "g2", "g3", "g4"}, {{0, 8}}},
        {"betagamma", {"b1", "b2", "b3", "b4", "g1", "g2", "g3", "g4"}, {{9, 14}}},
        {"delta", {"d1", "d2", "d3"}, {{0, 6}}},
        {"bigdelta",
         {"d1", "d2", "d3", "n1", "n2", "n3", "n4", "n5", "n6", "n7", "n8", "n9"},
         {{7, 14}}},
        {"omega", {"o1", "o2", "o3", "o4", "o5", "o6", "o7", "o8", "o9"}, {{0, 9}}},
        {"omegacore", {"o1", "o2", "o3"}, {{10, 14}}},
        {"rho", {"r1", "r2", "r3", "r4"}, {{0, 5}, {9, 14}}},
        {"nu", {"m1", "m2", "m3", "m4"}, {{3, 14}}},
    };
    s.events = {
        {"split", 5, {"alpha"}, {"alphaone", "alphatwo"}},
        {"merge", 9, {"beta", "gamma"}, {"betagamma"}},
        {"absorb", 7, {"delta"}, {"bigdelta"}},
        {"dissolve", 10, {"omega"}, {"omegacore"}},
        {"disappear", 6, {"rho"}, {}},
        {"re_emerge", 9, {"rho"}, {"rho"}},
        {"emerge", 3, {}, {"nu"}},
        {"unchanged", 2, {"beta"}, {"beta"}},
    };
    validate_schedule(s); // throws if the storyline does not produce all eight kinds

    const GroundTruth truth = schedule_ground_truth(s);
    std::set<TransitionKind> kinds;
    for (const auto& e : truth.edges)
        kinds.insert(e.kind);
    c.expect(kinds.size() == 8, "the storyline must exercise every transition kind");

    TempDir dir("storyline");
    const Corpus corpus = generate_synthetic_corpus(s);
    dump_corpus(corpus, (dir.path() / "corpus.jsonl").string(), CorpusFormat::jsonl);

    RunConfig config;
    config.input = dir.path() / "corpus.jsonl";
    config.out_dir = dir.path() / "out";
    // compare on full member sets: removed nodes count for cluster identity
    config.include_bridging_in_match = true;
    const RunReport report = run(config);
    c.expect(report.timepoints.size() == 15, "run must cover all fifteen timepoints");

    const auto mapping = jaccard_mapping(report.computed.timeline, truth.planted);
    const auto found = edge_signatures(report.computed.edges, &mapping);
    const auto expected = edge_signatures(truth.edges, nullptr);
    std::size_t matched = 0;
    for (const auto& sig : found)
        if (expected.count(sig)) ++matched;

    const double precision =
        report.computed.edges.empty() ? 0.0 : static_cast<double>(matched) / report.computed.edges.size();
    const double recall = expected.empty() ? 0.0 : static_cast<double>(matched) / expected.size();
    std::ostringstream scores;
    scores.precision(3);
    scores << "precision " << precision << ", recall " << recall << " (matched " << matched << "/"
           << expected.size() << " planted edges)";
    c.expect(precision >= 0.9, "transition precision below 0.9: " + scores.str());
    c.expect(recall >= 0.9, "transition recall below 0.9: " + scores.str());
}

void check_itemsets(Criterion& c) {
    const std::vector<LabelTransaction> t{
        {"d1", {"a", "b"}},
        {"d2", {"a", "b"}},
        {"d3", {"c"}},
    };
    c.expect(support({"a"}, t) == 2.0 / 3.0, "support({a}) must be 2/3");
    c.expect(support({}, t) == 1.0, "empty itemset must have support 1");
    c.expect(support({"c"}, t) == 1.0 / 3.0, "support({c}) must be 1/3");

    const auto frequent = frequent_itemsets(t); // default threshold: two occurrences
    c.expect(frequent.size() == 3, "exactly {a}, {b}, {a,b} must be frequent");
    for (const auto& [items, sup] : frequent) {
        (void)items;
        c.expect(sup == SupportValue{2, 3}, "every frequent itemset here occurs twice out of three");
    }
    const auto merged = merge_subset_itemsets(frequent);
    c.expect(merged.size() == 1 && merged[0].items == std::set<std::string>{"a", "b"},
             "subsets with equal count must fold into {a,b}");

    // merge result is independent of absorption order
    std::mt19937 rng(419);
    for (int round = 0; round < 50; ++round) {
        std::vector<LabelTransaction> random_t;
        const int docs = 6 + static_cast<int>(rng() % 10);
        for (int d = 0; d < docs; ++d) {
            LabelTransaction tx;
            tx.document_id = "d" + std::to_string(d);
            const int width = 1 + static_cast<int>(rng() % 3);
            for (int w = 0; w < width; ++w)
                tx.items.insert(std::string(1, static_cast<char>('a' + rng() % 5)));
            random_t.push_back(std::move(tx));
        }
        const auto mined = frequent_itemsets(random_t, 0.2);
        const auto production = merge_subset_itemsets(mined);

        // reference: absorb random pairs until no strict superset of equal
        // count remains, in a shuffled order
        std::vector<MergedTopic> reference;
        for (const auto& [items, sup] : mined)
            reference.push_back({items, sup});
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<std::size_t> order(reference.size());
            for (std::size_t i = 0; i < order.size(); ++i)
                order[i] = i;
            std::shuffle(order.begin(), order.end(), rng);
            for (std::size_t a : order) {
                for (std::size_t b : order) {
                    if (a == b) continue;
                    const auto& small = reference[a].items;
                    const auto& big = reference[b].items;
                    if (reference[a].support.count == reference[b].support.count &&
                        small.size() < big.size() &&
                        std::includes(big.begin(), big.end(), small.begin(), small.end())) {
                        reference.erase(reference.begin() + static_cast<std::ptrdiff_t>(a));
                        changed = true;
                        break;
                    }
                }
                if (changed) break;
            }
        }
        auto key = [](const std::vector<MergedTopic>& v) {
            std::set<std::set<std::string>> k;
            for (const auto& m : v)
                k.insert(m.items);
            return k;
        };
        c.expect(key(production) == key(reference), "merge outcome depends on absorption order");
        if (!c.ok) return;
    }
}

void check_cli_determinism(Criterion& c) {
    if (cli_path.empty()) {
        c.expect(false, "CLI binary path missing (pass it as argv[1])");
        return;
    }
    TempDir dir("cli");
    const std::string schedule = R"({
        "seed": 7,
        "timepoints": 5,
        "docs_per_topic": 30,
        "topics": [
            {"name": "fruit", "tokens": ["apple", "banana", "cherry", "mango"], "intervals": [[0, 4]]},
            {"name": "metal", "tokens": ["iron", "copper", "zinc"], "intervals": [[0, 4]]}
        ]
    })";
    const auto schedule_path = dir.file("schedule.json", schedule);
    const auto corpus_path = dir.path() / "corpus.jsonl";
    const auto log = dir.path() / "cli.log";

    auto shell = [&](const std::string& command) {
        const std::string full = command + " >> '" + log.string() + "' 2>&1";
        return std::system(full.c_str()) == 0;
    };
    c.expect(shell("'" + cli_path + "' synth --schedule '" + schedule_path.string() + "' --out '" +
                   corpus_path.string() + "' --truth '" + (dir.path() / "truth.json").string() + "'"),
             "synth invocation failed");
    for (const char* out : {"out1", "out2"})
        c.expect(shell("'" + cli_path + "' run --input '" + corpus_path.string() + "' --out '" +
                       (dir.path() / out).string() + "'"),
                 "run invocation failed");
    if (!c.ok) return;

    std::map<std::string, std::string> first, second;
    for (const auto& entry : std::filesystem::directory_iterator(dir.path() / "out1"))
        first[entry.path().filename().string()] = read_file(entry.path());
    for (const auto& entry : std::filesystem::directory_iterator(dir.path() / "out2"))
        second[entry.path().filename().string()] = read_file(entry.path());
    c.expect(!first.empty(), "first run produced no files");
    c.expect(first.size() == second.size(), "runs produced different file sets");
    for (const auto& [name, content] : first) {
        c.expect(second.count(name) == 1, "file missing from the second run: " + name);
        if (second.count(name))
            c.expect(second.at(name) == content, "file differs between runs: " + name);
    }
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) cli_path = argv[1];

    struct Entry {
        int number;
        const char* description;
        double budget; // seconds; 0 = no limit
        void (*fn)(Criterion&);
    };
    const std::vector<Entry> entries{
        {1, "npmi bounded in [-1, 1], exact on worked values", 1.0, check_npmi},
        {2, "modularity matches a direct double-loop computation", 5.0, check_modularity},
        {3, "clustering coefficient matches explicit triangle counting", 0.0, check_clustering_coefficient},
        {4, "mcl stays column-stochastic and never merges disconnected components", 5.0, check_mcl},
        {5, "hub removal recovers planted cliques at the brute-force prefix optimum", 0.0, check_optimizer},
        {6, "step classification agrees with a set-algebra reference", 0.0, check_transition_classifier},
        {7, "re-emergence bridges gaps and stays quiet for survivors", 0.0, check_reemergence},
        {8, "planted fifteen-day storyline recovered with precision/recall >= 0.9", 60.0,
         check_planted_storyline},
        {9, "itemset mining exact on worked values, merge order-independent", 0.0, check_itemsets},
        {10, "CLI runs are byte-identical across invocations", 0.0, check_cli_determinism},
    };

    int failures = 0;
    for (const auto& entry : entries) {
        Criterion criterion;
        const auto start = std::chrono::steady_clock::now();
        try {
            entry.fn(criterion);
        } catch (const std::exception& e) {
            criterion.expect(false, std::string("threw: ") + e.what());
        }
        const double elapsed = seconds_since(start);
        if (entry.budget > 0.0 && elapsed >= entry.budget)
            criterion.expect(false, "exceeded the " + std::to_string(entry.budget) + " s budget");
        std::printf("[%s] %2d %s (%.2f s)\n", criterion.ok ? "PASS" : "FAIL", entry.number,
                    entry.description, elapsed);
        for (const auto& detail : criterion.details)
            std::printf("         - %s\n", detail.c_str());
        if (!criterion.ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
