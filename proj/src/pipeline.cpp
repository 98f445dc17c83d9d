#include "topicflow/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <thread>

namespace topicflow {

namespace {

struct SliceFailure {
    Stage stage = Stage::gow;
    std::string message;
};

CorpusFormat sniff_format(const RunConfig& config) {
    if (config.format)
        return *config.format;
    return config.input.extension() == ".tsv" ? CorpusFormat::tsv : CorpusFormat::jsonl;
}

Timeline computed_timeline(const std::vector<ClusteringResult>& results,
                           const std::vector<std::string>& labels, bool include_bridging) {
    Timeline timeline(results.size());
    for (std::size_t t = 0; t < results.size(); ++t) {
        for (std::size_t i = 0; i < results[t].clusters.size(); ++i) {
            ClusterRef ref;
            ref.timepoint = labels[t];
            ref.timepoint_index = static_cast<int>(t);
            ref.index = static_cast<int>(i);
            ref.members.insert(results[t].clusters[i].begin(), results[t].clusters[i].end());
            if (include_bridging)
                for (const auto& [token, attached] : results[t].bridging_membership)
                    if (attached.count(static_cast<int>(i)))
                        ref.members.insert(token);
            timeline[t].push_back(std::move(ref));
        }
    }
    return timeline;
}

TrackReport make_track(Timeline timeline, double alpha, int max_gap) {
    TrackReport track;
    track.timeline = std::move(timeline);
    // a single timepoint has no transitions; every cluster is a singleton
    if (track.timeline.size() >= 2)
        track.edges = classify_timeline(track.timeline, alpha, max_gap);
    track.flows = build_flows(track.edges, track.timeline);
    track.summary = flow_summary(track.flows);
    return track;
}

void write_track_json(JsonWriter& w, const TrackReport& track, const std::vector<std::string>& labels) {
    w.begin_object();
    w.key("edge_count");
    w.value(static_cast<std::int64_t>(track.edges.size()));
    w.key("edges_by_kind");
    w.begin_object();
    for (TransitionKind kind :
         {TransitionKind::unchanged, TransitionKind::absorbed, TransitionKind::dissolved,
          TransitionKind::split, TransitionKind::merged, TransitionKind::disappeared,
          TransitionKind::emerged, TransitionKind::re_emerged}) {
        std::int64_t n = 0;
        for (const auto& e : track.edges)
            if (e.kind == kind)
                ++n;
        w.key(to_string(kind));
        w.value(n);
    }
    w.end_object();
    w.key("flow_count");
    w.value(track.summary.flow_count);
    w.key("mean_flow_length");
    w.value(track.summary.mean_length);
    w.key("singletons");
    w.begin_array();
    for (const auto& key : track.flows.singletons) {
        w.begin_object();
        w.key("t");
        w.value(labels[static_cast<std::size_t>(key.timepoint_index)]);
        w.key("i");
        w.value(key.cluster_index);
        w.end_object();
    }
    w.end_array();
    w.end_object();
}

} // namespace

const char* to_string(Stage stage) {
    switch (stage) {
    case Stage::corpus: return "corpus";
    case Stage::gow: return "gow";
    case Stage::clustering: return "clustering";
    case Stage::transitions: return "transitions";
    case Stage::itemsets: return "itemsets";
    case Stage::exports: return "exports";
    }
    return "unknown";
}

int effective_threads(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1)
        n = 1;
    if (const char* env = std::getenv("TOPICFLOW_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0)
            n = std::min(n, static_cast<int>(cap));
    }
    return n;
}

RunReport run(const RunConfig& config) {
    config.mcl.validate();
    if (!(config.alpha > 0.0) || !(config.alpha <= 1.0))
        throw StageError(Stage::transitions, "alpha must be in (0, 1]");
    if (config.min_support > 1.0)
        throw StageError(Stage::itemsets, "min_support must be in (0, 1]");

    RunReport report;

    // corpus
    Corpus corpus;
    std::vector<TimeSlice> slices;
    try {
        corpus = load_corpus(config.input, sniff_format(config));
        slices = partition_by_timepoint(corpus, config.granularity);
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(Stage::corpus, e.what());
    }
    for (const auto& slice : slices)
        report.timepoints.push_back(slice.timepoint);

    // per-slice graph build + clustering, parallel map with stable output slots
    report.results.resize(slices.size());
    report.slices.resize(slices.size());
    {
        std::vector<std::optional<SliceFailure>> failures(slices.size());
        std::atomic<std::size_t> cursor{0};
        auto worker = [&] {
            for (std::size_t i = cursor.fetch_add(1); i < slices.size(); i = cursor.fetch_add(1)) {
                TemporalGraph graph;
                try {
                    graph = build_gow(slices[i], config.weight_floor);
                } catch (const std::exception& e) {
                    failures[i] = SliceFailure{Stage::gow, slices[i].timepoint + ": " + e.what()};
                    continue;
                }
                try {
                    report.results[i] = find_optimal_clustering(
                        graph, config.mcl, config.max_removal_fraction, config.early_stop_patience);
                    report.results[i].timepoint = slices[i].timepoint;
                } catch (const std::exception& e) {
                    failures[i] = SliceFailure{Stage::clustering, slices[i].timepoint + ": " + e.what()};
                    continue;
                }
                SliceSummary& sum = report.slices[i];
                sum.timepoint = slices[i].timepoint;
                sum.documents = static_cast<int>(slices[i].documents.size());
                sum.nodes = static_cast<int>(graph.node_count() + graph.isolated().size());
                sum.clusters = static_cast<int>(report.results[i].clusters.size());
                sum.q = report.results[i].modularity_q;
                sum.stats = report.results[i].stats;
            }
        };
        const int nthreads = std::min(
            effective_threads(config.threads),
            static_cast<int>(std::max<std::size_t>(slices.size(), 1)));
        std::vector<std::thread> pool;
        for (int w = 1; w < nthreads; ++w)
            pool.emplace_back(worker);
        worker();
        for (auto& th : pool)
            th.join();
        for (const auto& failure : failures)
            if (failure)
                throw StageError(failure->stage, failure->message);
    }

    // transitions, computed track
    try {
        report.computed = make_track(
            computed_timeline(report.results, report.timepoints, config.include_bridging_in_match),
            config.alpha, config.max_gap);
    } catch (const std::exception& e) {
        throw StageError(Stage::transitions, e.what());
    }

    // annotated track, only when the corpus carries labels
    if (corpus.has_labels()) {
        Timeline annotated;
        try {
            annotated = annotated_timeline(slices, config.min_support, false, &report.merged_topics);
        } catch (const std::exception& e) {
            throw StageError(Stage::itemsets, e.what());
        }
        try {
            report.annotated = make_track(std::move(annotated), config.alpha, config.max_gap);
        } catch (const std::exception& e) {
            throw StageError(Stage::transitions, e.what());
        }
    }

    // exports: nothing is written before this point, and a failure removes
    // whatever was already written so the directory never holds partial runs
    std::vector<std::filesystem::path> written;
    auto target = [&](const char* name) {
        written.push_back(config.out_dir / name);
        return written.back();
    };
    try {
        std::filesystem::create_directories(config.out_dir);
        write_clusters_json(target("clusters.json"), report.slices, report.results);
        write_transitions_json(target("transitions.json"), report.computed.edges, report.timepoints);
        write_flows_json(target("flows.json"), report.computed.flows);
        write_merged_topics_json(target("merged_topics.json"), report.merged_topics);
        write_stats_tsv(target("stats.tsv"), report.slices);
        write_progression(target("progression_computed.dot"), target("progression_computed.svg"),
                          make_chart_track("computed", report.timepoints, report.computed.timeline,
                                           report.computed.edges, report.computed.flows));
        const TrackReport empty_track;
        const TrackReport& annotated = report.annotated ? *report.annotated : empty_track;
        Timeline annotated_axis = annotated.timeline;
        annotated_axis.resize(report.timepoints.size()); // full date axis even without labels
        write_progression(target("progression_annotated.dot"), target("progression_annotated.svg"),
                          make_chart_track("annotated", report.timepoints, annotated_axis,
                                           annotated.edges, annotated.flows));
        if (report.annotated) {
            write_annotated_clusters_json(target("clusters_annotated.json"), report.timepoints,
                                          report.annotated->timeline);
            write_transitions_json(target("transitions_annotated.json"), report.annotated->edges,
                                   report.timepoints);
            write_flows_json(target("flows_annotated.json"), report.annotated->flows);
        }
        write_report_json(target("report.json"), report);
    } catch (const std::exception& e) {
        for (const auto& path : written) {
            std::error_code ec;
            std::filesystem::remove(path, ec);
        }
        throw StageError(Stage::exports, e.what());
    }

    return report;
}

void write_report_json(const std::filesystem::path& path, const RunReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    JsonWriter w(out);
    w.begin_object();
    w.key("timepoints");
    w.begin_array();
    for (const auto& tp : report.timepoints)
        w.value(tp);
    w.end_array();
    w.key("slices");
    w.begin_array();
    for (const auto& s : report.slices) {
        w.begin_object();
        w.key("timepoint");
        w.value(s.timepoint);
        w.key("documents");
        w.value(s.documents);
        w.key("nodes");
        w.value(s.nodes);
        w.key("clusters");
        w.value(s.clusters);
        w.key("Q");
        w.value(s.q);
        w.key("mean_c_removed");
        if (s.stats.mean_c_removed)
            w.value(*s.stats.mean_c_removed);
        else
            w.null();
        w.key("mean_c_all");
        if (s.stats.mean_c_all)
            w.value(*s.stats.mean_c_all);
        else
            w.null();
        w.key("mean_c_best");
        if (s.stats.mean_c_best)
            w.value(*s.stats.mean_c_best);
        else
            w.null();
        w.key("pct_removed");
        w.value(s.stats.pct_removed);
        w.end_object();
    }
    w.end_array();
    w.key("computed");
    write_track_json(w, report.computed, report.timepoints);
    w.key("annotated");
    if (report.annotated)
        write_track_json(w, *report.annotated, report.timepoints);
    else
        w.null();
    w.key("merged_topic_count");
    w.value(static_cast<std::int64_t>(report.merged_topics.size()));
    w.end_object();
    w.finish();
}

} // namespace topicflow
