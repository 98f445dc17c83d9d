// topicflow — trace how topics in a time-stamped document stream emerge,
// split, merge, disappear, and return.
//
// Subcommands:
//   run    full batch over a corpus, writes every artifact into --out
//   synth  generate a corpus from a planted schedule (plus its ground truth)
//   stats  recompute stats.tsv from a saved clusters.json
//   chart  re-render the progression charts from saved JSON, no re-clustering

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "topicflow/pipeline.hpp"
#include "topicflow/synthetic.hpp"

namespace fs = std::filesystem;
using namespace topicflow;

namespace {

int cmd_run(const RunConfig& config) {
    const RunReport report = run(config);
    std::cout << "timepoints: " << report.timepoints.size() << "\n";
    std::cout << "computed: " << report.computed.summary.flow_count << " flows, mean length "
              << JsonWriter::fixed6(report.computed.summary.mean_length) << ", "
              << report.computed.flows.singletons.size() << " singletons\n";
    if (report.annotated)
        std::cout << "annotated: " << report.annotated->summary.flow_count << " flows, mean length "
                  << JsonWriter::fixed6(report.annotated->summary.mean_length) << ", "
                  << report.annotated->flows.singletons.size() << " singletons\n";
    std::cout << "artifacts written to " << config.out_dir.string() << "\n";
    return 0;
}

int cmd_synth(const fs::path& schedule_path, fs::path corpus_path, fs::path truth_path,
              const std::string& format) {
    const SyntheticSchedule schedule = load_schedule(schedule_path);
    validate_schedule(schedule);
    const Corpus corpus = generate_synthetic_corpus(schedule);
    if (truth_path.empty())
        truth_path = corpus_path.parent_path() / "ground_truth.json";
    if (!corpus_path.parent_path().empty())
        fs::create_directories(corpus_path.parent_path());
    dump_corpus(corpus, corpus_path, format == "tsv" ? CorpusFormat::tsv : CorpusFormat::jsonl);
    write_ground_truth(truth_path, schedule_ground_truth(schedule));
    std::cout << corpus.documents.size() << " documents -> " << corpus_path.string() << "\n";
    std::cout << "ground truth -> " << truth_path.string() << "\n";
    return 0;
}

int cmd_stats(const fs::path& dir) {
    const SavedClusters saved = read_clusters_json(dir / "clusters.json");
    write_stats_tsv(dir / "stats.tsv", saved.summaries);
    std::cout << "stats.tsv rebuilt from " << saved.summaries.size() << " timepoints\n";
    return 0;
}

// Rebuilds flow membership from saved edge indices: a flow's clusters are the
// endpoints of its edges.
FlowResult flows_from_saved(const std::vector<SavedFlow>& saved, const std::vector<TransitionEdge>& edges) {
    FlowResult result;
    for (const auto& sf : saved) {
        Flow flow;
        flow.id = sf.id;
        flow.edge_indices = sf.edge_indices;
        flow.length = sf.length;
        std::set<ClusterKey> members;
        for (int idx : sf.edge_indices) {
            if (idx < 0 || static_cast<std::size_t>(idx) >= edges.size())
                throw std::runtime_error("flows.json: edge index " + std::to_string(idx) +
                                         " outside transitions.json");
            const auto& e = edges[static_cast<std::size_t>(idx)];
            if (e.from)
                members.insert(*e.from);
            if (e.to)
                members.insert(*e.to);
        }
        flow.members.assign(members.begin(), members.end());
        if (!flow.members.empty())
            flow.root = flow.members.front();
        result.flows.push_back(std::move(flow));
    }
    return result;
}

void render_track(const fs::path& dir, const std::string& title, const char* clusters_file,
                  const char* transitions_file, const char* flows_file,
                  const std::vector<std::string>& axis) {
    const SavedClusters saved = read_clusters_json(dir / clusters_file);
    std::vector<std::string> labels;
    for (const auto& s : saved.summaries)
        labels.push_back(s.timepoint);
    const auto edges = read_transitions_json(dir / transitions_file, labels);
    const auto flows = flows_from_saved(read_flows_json(dir / flows_file), edges);
    Timeline timeline = saved.timeline;
    timeline.resize(axis.size());
    write_progression(dir / ("progression_" + title + ".dot"), dir / ("progression_" + title + ".svg"),
                      make_chart_track(title, axis, timeline, edges, flows));
}

int cmd_chart(const fs::path& dir) {
    const SavedClusters computed = read_clusters_json(dir / "clusters.json");
    std::vector<std::string> axis;
    for (const auto& s : computed.summaries)
        axis.push_back(s.timepoint);

    render_track(dir, "computed", "clusters.json", "transitions.json", "flows.json", axis);
    if (fs::exists(dir / "clusters_annotated.json"))
        render_track(dir, "annotated", "clusters_annotated.json", "transitions_annotated.json",
                     "flows_annotated.json", axis);
    else
        write_progression(dir / "progression_annotated.dot", dir / "progression_annotated.svg",
                          make_chart_track("annotated", axis, Timeline(axis.size()), {}, {}));
    std::cout << "charts rebuilt in " << dir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"temporal topic-flow tracing over document streams"};
    app.require_subcommand(1);

    // run
    RunConfig config;
    std::string granularity = "day";
    std::string format = "auto";
    auto* run_cmd = app.add_subcommand("run", "cluster a corpus and trace topic flows");
    run_cmd->add_option("--input", config.input, "corpus file (.jsonl or .tsv)")->required();
    run_cmd->add_option("--out", config.out_dir, "output directory")->required();
    run_cmd->add_option("--alpha", config.alpha, "overlap threshold for transition matching")
        ->capture_default_str();
    run_cmd->add_option("--inflation", config.mcl.inflation, "MCL inflation exponent")
        ->capture_default_str();
    run_cmd->add_option("--weight-floor", config.weight_floor, "minimum NPMI an edge must exceed")
        ->capture_default_str();
    run_cmd->add_option("--granularity", granularity, "time bucket size: day or hour")
        ->check(CLI::IsMember({"day", "hour"}))
        ->capture_default_str();
    run_cmd->add_option("--max-gap", config.max_gap, "re-emergence scan horizon (0 = unbounded)")
        ->capture_default_str();
    run_cmd->add_option("--min-support", config.min_support,
                        "label itemset support threshold (0 = two occurrences)")
        ->capture_default_str();
    run_cmd->add_flag("--include-bridging-in-match", config.include_bridging_in_match,
                      "count attached bridging tokens when matching clusters across timepoints");
    run_cmd->add_option("--patience", config.early_stop_patience,
                        "stop node removal after this many non-improving steps (0 = off)")
        ->capture_default_str();
    run_cmd->add_option("--format", format, "input format: auto, jsonl, tsv")
        ->check(CLI::IsMember({"auto", "jsonl", "tsv"}))
        ->capture_default_str();

    // synth
    fs::path schedule_path;
    fs::path synth_out = "synthetic.jsonl";
    fs::path truth_out;
    std::string synth_format = "jsonl";
    auto* synth_cmd = app.add_subcommand("synth", "generate a corpus from a planted schedule");
    synth_cmd->add_option("--schedule", schedule_path, "schedule JSON")->required();
    synth_cmd->add_option("--out", synth_out, "corpus output path")->capture_default_str();
    synth_cmd->add_option("--truth", truth_out, "ground truth output path (default: alongside --out)");
    synth_cmd->add_option("--format", synth_format, "corpus format: jsonl or tsv")
        ->check(CLI::IsMember({"jsonl", "tsv"}))
        ->capture_default_str();

    // stats / chart
    fs::path stats_dir;
    auto* stats_cmd = app.add_subcommand("stats", "rebuild stats.tsv from a saved run");
    stats_cmd->add_option("--dir", stats_dir, "run output directory")->required();
    fs::path chart_dir;
    auto* chart_cmd = app.add_subcommand("chart", "re-render progression charts from a saved run");
    chart_cmd->add_option("--dir", chart_dir, "run output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            config.granularity = granularity == "hour" ? Granularity::hour : Granularity::day;
            if (format == "jsonl")
                config.format = CorpusFormat::jsonl;
            else if (format == "tsv")
                config.format = CorpusFormat::tsv;
            return cmd_run(config);
        }
        if (synth_cmd->parsed())
            return cmd_synth(schedule_path, synth_out, truth_out, synth_format);
        if (stats_cmd->parsed())
            return cmd_stats(stats_dir);
        if (chart_cmd->parsed())
            return cmd_chart(chart_dir);
    } catch (const StageError& e) {
        std::cerr << "error [stage " << to_string(e.stage()) << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
