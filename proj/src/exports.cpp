#include "topicflow/exports.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace topicflow {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::string two_decimals(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void write_endpoint(JsonWriter& w, const std::optional<ClusterKey>& key,
                    const std::vector<std::string>* labels) {
    if (!key) {
        w.null();
        return;
    }
    w.begin_object();
    w.key("t");
    if (labels) {
        const auto t = static_cast<std::size_t>(key->timepoint_index);
        if (t >= labels->size())
            throw std::invalid_argument("edge timepoint outside the label axis");
        w.value((*labels)[t]);
    } else {
        w.value(key->timepoint_index);
    }
    w.key("i");
    w.value(key->cluster_index);
    w.end_object();
}

void write_edge_impl(JsonWriter& w, const TransitionEdge& edge, const std::vector<std::string>* labels) {
    w.begin_object();
    w.key("from");
    write_endpoint(w, edge.from, labels);
    w.key("to");
    write_endpoint(w, edge.to, labels);
    w.key("kind");
    w.value(to_string(edge.kind));
    w.key("fwd");
    w.value(edge.overlap_forward);
    w.key("bwd");
    w.value(edge.overlap_backward);
    w.key("gap");
    w.value(edge.gap);
    w.end_object();
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    return doc;
}

} // namespace

void json_write_edge(JsonWriter& w, const TransitionEdge& edge, const std::vector<std::string>& labels) {
    write_edge_impl(w, edge, &labels);
}

void json_write_edge(JsonWriter& w, const TransitionEdge& edge) { write_edge_impl(w, edge, nullptr); }

void write_clusters_json(const std::filesystem::path& path, const std::vector<SliceSummary>& summaries,
                         const std::vector<ClusteringResult>& results) {
    if (summaries.size() != results.size())
        throw std::invalid_argument("summary/result length mismatch");
    auto out = open_out(path);
    JsonWriter w(out);
    w.begin_array();
    for (std::size_t t = 0; t < results.size(); ++t) {
        const auto& sum = summaries[t];
        const auto& res = results[t];
        w.begin_object();
        w.key("timepoint");
        w.value(sum.timepoint);
        w.key("Q");
        w.value(res.modularity_q);
        w.key("clusters");
        w.begin_array();
        for (const auto& cluster : res.clusters) {
            w.begin_array();
            for (const auto& token : cluster)
                w.value(token);
            w.end_array();
        }
        w.end_array();
        w.key("bridging");
        w.begin_array();
        for (const auto& token : res.bridging_nodes) {
            w.begin_object();
            w.key("token");
            w.value(token);
            w.key("attached");
            w.begin_array();
            auto it = res.bridging_membership.find(token);
            if (it != res.bridging_membership.end())
                for (int c : it->second)
                    w.value(c);
            w.end_array();
            w.end_object();
        }
        w.end_array();
        w.key("stats");
        w.begin_object();
        w.key("documents");
        w.value(sum.documents);
        w.key("nodes");
        w.value(sum.nodes);
        w.key("mean_c_removed");
        if (sum.stats.mean_c_removed)
            w.value(*sum.stats.mean_c_removed);
        else
            w.null();
        w.key("mean_c_all");
        if (sum.stats.mean_c_all)
            w.value(*sum.stats.mean_c_all);
        else
            w.null();
        w.key("mean_c_best");
        if (sum.stats.mean_c_best)
            w.value(*sum.stats.mean_c_best);
        else
            w.null();
        w.key("pct_removed");
        w.value(sum.stats.pct_removed);
        w.end_object();
        w.end_object();
    }
    w.end_array();
    w.finish();
}

void write_annotated_clusters_json(const std::filesystem::path& path,
                                   const std::vector<std::string>& labels, const Timeline& timeline) {
    if (labels.size() != timeline.size())
        throw std::invalid_argument("label/timeline length mismatch");
    auto out = open_out(path);
    JsonWriter w(out);
    w.begin_array();
    for (std::size_t t = 0; t < timeline.size(); ++t) {
        w.begin_object();
        w.key("timepoint");
        w.value(labels[t]);
        w.key("clusters");
        w.begin_array();
        for (const auto& ref : timeline[t]) {
            w.begin_array();
            for (const auto& member : ref.members)
                w.value(member);
            w.end_array();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.finish();
}

void write_transitions_json(const std::filesystem::path& path, const std::vector<TransitionEdge>& edges,
                            const std::vector<std::string>& labels) {
    auto out = open_out(path);
    JsonWriter w(out);
    w.begin_array();
    for (const auto& edge : edges)
        json_write_edge(w, edge, labels);
    w.end_array();
    w.finish();
}

void write_flows_json(const std::filesystem::path& path, const FlowResult& flows) {
    auto out = open_out(path);
    JsonWriter w(out);
    w.begin_array();
    for (const auto& flow : flows.flows) {
        w.begin_object();
        w.key("id");
        w.value(flow.id);
        w.key("edges");
        w.begin_array();
        for (int e : flow.edge_indices)
            w.value(e);
        w.end_array();
        w.key("length");
        w.value(flow.length);
        w.end_object();
    }
    w.end_array();
    w.finish();
}

void write_merged_topics_json(const std::filesystem::path& path, const std::vector<MergedTopic>& topics) {
    auto out = open_out(path);
    JsonWriter w(out);
    w.begin_array();
    for (const auto& topic : topics) {
        w.begin_object();
        w.key("items");
        w.begin_array();
        for (const auto& item : topic.items)
            w.value(item);
        w.end_array();
        w.key("support");
        w.begin_object();
        w.key("count");
        w.value(topic.support.count);
        w.key("total");
        w.value(topic.support.total);
        w.end_object();
        w.end_object();
    }
    w.end_array();
    w.finish();
}

void write_stats_tsv(const std::filesystem::path& path, const std::vector<SliceSummary>& summaries) {
    auto out = open_out(path);
    const char* rows[] = {"documents", "nodes",  "mean_c_removed", "mean_c_all",
                          "mean_c_best", "pct_removed", "Q",       "clusters"};

    out << "metric";
    for (const auto& s : summaries)
        out << '\t' << s.timepoint;
    out << '\n';

    for (const char* row : rows) {
        out << row;
        for (const auto& s : summaries) {
            out << '\t';
            const std::string name(row);
            if (name == "documents")
                out << s.documents;
            else if (name == "nodes")
                out << s.nodes;
            else if (name == "clusters")
                out << s.clusters;
            else if (name == "Q")
                out << two_decimals(s.q);
            else if (name == "pct_removed")
                out << two_decimals(s.stats.pct_removed);
            else {
                const std::optional<double>& v = name == "mean_c_removed" ? s.stats.mean_c_removed
                                               : name == "mean_c_all"     ? s.stats.mean_c_all
                                                                          : s.stats.mean_c_best;
                if (v)
                    out << two_decimals(*v);
                else
                    out << '-';
            }
        }
        out << '\n';
    }
}

SavedClusters read_clusters_json(const std::filesystem::path& path) {
    const json doc = load_json(path);
    if (!doc.is_array())
        throw std::runtime_error(path.string() + ": expected a top-level array");

    SavedClusters saved;
    int t = 0;
    for (const auto& entry : doc) {
        SliceSummary sum;
        sum.timepoint = entry.at("timepoint").get<std::string>();
        sum.q = entry.value("Q", 0.0);
        if (entry.contains("stats")) {
            const auto& st = entry["stats"];
            sum.documents = st.value("documents", 0);
            sum.nodes = st.value("nodes", 0);
            auto opt = [&](const char* key) -> std::optional<double> {
                if (!st.contains(key) || st[key].is_null())
                    return std::nullopt;
                return st[key].get<double>();
            };
            sum.stats.mean_c_removed = opt("mean_c_removed");
            sum.stats.mean_c_all = opt("mean_c_all");
            sum.stats.mean_c_best = opt("mean_c_best");
            sum.stats.pct_removed = st.value("pct_removed", 0.0);
        }

        std::vector<ClusterRef> refs;
        for (const auto& cluster : entry.at("clusters")) {
            ClusterRef ref;
            ref.timepoint = sum.timepoint;
            ref.timepoint_index = t;
            ref.index = static_cast<int>(refs.size());
            for (const auto& token : cluster)
                ref.members.insert(token.get<std::string>());
            refs.push_back(std::move(ref));
        }
        sum.clusters = static_cast<int>(refs.size());
        saved.summaries.push_back(std::move(sum));
        saved.timeline.push_back(std::move(refs));
        ++t;
    }
    return saved;
}

std::vector<TransitionEdge> read_transitions_json(const std::filesystem::path& path,
                                                  const std::vector<std::string>& labels) {
    std::map<std::string, int> index_of;
    for (std::size_t t = 0; t < labels.size(); ++t)
        index_of[labels[t]] = static_cast<int>(t);

    const json doc = load_json(path);
    std::vector<TransitionEdge> edges;
    for (const auto& entry : doc) {
        TransitionEdge e;
        auto endpoint = [&](const char* key) -> std::optional<ClusterKey> {
            if (!entry.contains(key) || entry[key].is_null())
                return std::nullopt;
            const auto& obj = entry[key];
            const std::string label = obj.at("t").get<std::string>();
            auto it = index_of.find(label);
            if (it == index_of.end())
                throw std::runtime_error(path.string() + ": unknown timepoint '" + label + "'");
            return ClusterKey{it->second, obj.at("i").get<int>()};
        };
        e.from = endpoint("from");
        e.to = endpoint("to");
        const std::string kind = entry.at("kind").get<std::string>();
        bool known = false;
        for (TransitionKind k :
             {TransitionKind::unchanged, TransitionKind::absorbed, TransitionKind::dissolved,
              TransitionKind::split, TransitionKind::merged, TransitionKind::disappeared,
              TransitionKind::emerged, TransitionKind::re_emerged})
            if (kind == to_string(k)) {
                e.kind = k;
                known = true;
                break;
            }
        if (!known)
            throw std::runtime_error(path.string() + ": unknown transition kind '" + kind + "'");
        e.overlap_forward = entry.value("fwd", 0.0);
        e.overlap_backward = entry.value("bwd", 0.0);
        e.gap = entry.value("gap", 1);
        edges.push_back(std::move(e));
    }
    return edges;
}

std::vector<SavedFlow> read_flows_json(const std::filesystem::path& path) {
    const json doc = load_json(path);
    std::vector<SavedFlow> flows;
    for (const auto& entry : doc) {
        SavedFlow f;
        f.id = entry.at("id").get<int>();
        for (const auto& e : entry.at("edges"))
            f.edge_indices.push_back(e.get<int>());
        f.length = entry.value("length", 0);
        flows.push_back(std::move(f));
    }
    return flows;
}

} // namespace topicflow
