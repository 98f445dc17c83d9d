#include "topicflow/chart.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace topicflow {

namespace {

struct EdgeStyle {
    const char* color;
    bool dashed;
};

EdgeStyle style_of(TransitionKind kind) {
    switch (kind) {
    case TransitionKind::unchanged: return {"#333333", false};
    case TransitionKind::absorbed: return {"#1f77b4", false};
    case TransitionKind::dissolved: return {"#ff7f0e", false};
    case TransitionKind::split: return {"#2ca02c", false};
    case TransitionKind::merged: return {"#9467bd", false};
    case TransitionKind::re_emerged: return {"#777777", true};
    default: return {"#bbbbbb", false};
    }
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string node_label(const std::set<std::string>& members) {
    if (members.empty())
        return "(empty)";
    std::string head = *members.begin();
    if (head.size() > 14) {
        // byte-truncate only when it cannot split a UTF-8 sequence
        bool ascii = true;
        for (std::size_t i = 0; i < 14; ++i)
            if (static_cast<unsigned char>(head[i]) >= 0x80)
                ascii = false;
        if (ascii)
            head = head.substr(0, 14) + "..";
    }
    if (members.size() > 1)
        head += " +" + std::to_string(members.size() - 1);
    return head;
}

std::string node_id(int t, int i) { return "t" + std::to_string(t) + "c" + std::to_string(i); }

} // namespace

ChartTrack make_chart_track(const std::string& title, const std::vector<std::string>& timepoints,
                            const Timeline& timeline, const std::vector<TransitionEdge>& edges,
                            const FlowResult& flows) {
    ChartTrack track;
    track.title = title;
    track.timepoints = timepoints;

    std::map<ClusterKey, int> flow_of;
    for (const auto& flow : flows.flows)
        for (const auto& key : flow.members)
            flow_of[key] = flow.id;

    track.columns.resize(timeline.size());
    for (std::size_t t = 0; t < timeline.size(); ++t) {
        auto& column = track.columns[t];
        for (const auto& ref : timeline[t]) {
            ChartNode node;
            node.cluster_index = ref.index;
            node.label = node_label(ref.members);
            auto it = flow_of.find({ref.timepoint_index, ref.index});
            node.flow_id = it == flow_of.end() ? -1 : it->second;
            column.push_back(std::move(node));
        }
        std::sort(column.begin(), column.end(), [](const ChartNode& a, const ChartNode& b) {
            const int fa = a.flow_id < 0 ? std::numeric_limits<int>::max() : a.flow_id;
            const int fb = b.flow_id < 0 ? std::numeric_limits<int>::max() : b.flow_id;
            if (fa != fb)
                return fa < fb;
            return a.cluster_index < b.cluster_index;
        });
    }

    for (const auto& e : edges)
        if (e.from && e.to)
            track.edges.push_back({*e.from, *e.to, e.kind});
    return track;
}

std::string progression_dot(const ChartTrack& track) {
    std::ostringstream out;
    out << "digraph progression {\n";
    out << "  rankdir=LR;\n";
    out << "  labelloc=\"t\";\n";
    out << "  label=\"" << dot_escape(track.title) << "\";\n";
    out << "  node [shape=box, fontsize=10];\n";
    for (std::size_t t = 0; t < track.columns.size(); ++t) {
        const std::string date = t < track.timepoints.size() ? track.timepoints[t] : std::to_string(t);
        out << "  subgraph cluster_t" << t << " {\n";
        out << "    label=\"" << dot_escape(date) << "\\n" << track.columns[t].size() << " clusters\";\n";
        for (const auto& node : track.columns[t])
            out << "    \"" << node_id(static_cast<int>(t), node.cluster_index) << "\" [label=\""
                << dot_escape(node.label) << "\"];\n";
        out << "  }\n";
    }
    for (const auto& edge : track.edges) {
        const EdgeStyle st = style_of(edge.kind);
        out << "  \"" << node_id(edge.from.timepoint_index, edge.from.cluster_index) << "\" -> \""
            << node_id(edge.to.timepoint_index, edge.to.cluster_index) << "\" [label=\""
            << to_string(edge.kind) << "\", color=\"" << st.color << "\", style="
            << (st.dashed ? "dashed" : "solid") << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string progression_svg(const ChartTrack& track) {
    const int margin = 20;
    const int col_w = 160;
    const int header_h = 46;
    const int row_h = 56;
    const int node_w = 128;
    const int node_h = 34;

    const int cols = static_cast<int>(track.columns.size());
    std::size_t max_rows = 1;
    for (const auto& column : track.columns)
        max_rows = std::max(max_rows, column.size());

    const int width = margin * 2 + std::max(cols, 1) * col_w;
    const int height = margin * 2 + header_h + static_cast<int>(max_rows) * row_h;

    // node center positions, needed before edges are drawn
    std::map<std::pair<int, int>, std::pair<int, int>> center;
    for (int t = 0; t < cols; ++t) {
        const int x0 = margin + t * col_w;
        for (std::size_t r = 0; r < track.columns[t].size(); ++r) {
            const auto& node = track.columns[t][r];
            const int nx = x0 + (col_w - node_w) / 2;
            const int ny = margin + header_h + static_cast<int>(r) * row_h;
            center[{t, node.cluster_index}] = {nx + node_w / 2, ny + node_h / 2};
        }
    }

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "  <title>" << xml_escape(track.title) << "</title>\n";
    out << "  <defs>\n"
        << "    <marker id=\"arr\" viewBox=\"0 0 8 8\" refX=\"7\" refY=\"4\" markerWidth=\"7\" "
           "markerHeight=\"7\" orient=\"auto\">\n"
        << "      <path d=\"M0,0 L8,4 L0,8 Z\" fill=\"context-stroke\"/>\n"
        << "    </marker>\n"
        << "  </defs>\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"#ffffff\"/>\n";

    for (int t = 0; t < cols; ++t) {
        const int cx = margin + t * col_w + col_w / 2;
        const std::string date =
            static_cast<std::size_t>(t) < track.timepoints.size() ? track.timepoints[t] : std::to_string(t);
        out << "  <text x=\"" << cx << "\" y=\"" << margin + 14
            << "\" text-anchor=\"middle\" font-family=\"Helvetica, Arial, sans-serif\" font-size=\"12\" "
               "fill=\"#111111\">"
            << xml_escape(date) << "</text>\n";
        out << "  <text x=\"" << cx << "\" y=\"" << margin + 30
            << "\" text-anchor=\"middle\" font-family=\"Helvetica, Arial, sans-serif\" font-size=\"10\" "
               "fill=\"#555555\">"
            << track.columns[t].size() << " clusters</text>\n";
    }

    for (const auto& edge : track.edges) {
        auto from = center.find({edge.from.timepoint_index, edge.from.cluster_index});
        auto to = center.find({edge.to.timepoint_index, edge.to.cluster_index});
        if (from == center.end() || to == center.end())
            continue;
        const EdgeStyle st = style_of(edge.kind);
        out << "  <line x1=\"" << from->second.first + node_w / 2 << "\" y1=\"" << from->second.second
            << "\" x2=\"" << to->second.first - node_w / 2 << "\" y2=\"" << to->second.second
            << "\" stroke=\"" << st.color << "\" stroke-width=\"1.5\"";
        if (st.dashed)
            out << " stroke-dasharray=\"6,4\"";
        out << " marker-end=\"url(#arr)\"/>\n";
    }

    for (int t = 0; t < cols; ++t) {
        const int x0 = margin + t * col_w;
        for (std::size_t r = 0; r < track.columns[t].size(); ++r) {
            const auto& node = track.columns[t][r];
            const int nx = x0 + (col_w - node_w) / 2;
            const int ny = margin + header_h + static_cast<int>(r) * row_h;
            const bool singleton = node.flow_id < 0;
            out << "  <rect x=\"" << nx << "\" y=\"" << ny << "\" width=\"" << node_w << "\" height=\""
                << node_h << "\" rx=\"4\" fill=\"" << (singleton ? "#f2f2f2" : "#e8f1fa")
                << "\" stroke=\"" << (singleton ? "#999999" : "#4477aa") << "\"/>\n";
            out << "  <text x=\"" << nx + node_w / 2 << "\" y=\"" << ny + node_h / 2 + 4
                << "\" text-anchor=\"middle\" font-family=\"Helvetica, Arial, sans-serif\" "
                   "font-size=\"11\" fill=\"#111111\">"
                << xml_escape(node.label) << "</text>\n";
        }
    }

    out << "</svg>\n";
    return out.str();
}

void write_progression(const std::filesystem::path& dot_path, const std::filesystem::path& svg_path,
                       const ChartTrack& track) {
    std::ofstream dot(dot_path, std::ios::binary);
    if (!dot)
        throw std::runtime_error("cannot write " + dot_path.string());
    dot << progression_dot(track);
    std::ofstream svg(svg_path, std::ios::binary);
    if (!svg)
        throw std::runtime_error("cannot write " + svg_path.string());
    svg << progression_svg(track);
}

} // namespace topicflow
