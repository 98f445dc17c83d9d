#ifndef TOPICFLOW_CHART_HPP
#define TOPICFLOW_CHART_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "topicflow/transitions.hpp"

namespace topicflow {

struct ChartNode {
    int cluster_index = 0;
    std::string label;
    int flow_id = -1; // -1 = singleton, drawn after flow members
};

struct ChartEdge {
    ClusterKey from;
    ClusterKey to;
    TransitionKind kind = TransitionKind::unchanged;
};

/// Layout-ready progression data: one column per timepoint (date on the
/// axis, cluster count under it), nodes ordered by (flow id, cluster index).
struct ChartTrack {
    std::string title;
    std::vector<std::string> timepoints;
    std::vector<std::vector<ChartNode>> columns;
    std::vector<ChartEdge> edges;
};

ChartTrack make_chart_track(const std::string& title, const std::vector<std::string>& timepoints,
                            const Timeline& timeline, const std::vector<TransitionEdge>& edges,
                            const FlowResult& flows);

/// DOT is the canonical chart form; the SVG is a plain grid rendering of the
/// same data (straight edges, dashed for re-emergence).
std::string progression_dot(const ChartTrack& track);
std::string progression_svg(const ChartTrack& track);

void write_progression(const std::filesystem::path& dot_path, const std::filesystem::path& svg_path,
                       const ChartTrack& track);

} // namespace topicflow

#endif
