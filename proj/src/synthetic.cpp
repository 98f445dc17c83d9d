#include "topicflow/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "topicflow/exports.hpp"
#include "topicflow/json_writer.hpp"

namespace topicflow {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("schedule: " + what); }

// Bounded draw via modulo: biased in general but fully deterministic across
// platforms, which matters more here (n is tiny, the bias is irrelevant).
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

// First k elements of a deterministic partial shuffle of [0, n).
std::vector<std::size_t> sample_indices(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i)
        idx[i] = i;
    for (std::size_t i = 0; i < k; ++i)
        std::swap(idx[i], idx[i + draw(rng, n - i)]);
    idx.resize(k);
    return idx;
}

bool topic_active(const TopicSpec& topic, int t) {
    for (const auto& [lo, hi] : topic.intervals)
        if (lo <= t && t <= hi)
            return true;
    return false;
}

std::string date_label(std::int64_t start_epoch, int t) {
    return format_timestamp(start_epoch + static_cast<std::int64_t>(t) * 86400).substr(0, 10);
}

struct EdgeIndex {
    std::map<std::pair<int, std::string>, int> cluster_of; // (timepoint, topic name) -> index
    const std::vector<TransitionEdge>* edges = nullptr;

    bool has(TransitionKind kind, std::optional<ClusterKey> from, std::optional<ClusterKey> to) const {
        for (const auto& e : *edges)
            if (e.kind == kind && e.from == from && e.to == to)
                return true;
        return false;
    }

    ClusterKey locate(int t, const std::string& name) const {
        auto it = cluster_of.find({t, name});
        if (it == cluster_of.end())
            bad("topic '" + name + "' is not active at timepoint " + std::to_string(t));
        return {t, it->second};
    }
};

void check_event(const EventSpec& ev, const EdgeIndex& index, int timepoints) {
    if (ev.at < 0 || ev.at >= timepoints)
        bad("event at=" + std::to_string(ev.at) + " outside the timeline");
    auto one = [&](const std::vector<std::string>& v, const char* side) -> const std::string& {
        if (v.size() != 1)
            bad("event '" + ev.kind + "' needs exactly one '" + side + "' topic");
        return v.front();
    };
    auto fail = [&](const std::string& detail) {
        bad("declared " + ev.kind + " at t=" + std::to_string(ev.at) + " " + detail +
            " is not produced by the planted topics");
    };

    if (ev.kind == "split") {
        if (ev.to.size() < 2)
            bad("split needs >= 2 'to' topics");
        const auto from = index.locate(ev.at - 1, one(ev.from, "from"));
        for (const auto& name : ev.to)
            if (!index.has(TransitionKind::split, from, index.locate(ev.at, name)))
                fail("into '" + name + "'");
    } else if (ev.kind == "merge") {
        if (ev.from.size() < 2)
            bad("merge needs >= 2 'from' topics");
        const auto to = index.locate(ev.at, one(ev.to, "to"));
        for (const auto& name : ev.from)
            if (!index.has(TransitionKind::merged, index.locate(ev.at - 1, name), to))
                fail("from '" + name + "'");
    } else if (ev.kind == "absorb" || ev.kind == "dissolve" || ev.kind == "unchanged" ||
               ev.kind == "re_emerge") {
        const std::string& fname = one(ev.from, "from");
        const auto to = index.locate(ev.at, one(ev.to, "to"));
        TransitionKind kind = TransitionKind::absorbed;
        if (ev.kind == "dissolve")
            kind = TransitionKind::dissolved;
        else if (ev.kind == "unchanged")
            kind = TransitionKind::unchanged;
        if (ev.kind == "re_emerge") {
            for (const auto& e : *index.edges)
                if (e.kind == TransitionKind::re_emerged && e.to == std::optional(to) && e.from &&
                    index.cluster_of.count({e.from->timepoint_index, fname}) &&
                    index.cluster_of.at({e.from->timepoint_index, fname}) == e.from->cluster_index)
                    return;
            fail("of '" + fname + "'");
        } else if (!index.has(kind, index.locate(ev.at - 1, fname), to)) {
            fail("of '" + fname + "'");
        }
    } else if (ev.kind == "disappear") {
        if (!ev.to.empty())
            bad("disappear takes no 'to' topics");
        if (!index.has(TransitionKind::disappeared, index.locate(ev.at - 1, one(ev.from, "from")),
                       std::nullopt))
            fail("of '" + ev.from.front() + "'");
    } else if (ev.kind == "emerge") {
        if (!ev.from.empty())
            bad("emerge takes no 'from' topics");
        if (!index.has(TransitionKind::emerged, std::nullopt, index.locate(ev.at, one(ev.to, "to"))))
            fail("of '" + ev.to.front() + "'");
    } else {
        bad("unknown event kind '" + ev.kind + "'");
    }
}

} // namespace

SyntheticSchedule parse_schedule(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        bad(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
        bad("top level must be an object");

    SyntheticSchedule s;
    try {
        s.seed = doc.value("seed", std::uint64_t{1});
        s.timepoints = doc.value("timepoints", 0);
        s.start_date = doc.value("start_date", std::string("2025-01-01"));
        s.docs_per_topic = doc.value("docs_per_topic", 40);
        s.labeled = doc.value("labeled", true);
        for (const auto& b : doc.value("bridging_vocabulary", json::array()))
            s.bridging_vocabulary.push_back(b.get<std::string>());

        for (const auto& t : doc.value("topics", json::array())) {
            TopicSpec topic;
            topic.name = t.at("name").get<std::string>();
            for (const auto& tok : t.at("tokens"))
                topic.tokens.insert(tok.get<std::string>());
            for (const auto& iv : t.at("intervals")) {
                if (!iv.is_array() || iv.size() != 2)
                    bad("interval must be a [start, end] pair");
                topic.intervals.emplace_back(iv[0].get<int>(), iv[1].get<int>());
            }
            s.topics.push_back(std::move(topic));
        }

        for (const auto& e : doc.value("events", json::array())) {
            EventSpec ev;
            ev.kind = e.at("kind").get<std::string>();
            ev.at = e.at("at").get<int>();
            for (const auto& n : e.value("from", json::array()))
                ev.from.push_back(n.get<std::string>());
            for (const auto& n : e.value("to", json::array()))
                ev.to.push_back(n.get<std::string>());
            s.events.push_back(std::move(ev));
        }
    } catch (const json::exception& e) {
        bad(std::string("malformed schedule: ") + e.what());
    }
    return s;
}

SyntheticSchedule load_schedule(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open schedule file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_schedule(buf.str());
}

void validate_schedule(const SyntheticSchedule& schedule) {
    if (schedule.timepoints < 0)
        bad("timepoints must be >= 0");
    if (schedule.docs_per_topic < 1)
        bad("docs_per_topic must be >= 1");
    parse_timestamp(schedule.start_date + "T00:00:00Z"); // throws if malformed

    std::set<std::string> names;
    std::set<std::string> bridging(schedule.bridging_vocabulary.begin(),
                                   schedule.bridging_vocabulary.end());
    if (bridging.size() != schedule.bridging_vocabulary.size())
        bad("duplicate bridging tokens");

    for (const auto& topic : schedule.topics) {
        if (topic.name.empty())
            bad("topic with empty name");
        if (!names.insert(topic.name).second)
            bad("duplicate topic name '" + topic.name + "'");
        if (topic.tokens.size() < 3)
            bad("topic '" + topic.name + "' needs >= 3 tokens (documents sample at least 3)");
        for (const auto& tok : topic.tokens)
            if (bridging.count(tok))
                bad("token '" + tok + "' is both topical and bridging");
        if (topic.intervals.empty())
            bad("topic '" + topic.name + "' has no intervals");
        int prev_end = -2;
        for (const auto& [lo, hi] : topic.intervals) {
            if (lo > hi)
                bad("topic '" + topic.name + "' interval start after end");
            if (lo < 0 || hi >= schedule.timepoints)
                bad("topic '" + topic.name + "' interval outside the timeline");
            if (lo <= prev_end + 1)
                bad("topic '" + topic.name + "' intervals must be ascending with gaps >= 2");
            prev_end = hi;
        }
    }

    // Planted clusters must be distinguishable where they coexist.
    for (int t = 0; t < schedule.timepoints; ++t)
        for (std::size_t a = 0; a < schedule.topics.size(); ++a)
            for (std::size_t b = a + 1; b < schedule.topics.size(); ++b)
                if (topic_active(schedule.topics[a], t) && topic_active(schedule.topics[b], t) &&
                    schedule.topics[a].tokens == schedule.topics[b].tokens)
                    bad("topics '" + schedule.topics[a].name + "' and '" + schedule.topics[b].name +
                        "' plant identical clusters at timepoint " + std::to_string(t));

    if (!schedule.events.empty()) {
        const GroundTruth truth = schedule_ground_truth(schedule);
        EdgeIndex index;
        index.edges = &truth.edges;
        for (std::size_t t = 0; t < truth.planted_names.size(); ++t)
            for (std::size_t i = 0; i < truth.planted_names[t].size(); ++i)
                index.cluster_of[{static_cast<int>(t), truth.planted_names[t][i]}] = static_cast<int>(i);
        for (const auto& ev : schedule.events)
            check_event(ev, index, schedule.timepoints);
    }
}

GroundTruth schedule_ground_truth(const SyntheticSchedule& schedule, double alpha) {
    const std::int64_t start = parse_timestamp(schedule.start_date + "T00:00:00Z");
    GroundTruth truth;
    truth.seed = schedule.seed;
    truth.alpha = alpha;
    for (int t = 0; t < schedule.timepoints; ++t) {
        truth.timepoints.push_back(date_label(start, t));
        std::vector<ClusterRef> refs;
        std::vector<std::string> names;
        for (const auto& topic : schedule.topics) {
            if (!topic_active(topic, t))
                continue;
            ClusterRef ref;
            ref.timepoint = truth.timepoints.back();
            ref.timepoint_index = t;
            ref.index = static_cast<int>(refs.size());
            ref.members = topic.tokens;
            refs.push_back(std::move(ref));
            names.push_back(topic.name);
        }
        truth.planted.push_back(std::move(refs));
        truth.planted_names.push_back(std::move(names));
    }
    truth.edges = classify_timeline(truth.planted, alpha);
    return truth;
}

Corpus generate_synthetic_corpus(const SyntheticSchedule& schedule) {
    validate_schedule(schedule);

    Corpus corpus;
    if (schedule.timepoints == 0 || schedule.topics.empty())
        return corpus;

    const std::int64_t start = parse_timestamp(schedule.start_date + "T12:00:00Z");
    std::mt19937_64 rng(schedule.seed);

    for (int t = 0; t < schedule.timepoints; ++t) {
        for (const auto& topic : schedule.topics) {
            if (!topic_active(topic, t))
                continue;
            const std::vector<std::string> toks(topic.tokens.begin(), topic.tokens.end());
            for (int d = 0; d < schedule.docs_per_topic; ++d) {
                Document doc;
                doc.id = topic.name + "-t" + std::to_string(t) + "-" + std::to_string(d);
                doc.timestamp = start + static_cast<std::int64_t>(t) * 86400;

                const std::size_t hi = std::min<std::size_t>(8, toks.size());
                const std::size_t k = 3 + draw(rng, hi - 3 + 1);
                for (std::size_t i : sample_indices(rng, toks.size(), k))
                    doc.tokens.push_back(toks[i]);

                if (!schedule.bridging_vocabulary.empty()) {
                    const std::size_t nb =
                        std::min<std::size_t>(draw(rng, 3), schedule.bridging_vocabulary.size());
                    for (std::size_t i : sample_indices(rng, schedule.bridging_vocabulary.size(), nb))
                        doc.tokens.push_back(schedule.bridging_vocabulary[i]);
                }

                if (schedule.labeled)
                    doc.labels.push_back(topic.name);
                corpus.documents.push_back(std::move(doc));
            }
        }
    }
    return corpus;
}

void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    JsonWriter w(out);
    w.begin_object();
    w.key("seed");
    w.value(truth.seed);
    w.key("alpha");
    w.value(truth.alpha);
    w.key("timepoints");
    w.begin_array();
    for (const auto& tp : truth.timepoints)
        w.value(tp);
    w.end_array();
    w.key("clusters");
    w.begin_array();
    for (std::size_t t = 0; t < truth.planted.size(); ++t) {
        w.begin_array();
        for (std::size_t i = 0; i < truth.planted[t].size(); ++i) {
            w.begin_object();
            w.key("name");
            w.value(truth.planted_names[t][i]);
            w.key("members");
            w.begin_array();
            for (const auto& m : truth.planted[t][i].members)
                w.value(m);
            w.end_array();
            w.end_object();
        }
        w.end_array();
    }
    w.end_array();
    w.key("edges");
    w.begin_array();
    for (const auto& e : truth.edges)
        json_write_edge(w, e);
    w.end_array();
    w.end_object();
    w.finish();
}

} // namespace topicflow
