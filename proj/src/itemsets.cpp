#include "topicflow/itemsets.hpp"

#include <algorithm>
#include <stdexcept>

namespace topicflow {

namespace {

bool contains_all(const std::set<std::string>& sub, const std::set<std::string>& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

// `count >= min_support * total` with a hair of slack so thresholds given as
// decimal literals (0.1 * 30 = 3.0000000000000004) don't drop exact matches.
bool meets(std::int64_t count, double min_support, std::int64_t total) {
    return static_cast<double>(count) + 1e-9 >= min_support * static_cast<double>(total);
}

} // namespace

std::vector<LabelTransaction> label_transactions(const Corpus& corpus) {
    std::vector<LabelTransaction> out;
    for (const auto& doc : corpus.documents) {
        if (doc.labels.empty())
            continue;
        LabelTransaction txn;
        txn.document_id = doc.id;
        for (const auto& label : doc.labels) {
            std::string norm = normalize_token(label);
            if (!norm.empty())
                txn.items.insert(std::move(norm));
        }
        if (!txn.items.empty())
            out.push_back(std::move(txn));
    }
    return out;
}

std::int64_t support_count(const std::set<std::string>& itemset,
                           const std::vector<LabelTransaction>& transactions) {
    std::int64_t n = 0;
    for (const auto& txn : transactions)
        if (contains_all(itemset, txn.items))
            ++n;
    return n;
}

double support(const std::set<std::string>& itemset, const std::vector<LabelTransaction>& transactions) {
    if (transactions.empty())
        throw std::invalid_argument("support requires at least one transaction");
    return static_cast<double>(support_count(itemset, transactions)) /
           static_cast<double>(transactions.size());
}

std::map<std::set<std::string>, SupportValue> frequent_itemsets(
    const std::vector<LabelTransaction>& transactions, double min_support) {
    const auto total = static_cast<std::int64_t>(transactions.size());
    if (min_support <= 0.0)
        min_support = total == 0 ? 1.0 : 2.0 / static_cast<double>(total);
    if (min_support > 1.0)
        throw std::invalid_argument("min_support must be in (0, 1]");

    std::map<std::set<std::string>, SupportValue> result;
    if (total == 0)
        return result;

    std::map<std::string, std::int64_t> singles;
    for (const auto& txn : transactions)
        for (const auto& item : txn.items)
            ++singles[item];

    std::vector<std::string> frequent1;
    for (const auto& [item, count] : singles)
        if (meets(count, min_support, total)) {
            result[{item}] = {count, total};
            frequent1.push_back(item);
        }

    // Level 2: pair frequent singles, count exactly, keep survivors.
    std::vector<std::set<std::string>> level2;
    for (std::size_t a = 0; a < frequent1.size(); ++a)
        for (std::size_t b = a + 1; b < frequent1.size(); ++b) {
            std::set<std::string> cand{frequent1[a], frequent1[b]};
            const auto count = support_count(cand, transactions);
            if (meets(count, min_support, total)) {
                result[cand] = {count, total};
                level2.push_back(std::move(cand));
            }
        }

    // Level 3: extend pairs; downward closure requires every sub-pair frequent.
    auto pair_frequent = [&](const std::string& a, const std::string& b) {
        return result.count({a, b}) > 0;
    };
    std::set<std::set<std::string>> seen3;
    for (const auto& pair : level2)
        for (const auto& item : frequent1) {
            if (pair.count(item))
                continue;
            std::set<std::string> cand = pair;
            cand.insert(item);
            if (!seen3.insert(cand).second)
                continue;
            auto it = cand.begin();
            const std::string& x = *it++;
            const std::string& y = *it++;
            const std::string& z = *it;
            if (!pair_frequent(x, y) || !pair_frequent(x, z) || !pair_frequent(y, z))
                continue;
            const auto count = support_count(cand, transactions);
            if (meets(count, min_support, total))
                result[cand] = {count, total};
        }

    return result;
}

std::vector<MergedTopic> merge_subset_itemsets(const std::map<std::set<std::string>, SupportValue>& itemsets) {
    std::vector<MergedTopic> out;
    for (const auto& [items, supp] : itemsets) {
        bool absorbed = false;
        for (const auto& [other, other_supp] : itemsets) {
            if (other.size() <= items.size() || other_supp.count != supp.count)
                continue;
            if (contains_all(items, other)) {
                absorbed = true;
                break;
            }
        }
        if (!absorbed)
            out.push_back({items, supp});
    }
    // map iteration is already set-lexicographic; keep that order
    return out;
}

std::vector<LabelTransaction> slice_transactions(const TimeSlice& slice) {
    Corpus view;
    view.documents = slice.documents;
    return label_transactions(view);
}

Timeline annotated_timeline(const std::vector<TimeSlice>& slices, double min_support, bool per_timepoint,
                            std::vector<MergedTopic>* merged_out) {
    if (!per_timepoint) {
        std::vector<LabelTransaction> all;
        for (const auto& slice : slices) {
            auto txns = slice_transactions(slice);
            all.insert(all.end(), std::make_move_iterator(txns.begin()),
                       std::make_move_iterator(txns.end()));
        }
        std::vector<MergedTopic> topics;
        if (!all.empty())
            topics = merge_subset_itemsets(frequent_itemsets(all, min_support));
        if (merged_out)
            *merged_out = topics;
        return labels_to_timepoint_clusters(slices, topics);
    }

    Timeline timeline;
    timeline.reserve(slices.size());
    for (std::size_t t = 0; t < slices.size(); ++t) {
        const auto txns = slice_transactions(slices[t]);
        std::vector<MergedTopic> topics;
        if (!txns.empty())
            topics = merge_subset_itemsets(frequent_itemsets(txns, min_support));
        auto one = labels_to_timepoint_clusters({slices[t]}, topics);
        for (auto& ref : one.front())
            ref.timepoint_index = static_cast<int>(t);
        timeline.push_back(std::move(one.front()));
    }
    return timeline;
}

Timeline labels_to_timepoint_clusters(const std::vector<TimeSlice>& slices,
                                      const std::vector<MergedTopic>& topics) {
    Timeline timeline;
    timeline.reserve(slices.size());
    for (std::size_t t = 0; t < slices.size(); ++t) {
        const TimeSlice& slice = slices[t];
        std::set<std::string> present;
        for (const auto& doc : slice.documents)
            for (const auto& label : doc.labels) {
                std::string norm = normalize_token(label);
                if (!norm.empty())
                    present.insert(std::move(norm));
            }

        std::set<std::set<std::string>> clusters;
        std::set<std::string> covered;
        for (const auto& topic : topics) {
            std::set<std::string> restricted;
            std::set_intersection(topic.items.begin(), topic.items.end(), present.begin(), present.end(),
                                  std::inserter(restricted, restricted.end()));
            if (restricted.empty())
                continue;
            covered.insert(restricted.begin(), restricted.end());
            clusters.insert(std::move(restricted));
        }
        for (const auto& label : present)
            if (!covered.count(label))
                clusters.insert({label});

        std::vector<ClusterRef> refs;
        int index = 0;
        for (const auto& members : clusters) {
            ClusterRef ref;
            ref.timepoint = slice.timepoint;
            ref.timepoint_index = static_cast<int>(t);
            ref.index = index++;
            ref.members = members;
            refs.push_back(std::move(ref));
        }
        timeline.push_back(std::move(refs));
    }
    return timeline;
}

} // namespace topicflow
