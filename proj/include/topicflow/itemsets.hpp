#ifndef TOPICFLOW_ITEMSETS_HPP
#define TOPICFLOW_ITEMSETS_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "topicflow/corpus.hpp"
#include "topicflow/transitions.hpp"

namespace topicflow {

struct LabelTransaction {
    std::string document_id;
    std::set<std::string> items; // normalized, nonempty
};

/// Support kept as the exact count/total pair; equality decisions compare
/// counts, never float ratios.
struct SupportValue {
    std::int64_t count = 0;
    std::int64_t total = 0;

    double ratio() const { return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total); }

    friend auto operator<=>(const SupportValue&, const SupportValue&) = default;
};

struct MergedTopic {
    std::set<std::string> items;
    SupportValue support;
};

/// One transaction per document that carries labels; labels are normalized
/// like tokens so the two tracks compare cleanly.
std::vector<LabelTransaction> label_transactions(const Corpus& corpus);

std::int64_t support_count(const std::set<std::string>& itemset,
                           const std::vector<LabelTransaction>& transactions);

/// Fraction of transactions containing the itemset. Empty itemset -> 1.0.
double support(const std::set<std::string>& itemset, const std::vector<LabelTransaction>& transactions);

/// Level-wise apriori up to size 3 (transactions never carry more labels).
/// min_support <= 0 defaults to 2/|T|.
std::map<std::set<std::string>, SupportValue> frequent_itemsets(
    const std::vector<LabelTransaction>& transactions, double min_support = 0.0);

/// Absorbs every itemset into a strict superset of identical count; one pass
/// over the original map reaches the fixpoint, so the result is independent
/// of iteration order.
std::vector<MergedTopic> merge_subset_itemsets(const std::map<std::set<std::string>, SupportValue>& itemsets);

/// Projects merged topics onto each slice's labels and adds singleton
/// clusters for labels no topic covers. Slices without labels stay empty.
Timeline labels_to_timepoint_clusters(const std::vector<TimeSlice>& slices,
                                      const std::vector<MergedTopic>& topics);

std::vector<LabelTransaction> slice_transactions(const TimeSlice& slice);

/// mine + merge + project in one step. Merging is global by default; with
/// per_timepoint each slice mines its own transactions. merged_out is filled
/// in global mode only (there is no single topic list otherwise).
Timeline annotated_timeline(const std::vector<TimeSlice>& slices, double min_support = 0.0,
                            bool per_timepoint = false, std::vector<MergedTopic>* merged_out = nullptr);

} // namespace topicflow

#endif
