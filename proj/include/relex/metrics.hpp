#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relex/corpus.hpp"
#include "relex/jsonio.hpp"
#include "relex/labels.hpp"
#include "relex/normalize.hpp"

namespace relex {

// Rows are gold labels in catalog order; columns are catalog order plus one
// UNRESOLVED sink that never credits a class.
class ConfusionMatrix {
public:
    static constexpr const char* kUnresolved = "UNRESOLVED";

    explicit ConfusionMatrix(const LabelCatalog& catalog);

    void add(const std::string& gold_label, const NormalizedPrediction& prediction);
    void add_resolved(const std::string& gold_label, const std::string& predicted_label);
    void add_unresolved(const std::string& gold_label);

    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t cell(std::size_t gold_index, std::size_t predicted_index) const;
    std::size_t unresolved_count(std::size_t gold_index) const;
    std::size_t row_sum(std::size_t gold_index) const;
    std::size_t column_sum(std::size_t predicted_index) const;
    std::size_t grand_total() const { return total_; }

private:
    std::vector<std::string> labels_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> cells_; // labels x (labels + 1)
    std::size_t total_ = 0;
};

ConfusionMatrix build_confusion(const std::vector<GoldRelation>& gold,
                                const std::vector<NormalizedPrediction>& predictions,
                                const LabelCatalog& catalog);

struct ClassMetrics {
    std::string label;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& matrix);

struct WeightedReport {
    std::vector<ClassMetrics> per_class;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    // Aggregated from per-class F1 values, never recomputed from the
    // weighted precision and recall.
    double weighted_f1 = 0.0;
    std::size_t total_support = 0;
};

struct WeightedOptions {
    // The None class is one of the prompt classes and is weighted by
    // default; exclusion is a sensitivity-analysis knob.
    bool exclude_none = false;
    std::string none_label = "None";
};

WeightedReport weighted_report(const std::vector<ClassMetrics>& per_class, WeightedOptions options = {});

struct BiasReport {
    std::size_t distinct_labels_used = 0;
    std::optional<std::pair<std::string, std::size_t>> top_label;
    double unresolved_rate = 0.0;
    std::map<std::string, std::size_t> per_label;
};

BiasReport bias_diagnostics(const std::vector<NormalizedPrediction>& predictions, const LabelCatalog& catalog);

json to_json(const WeightedReport& report);
json to_json(const BiasReport& report);

// Aligned-column table mirroring the published results layout (percentages).
std::string to_table(const WeightedReport& report);
std::string to_table(const BiasReport& report);

} // namespace relex
