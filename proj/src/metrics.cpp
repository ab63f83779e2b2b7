#include "relex/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "relex/errors.hpp"

namespace relex {

ConfusionMatrix::ConfusionMatrix(const LabelCatalog& catalog) {
    labels_ = catalog.canonical_labels();
    for (std::size_t i = 0; i < labels_.size(); ++i) index_[labels_[i]] = i;
    cells_.assign(labels_.size(), std::vector<std::size_t>(labels_.size() + 1, 0));
}

void ConfusionMatrix::add(const std::string& gold_label, const NormalizedPrediction& prediction) {
    if (prediction.resolved()) {
        add_resolved(gold_label, *prediction.label);
    } else {
        add_unresolved(gold_label);
    }
}

void ConfusionMatrix::add_resolved(const std::string& gold_label, const std::string& predicted_label) {
    auto gold = index_.find(gold_label);
    auto predicted = index_.find(predicted_label);
    if (gold == index_.end()) throw Error(ErrorKind::data, "gold label not in catalog: " + gold_label);
    if (predicted == index_.end()) {
        throw Error(ErrorKind::data, "resolved prediction not in catalog: " + predicted_label);
    }
    ++cells_[gold->second][predicted->second];
    ++total_;
}

void ConfusionMatrix::add_unresolved(const std::string& gold_label) {
    auto gold = index_.find(gold_label);
    if (gold == index_.end()) throw Error(ErrorKind::data, "gold label not in catalog: " + gold_label);
    ++cells_[gold->second][labels_.size()];
    ++total_;
}

std::size_t ConfusionMatrix::cell(std::size_t gold_index, std::size_t predicted_index) const {
    return cells_.at(gold_index).at(predicted_index);
}

std::size_t ConfusionMatrix::unresolved_count(std::size_t gold_index) const {
    return cells_.at(gold_index).back();
}

std::size_t ConfusionMatrix::row_sum(std::size_t gold_index) const {
    std::size_t sum = 0;
    for (std::size_t value : cells_.at(gold_index)) sum += value;
    return sum;
}

std::size_t ConfusionMatrix::column_sum(std::size_t predicted_index) const {
    std::size_t sum = 0;
    for (const auto& row : cells_) sum += row.at(predicted_index);
    return sum;
}

ConfusionMatrix build_confusion(const std::vector<GoldRelation>& gold,
                                const std::vector<NormalizedPrediction>& predictions,
                                const LabelCatalog& catalog) {
    if (gold.size() != predictions.size()) {
        throw Error(ErrorKind::data, "build_confusion: " + std::to_string(gold.size()) + " gold labels vs " +
                                         std::to_string(predictions.size()) + " predictions");
    }
    ConfusionMatrix matrix(catalog);
    for (std::size_t i = 0; i < gold.size(); ++i) {
        matrix.add(gold[i].label, predictions[i]);
    }
    return matrix;
}

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& matrix) {
    std::vector<ClassMetrics> out;
    const auto& labels = matrix.labels();
    out.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        ClassMetrics metrics;
        metrics.label = labels[i];
        metrics.support = matrix.row_sum(i);
        const std::size_t diagonal = matrix.cell(i, i);
        const std::size_t predicted = matrix.column_sum(i);
        // zero-denominator convention: 0, keeps support accounting exact
        metrics.precision = predicted > 0 ? static_cast<double>(diagonal) / static_cast<double>(predicted) : 0.0;
        metrics.recall =
            metrics.support > 0 ? static_cast<double>(diagonal) / static_cast<double>(metrics.support) : 0.0;
        const double pr = metrics.precision + metrics.recall;
        metrics.f1 = pr > 0.0 ? 2.0 * metrics.precision * metrics.recall / pr : 0.0;
        out.push_back(std::move(metrics));
    }
    return out;
}

WeightedReport weighted_report(const std::vector<ClassMetrics>& per_class, WeightedOptions options) {
    WeightedReport report;
    report.per_class = per_class;
    for (const auto& metrics : per_class) {
        if (options.exclude_none && metrics.label == options.none_label) continue;
        report.total_support += metrics.support;
    }
    if (report.total_support == 0) {
        throw Error(ErrorKind::data, "weighted_report: zero total support");
    }
    for (const auto& metrics : per_class) {
        if (metrics.support == 0) continue;
        if (options.exclude_none && metrics.label == options.none_label) continue;
        const double weight =
            static_cast<double>(metrics.support) / static_cast<double>(report.total_support);
        report.weighted_precision += weight * metrics.precision;
        report.weighted_recall += weight * metrics.recall;
        report.weighted_f1 += weight * metrics.f1;
    }
    return report;
}

BiasReport bias_diagnostics(const std::vector<NormalizedPrediction>& predictions, const LabelCatalog& catalog) {
    BiasReport report;
    std::size_t unresolved = 0;
    for (const auto& prediction : predictions) {
        if (prediction.resolved()) {
            ++report.per_label[*prediction.label];
        } else {
            ++unresolved;
        }
    }
    report.distinct_labels_used = report.per_label.size();
    report.unresolved_rate =
        predictions.empty() ? 0.0 : static_cast<double>(unresolved) / static_cast<double>(predictions.size());

    std::optional<std::pair<std::string, std::size_t>> top;
    for (const auto& label : catalog.canonical_labels()) { // catalog order breaks ties
        auto it = report.per_label.find(label);
        if (it == report.per_label.end()) continue;
        if (!top || it->second > top->second) top = {label, it->second};
    }
    report.top_label = top;
    return report;
}

json to_json(const WeightedReport& report) {
    json per_class = json::array();
    for (const auto& metrics : report.per_class) {
        per_class.push_back({{"label", metrics.label},
                             {"precision", metrics.precision},
                             {"recall", metrics.recall},
                             {"f1", metrics.f1},
                             {"support", metrics.support}});
    }
    return json{{"per_class", std::move(per_class)},
                {"weighted_precision", report.weighted_precision},
                {"weighted_recall", report.weighted_recall},
                {"weighted_f1", report.weighted_f1},
                {"total_support", report.total_support}};
}

json to_json(const BiasReport& report) {
    json doc;
    doc["distinct_labels_used"] = report.distinct_labels_used;
    doc["unresolved_rate"] = report.unresolved_rate;
    doc["per_label"] = report.per_label;
    if (report.top_label) {
        doc["top_label"] = {{"label", report.top_label->first}, {"count", report.top_label->second}};
    } else {
        doc["top_label"] = nullptr;
    }
    return doc;
}

namespace {

std::string percent(double value) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << value * 100.0;
    return out.str();
}

} // namespace

std::string to_table(const WeightedReport& report) {
    std::size_t width = std::string("Weighted").size();
    for (const auto& metrics : report.per_class) width = std::max(width, metrics.label.size());

    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(width)) << "Label" << std::right << std::setw(9) << "P"
        << std::setw(9) << "R" << std::setw(9) << "F1" << std::setw(10) << "Support" << "\n";
    for (const auto& metrics : report.per_class) {
        out << std::left << std::setw(static_cast<int>(width)) << metrics.label << std::right << std::setw(9)
            << percent(metrics.precision) << std::setw(9) << percent(metrics.recall) << std::setw(9)
            << percent(metrics.f1) << std::setw(10) << metrics.support << "\n";
    }
    out << std::left << std::setw(static_cast<int>(width)) << "Weighted" << std::right << std::setw(9)
        << percent(report.weighted_precision) << std::setw(9) << percent(report.weighted_recall) << std::setw(9)
        << percent(report.weighted_f1) << std::setw(10) << report.total_support << "\n";
    return out.str();
}

std::string to_table(const BiasReport& report) {
    std::ostringstream out;
    out << "distinct labels used: " << report.distinct_labels_used << "\n";
    if (report.top_label) {
        out << "top label: " << report.top_label->first << " (" << report.top_label->second << ")\n";
    } else {
        out << "top label: none\n";
    }
    out << "unresolved rate: " << std::fixed << std::setprecision(4) << report.unresolved_rate << "\n";
    return out.str();
}

} // namespace relex
