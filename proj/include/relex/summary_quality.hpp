#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relex/backend.hpp"

namespace relex {

struct SummaryRecord {
    std::string passage_id;
    std::string entity1_id;
    std::string entity2_id;
    std::string summary_text;
    std::string source_text;
};

struct SimilarityScores {
    double cosine = 0.0;
    double bert_p = 0.0;
    double bert_r = 0.0;
    double bert_f1 = 0.0;
};

struct CorrelationReport {
    std::string pair; // e.g. "cosine_vs_bert_f1"
    std::size_t n = 0;
    std::optional<double> pearson_r; // absent when the pair is degenerate
    std::string note;                // degeneracy reason, when absent
};

double cosine_similarity(std::span<const double> u, std::span<const double> v);

struct BertScore {
    double p = 0.0;
    double r = 0.0;
    double f1 = 0.0;
};

// Greedy max-cosine matching over token sets; no idf weighting, no baseline
// rescaling.
BertScore bertscore(const TokenEmbeddings& candidate, const TokenEmbeddings& reference);

// Sample Pearson coefficient; requires >= 3 points and nonconstant series.
double pearson(std::span<const double> xs, std::span<const double> ys);

SimilarityScores score_summary(const SummaryRecord& record, EmbeddingBackend& embedder);

using ScoredSummary = std::pair<SummaryRecord, SimilarityScores>;

// Pearson r for (cosine, bert_f1) and both similarity metrics against source
// and summary lengths (whitespace tokens). Degenerate pairs are reported,
// not fatal.
std::vector<CorrelationReport> correlation_suite(const std::vector<ScoredSummary>& records);

// CSV rows: passage_id,entity1_id,entity2_id,cosine,bert_p,bert_r,bert_f1,
// source_tokens,summary_tokens — the scatter data behind the similarity plot.
std::string similarity_csv(const std::vector<ScoredSummary>& records);

} // namespace relex
