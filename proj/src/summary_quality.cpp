#include "relex/summary_quality.hpp"

#include <cmath>
#include <sstream>

#include "relex/corpus.hpp"
#include "relex/errors.hpp"

namespace relex {

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw Error(ErrorKind::data, "cosine_similarity: dimension mismatch (" + std::to_string(u.size()) +
                                         " vs " + std::to_string(v.size()) + ")");
    }
    if (u.empty()) throw Error(ErrorKind::data, "cosine_similarity: empty vectors");
    double dot = 0.0, norm_u = 0.0, norm_v = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        norm_u += u[i] * u[i];
        norm_v += v[i] * v[i];
    }
    if (norm_u == 0.0 || norm_v == 0.0) {
        throw Error(ErrorKind::data, "cosine_similarity: zero-norm vector");
    }
    return dot / (std::sqrt(norm_u) * std::sqrt(norm_v));
}

BertScore bertscore(const TokenEmbeddings& candidate, const TokenEmbeddings& reference) {
    if (candidate.vectors.empty() || reference.vectors.empty()) {
        throw Error(ErrorKind::data, "bertscore: empty token list");
    }

    auto mean_best_match = [](const std::vector<std::vector<double>>& from,
                              const std::vector<std::vector<double>>& against) {
        double total = 0.0;
        for (const auto& vec : from) {
            double best = -1.0;
            for (const auto& other : against) {
                best = std::max(best, cosine_similarity(vec, other));
            }
            total += best;
        }
        return total / static_cast<double>(from.size());
    };

    BertScore score;
    score.p = mean_best_match(candidate.vectors, reference.vectors);
    score.r = mean_best_match(reference.vectors, candidate.vectors);
    const double sum = score.p + score.r;
    score.f1 = sum > 0.0 ? 2.0 * score.p * score.r / sum : 0.0;
    return score;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw Error(ErrorKind::data, "pearson: length mismatch (" + std::to_string(xs.size()) + " vs " +
                                         std::to_string(ys.size()) + ")");
    }
    if (xs.size() < 3) throw Error(ErrorKind::data, "pearson: need at least 3 points");

    const double n = static_cast<double>(xs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= n;
    mean_y /= n;

    double cov = 0.0, var_x = 0.0, var_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0) {
        throw Error(ErrorKind::data, "pearson: constant series");
    }
    return cov / std::sqrt(var_x * var_y);
}

SimilarityScores score_summary(const SummaryRecord& record, EmbeddingBackend& embedder) {
    if (record.summary_text.empty()) {
        throw Error(ErrorKind::data, "score_summary: empty summary for passage " + record.passage_id);
    }
    SimilarityScores scores;
    const auto summary_vec = embedder.embed_text(record.summary_text);
    const auto source_vec = embedder.embed_text(record.source_text);
    scores.cosine = cosine_similarity(summary_vec, source_vec);

    const auto summary_tokens = embedder.embed_tokens(record.summary_text);
    const auto source_tokens = embedder.embed_tokens(record.source_text);
    const BertScore bert = bertscore(summary_tokens, source_tokens);
    scores.bert_p = bert.p;
    scores.bert_r = bert.r;
    scores.bert_f1 = bert.f1;
    return scores;
}

std::vector<CorrelationReport> correlation_suite(const std::vector<ScoredSummary>& records) {
    if (records.size() < 3) {
        throw Error(ErrorKind::data, "correlation_suite: need at least 3 records, got " +
                                         std::to_string(records.size()));
    }

    std::vector<double> cosine, bert_f1, source_len, summary_len;
    for (const auto& [record, scores] : records) {
        cosine.push_back(scores.cosine);
        bert_f1.push_back(scores.bert_f1);
        source_len.push_back(static_cast<double>(whitespace_token_count(record.source_text)));
        summary_len.push_back(static_cast<double>(whitespace_token_count(record.summary_text)));
    }

    struct Pair {
        const char* name;
        const std::vector<double>* xs;
        const std::vector<double>* ys;
    };
    const Pair pairs[] = {
        {"cosine_vs_bert_f1", &cosine, &bert_f1},
        {"source_tokens_vs_cosine", &source_len, &cosine},
        {"source_tokens_vs_bert_f1", &source_len, &bert_f1},
        {"summary_tokens_vs_cosine", &summary_len, &cosine},
        {"summary_tokens_vs_bert_f1", &summary_len, &bert_f1},
    };

    std::vector<CorrelationReport> reports;
    for (const auto& pair : pairs) {
        CorrelationReport report;
        report.pair = pair.name;
        report.n = records.size();
        try {
            report.pearson_r = pearson(*pair.xs, *pair.ys);
        } catch (const Error& e) {
            report.pearson_r = std::nullopt;
            report.note = e.what();
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

std::string similarity_csv(const std::vector<ScoredSummary>& records) {
    std::ostringstream out;
    out << "passage_id,entity1_id,entity2_id,cosine,bert_p,bert_r,bert_f1,source_tokens,summary_tokens\n";
    out.precision(17);
    for (const auto& [record, scores] : records) {
        out << record.passage_id << ',' << record.entity1_id << ',' << record.entity2_id << ',' << scores.cosine
            << ',' << scores.bert_p << ',' << scores.bert_r << ',' << scores.bert_f1 << ','
            << whitespace_token_count(record.source_text) << ',' << whitespace_token_count(record.summary_text)
            << "\n";
    }
    return out.str();
}

} // namespace relex
