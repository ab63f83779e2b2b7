#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "relex/labels.hpp"

namespace relex {

enum class HallucinationKind { near_miss, morph_variant, context_phrase };

const char* to_string(HallucinationKind kind);

struct HallucinationRecord {
    HallucinationKind kind = HallucinationKind::context_phrase;
    std::optional<std::string> nearest_label; // canonical; absent for context phrases
    std::string evidence;                     // the matched fragment
};

struct NormalizedPrediction {
    std::string raw_text;
    std::optional<std::string> label; // canonical label when resolved
    std::optional<HallucinationRecord> hallucination;
    bool truncated = false;

    bool resolved() const { return label.has_value(); }
};

// Near-synonym surface -> canonical label. Ships with the single evidenced
// pair (Reduce -> Decrease); extensions load from a "surface -> canonical"
// per-line file.
class SynonymTable {
public:
    static SynonymTable builtin();
    static SynonymTable load(const std::filesystem::path& path, const LabelCatalog& catalog);

    void add(std::string_view surface, std::string_view canonical_label);
    std::optional<std::string> lookup(std::string_view surface) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::string> entries_; // canonicalized surface -> canonical
};

// Earliest fragment of raw model output that reads as a catalog label or
// alias (token-boundary match); otherwise the first non-empty line stripped
// of markdown emphasis, surrounding punctuation, and a leading
// "relation:"-style prefix.
std::string strip_to_label(const std::string& raw, const LabelCatalog& catalog);

// Resolution ladder, first rung wins:
//   1. canonical exact match           -> resolved
//   2. alias hit                       -> resolved iff declared spelling
//                                         variant, else unresolved near_miss
//   3. shared stem (common prefix >=6) -> unresolved morph_variant
//   4. edit distance <= tau or synonym -> unresolved near_miss
//   5. anything else                   -> unresolved context_phrase
// Total and deterministic; at most one hallucination record.
NormalizedPrediction resolve_label(const std::string& candidate, const LabelCatalog& catalog,
                                   const SynonymTable& synonyms, double tau = 0.2);

// strip_to_label + resolve_label over a raw model output.
NormalizedPrediction normalize_output(const std::string& raw, const LabelCatalog& catalog,
                                      const SynonymTable& synonyms, double tau = 0.2, bool truncated = false);

std::size_t levenshtein(std::string_view a, std::string_view b);

// Levenshtein / max(len); 0 for two empty strings.
double normalized_edit_distance(std::string_view a, std::string_view b);

} // namespace relex
