#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relex/labels.hpp"

namespace relex {

enum class EntityCategory { species, disease, chemical, mutation, gene, cell_line };

const char* to_string(EntityCategory category);
std::optional<EntityCategory> entity_category_from_string(std::string_view name);

struct EntityMention {
    std::string id;
    std::string surface;
    EntityCategory category = EntityCategory::species;
    std::size_t start = 0; // byte offsets into the passage text, [start, end)
    std::size_t end = 0;
};

struct PassageRecord {
    std::string passage_id;
    std::string document_id;
    std::string text;
    std::vector<EntityMention> entities;

    const EntityMention* find_entity(std::string_view entity_id) const;
};

enum class Provenance { annotated, generated_none };
enum class Split { unassigned, train, test };

const char* to_string(Provenance provenance);
const char* to_string(Split split);

struct GoldRelation {
    std::string passage_id;
    std::string entity1_id;
    std::string entity2_id;
    std::string label; // canonical
    Provenance provenance = Provenance::annotated;
    Split split = Split::unassigned;
};

// Immutable after load; stats and pair generation are pure functions.
struct Corpus {
    std::vector<PassageRecord> passages;
    std::vector<GoldRelation> relations;

    const PassageRecord* find_passage(std::string_view passage_id) const;
    std::vector<GoldRelation> relations_for(std::string_view passage_id) const;
};

struct LabelHistogram {
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;

    // Annotated relations only (excludes generated None pairs).
    std::size_t annotated_total = 0;
};

// Cap on generated None pairs per passage:
//   cap = max(floor, ceil(ratio * whitespace-token count of the passage text))
struct NonePolicy {
    std::size_t floor = 1;
    double ratio = 0.05;
};

struct LoadOptions {
    // Spans are compared to surfaces after collapsing whitespace runs unless
    // strict mode is on.
    bool strict_spans = false;
};

Corpus load_corpus(const std::filesystem::path& path, const LabelCatalog& catalog, LoadOptions options = {});

// Canonical re-serialization; load -> save -> load is a fixed point.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// All unordered entity pairs not annotated (in either order) as related,
// capped per NonePolicy by a seeded sample. Deterministic in all arguments;
// output sorted by (entity1_id, entity2_id).
std::vector<GoldRelation> generate_none_pairs(const PassageRecord& passage,
                                              const std::vector<GoldRelation>& gold,
                                              const NonePolicy& policy, std::uint64_t seed,
                                              const LabelCatalog& catalog);

LabelHistogram corpus_stats(const std::vector<GoldRelation>& relations);

// Discrepancy note when the annotated total disagrees with the taxonomy's
// published reference figure; surfaced, never silently reconciled.
std::optional<std::string> reference_total_note(const LabelHistogram& histogram, const LabelCatalog& catalog);

// Seeded stratified-by-label split for relations still unassigned.
void assign_missing_splits(Corpus& corpus, double train_ratio, std::uint64_t seed);

std::size_t whitespace_token_count(std::string_view text);

} // namespace relex
