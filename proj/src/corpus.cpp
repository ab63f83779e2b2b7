#include "relex/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "relex/errors.hpp"
#include "relex/hash.hpp"
#include "relex/jsonio.hpp"
#include "relex/rng.hpp"

namespace relex {

const char* to_string(EntityCategory category) {
    switch (category) {
        case EntityCategory::species: return "species";
        case EntityCategory::disease: return "disease";
        case EntityCategory::chemical: return "chemical";
        case EntityCategory::mutation: return "mutation";
        case EntityCategory::gene: return "gene";
        case EntityCategory::cell_line: return "cell_line";
    }
    return "unknown";
}

std::optional<EntityCategory> entity_category_from_string(std::string_view name) {
    if (name == "species") return EntityCategory::species;
    if (name == "disease") return EntityCategory::disease;
    if (name == "chemical") return EntityCategory::chemical;
    if (name == "mutation") return EntityCategory::mutation;
    if (name == "gene") return EntityCategory::gene;
    if (name == "cell_line") return EntityCategory::cell_line;
    return std::nullopt;
}

const char* to_string(Provenance provenance) {
    return provenance == Provenance::annotated ? "annotated" : "generated_none";
}

const char* to_string(Split split) {
    switch (split) {
        case Split::train: return "train";
        case Split::test: return "test";
        case Split::unassigned: return "unassigned";
    }
    return "unassigned";
}

const EntityMention* PassageRecord::find_entity(std::string_view entity_id) const {
    for (const auto& entity : entities) {
        if (entity.id == entity_id) return &entity;
    }
    return nullptr;
}

const PassageRecord* Corpus::find_passage(std::string_view passage_id) const {
    for (const auto& passage : passages) {
        if (passage.passage_id == passage_id) return &passage;
    }
    return nullptr;
}

std::vector<GoldRelation> Corpus::relations_for(std::string_view passage_id) const {
    std::vector<GoldRelation> out;
    for (const auto& relation : relations) {
        if (relation.passage_id == passage_id) out.push_back(relation);
    }
    return out;
}

std::size_t whitespace_token_count(std::string_view text) {
    std::size_t count = 0;
    bool in_token = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            in_token = false;
        } else if (!in_token) {
            in_token = true;
            ++count;
        }
    }
    return count;
}

namespace {

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_space = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(static_cast<char>(c));
    }
    return out;
}

struct RecordContext {
    const std::string& path;
    std::size_t line_no;
};

[[noreturn]] void record_error(const RecordContext& ctx, const std::string& message) {
    throw Error(ErrorKind::data, ctx.path + ": record at line " + std::to_string(ctx.line_no) + ": " + message);
}

PassageRecord parse_passage(const RecordContext& ctx, const json& record, const LoadOptions& options) {
    PassageRecord passage;
    if (!record.is_object()) record_error(ctx, "expected a JSON object");
    for (const char* field : {"passage_id", "text"}) {
        if (!record.contains(field) || !record[field].is_string()) {
            record_error(ctx, std::string("missing or non-string field '") + field + "'");
        }
    }
    passage.passage_id = record["passage_id"].get<std::string>();
    passage.document_id = record.value("document_id", "");
    passage.text = record["text"].get<std::string>();

    std::unordered_set<std::string> seen_ids;
    for (const auto& raw : record.value("entities", json::array())) {
        EntityMention entity;
        entity.id = raw.value("id", "");
        entity.surface = raw.value("surface", "");
        if (entity.id.empty()) record_error(ctx, "entity with empty id");
        if (!seen_ids.insert(entity.id).second) {
            record_error(ctx, "duplicate entity id '" + entity.id + "'");
        }
        const std::string category = raw.value("category", "");
        auto parsed_category = entity_category_from_string(category);
        if (!parsed_category) {
            record_error(ctx, "entity '" + entity.id + "': unknown category '" + category + "'");
        }
        entity.category = *parsed_category;
        if (!raw.contains("start") || !raw.contains("end")) {
            record_error(ctx, "entity '" + entity.id + "': missing span offsets");
        }
        entity.start = raw["start"].get<std::size_t>();
        entity.end = raw["end"].get<std::size_t>();
        if (entity.start >= entity.end || entity.end > passage.text.size()) {
            record_error(ctx, "entity '" + entity.id + "': span [" + std::to_string(entity.start) + ", " +
                                  std::to_string(entity.end) + ") out of bounds for text of length " +
                                  std::to_string(passage.text.size()));
        }
        const std::string sliced = passage.text.substr(entity.start, entity.end - entity.start);
        const bool matches = options.strict_spans
                                 ? sliced == entity.surface
                                 : collapse_whitespace(sliced) == collapse_whitespace(entity.surface);
        if (!matches) {
            record_error(ctx, "entity '" + entity.id + "': span text '" + sliced + "' does not match surface '" +
                                  entity.surface + "'");
        }
        passage.entities.push_back(std::move(entity));
    }
    return passage;
}

GoldRelation parse_relation(const RecordContext& ctx, const json& raw, const PassageRecord& passage,
                            const LabelCatalog& catalog) {
    GoldRelation relation;
    relation.passage_id = passage.passage_id;
    relation.entity1_id = raw.value("entity1_id", "");
    relation.entity2_id = raw.value("entity2_id", "");
    relation.label = raw.value("label", "");
    if (relation.entity1_id == relation.entity2_id) {
        record_error(ctx, "relation references the same entity twice: '" + relation.entity1_id + "'");
    }
    for (const auto* id : {&relation.entity1_id, &relation.entity2_id}) {
        if (!passage.find_entity(*id)) {
            record_error(ctx, "relation references unknown entity '" + *id + "'");
        }
    }
    if (!catalog.contains(relation.label)) {
        record_error(ctx, "label '" + relation.label + "' not in catalog");
    }
    const std::string provenance = raw.value("provenance", "annotated");
    if (provenance == "annotated") {
        relation.provenance = Provenance::annotated;
    } else if (provenance == "generated_none") {
        relation.provenance = Provenance::generated_none;
        if (relation.label != catalog.none_label()) {
            record_error(ctx, "generated_none relation must carry the None label, got '" + relation.label + "'");
        }
    } else {
        record_error(ctx, "unknown provenance '" + provenance + "'");
    }
    const std::string split = raw.value("split", "");
    if (split == "train") relation.split = Split::train;
    else if (split == "test") relation.split = Split::test;
    else if (split.empty()) relation.split = Split::unassigned;
    else record_error(ctx, "unknown split '" + split + "'");
    return relation;
}

std::pair<std::string, std::string> unordered_pair_key(const std::string& a, const std::string& b) {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

} // namespace

Corpus load_corpus(const std::filesystem::path& path, const LabelCatalog& catalog, LoadOptions options) {
    Corpus corpus;
    const std::string path_str = path.string();
    std::unordered_set<std::string> passage_ids;
    std::set<std::tuple<std::string, std::string, std::string>> relation_keys;

    for_each_jsonl(path_str, [&](std::size_t line_no, const json& record) {
        RecordContext ctx{path_str, line_no};
        PassageRecord passage = parse_passage(ctx, record, options);
        if (!passage_ids.insert(passage.passage_id).second) {
            record_error(ctx, "duplicate passage_id '" + passage.passage_id + "'");
        }
        const auto& relations = record.value("relations", json::array());
        if (!relations.empty() && passage.entities.size() < 2) {
            record_error(ctx, "passage '" + passage.passage_id + "' carries relations but fewer than two entities");
        }
        for (const auto& raw : relations) {
            GoldRelation relation = parse_relation(ctx, raw, passage, catalog);
            auto key = std::make_tuple(relation.passage_id, relation.entity1_id, relation.entity2_id);
            if (!relation_keys.insert(key).second) {
                record_error(ctx, "duplicate relation for pair (" + relation.entity1_id + ", " +
                                      relation.entity2_id + ")");
            }
            corpus.relations.push_back(std::move(relation));
        }
        corpus.passages.push_back(std::move(passage));
    });

    if (corpus.passages.empty()) {
        throw Error(ErrorKind::data, path_str + ": no records");
    }
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    std::ostringstream out;
    for (const auto& passage : corpus.passages) {
        json record;
        record["passage_id"] = passage.passage_id;
        record["document_id"] = passage.document_id;
        record["text"] = passage.text;
        json entities = json::array();
        for (const auto& entity : passage.entities) {
            entities.push_back({{"id", entity.id},
                                {"surface", entity.surface},
                                {"category", to_string(entity.category)},
                                {"start", entity.start},
                                {"end", entity.end}});
        }
        record["entities"] = std::move(entities);
        json relations = json::array();
        for (const auto& relation : corpus.relations) {
            if (relation.passage_id != passage.passage_id) continue;
            json r = {{"entity1_id", relation.entity1_id},
                      {"entity2_id", relation.entity2_id},
                      {"label", relation.label},
                      {"provenance", to_string(relation.provenance)}};
            if (relation.split != Split::unassigned) r["split"] = to_string(relation.split);
            relations.push_back(std::move(r));
        }
        record["relations"] = std::move(relations);
        out << record.dump() << "\n";
    }
    write_file(path.string(), out.str());
}

std::vector<GoldRelation> generate_none_pairs(const PassageRecord& passage,
                                              const std::vector<GoldRelation>& gold,
                                              const NonePolicy& policy, std::uint64_t seed,
                                              const LabelCatalog& catalog) {
    for (const auto& relation : gold) {
        if (relation.passage_id != passage.passage_id) {
            throw Error(ErrorKind::data, "generate_none_pairs: gold relation references passage '" +
                                             relation.passage_id + "', expected '" + passage.passage_id + "'");
        }
    }

    std::set<std::pair<std::string, std::string>> annotated;
    for (const auto& relation : gold) {
        annotated.insert(unordered_pair_key(relation.entity1_id, relation.entity2_id));
    }

    std::vector<std::pair<std::string, std::string>> candidates;
    for (std::size_t i = 0; i < passage.entities.size(); ++i) {
        for (std::size_t j = i + 1; j < passage.entities.size(); ++j) {
            auto key = unordered_pair_key(passage.entities[i].id, passage.entities[j].id);
            if (!annotated.count(key)) candidates.push_back(std::move(key));
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    const double scaled = policy.ratio * static_cast<double>(whitespace_token_count(passage.text));
    const std::size_t cap = std::max(policy.floor, static_cast<std::size_t>(std::ceil(scaled)));

    auto engine = rng::make_engine(seed);
    auto selected = rng::sample(std::move(candidates), std::min(cap, candidates.size()), engine);
    std::sort(selected.begin(), selected.end());

    std::vector<GoldRelation> out;
    out.reserve(selected.size());
    for (auto& [e1, e2] : selected) {
        GoldRelation relation;
        relation.passage_id = passage.passage_id;
        relation.entity1_id = std::move(e1);
        relation.entity2_id = std::move(e2);
        relation.label = catalog.none_label();
        relation.provenance = Provenance::generated_none;
        out.push_back(std::move(relation));
    }
    return out;
}

LabelHistogram corpus_stats(const std::vector<GoldRelation>& relations) {
    LabelHistogram histogram;
    for (const auto& relation : relations) {
        ++histogram.counts[relation.label];
        ++histogram.total;
        if (relation.provenance == Provenance::annotated) ++histogram.annotated_total;
    }
    return histogram;
}

std::optional<std::string> reference_total_note(const LabelHistogram& histogram, const LabelCatalog& catalog) {
    const auto reference = catalog.reference_annotated_total();
    if (!reference || histogram.annotated_total == *reference) return std::nullopt;
    std::ostringstream note;
    note << "annotated relation total " << histogram.annotated_total << " differs from the published figure of "
         << *reference << " in the dataset description (difference "
         << (static_cast<long long>(*reference) - static_cast<long long>(histogram.annotated_total)) << ")";
    return note.str();
}

void assign_missing_splits(Corpus& corpus, double train_ratio, std::uint64_t seed) {
    if (train_ratio < 0.0 || train_ratio > 1.0) {
        throw Error(ErrorKind::config, "train_ratio must lie in [0, 1]");
    }
    std::map<std::string, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < corpus.relations.size(); ++i) {
        if (corpus.relations[i].split == Split::unassigned) {
            by_label[corpus.relations[i].label].push_back(i);
        }
    }
    for (auto& [label, indices] : by_label) {
        auto engine = rng::make_engine(seed ^ fnv1a64(label));
        rng::shuffle(indices, engine);
        const auto train_count =
            static_cast<std::size_t>(std::llround(train_ratio * static_cast<double>(indices.size())));
        for (std::size_t k = 0; k < indices.size(); ++k) {
            corpus.relations[indices[k]].split = k < train_count ? Split::train : Split::test;
        }
    }
}

} // namespace relex
