#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace relex {

// Comparison form shared by label resolution and exact-match scoring:
// lowercase, trimmed, internal whitespace runs collapsed, space and hyphen
// mapped to underscore. '/' is kept so Marker/Mechanism stays distinct.
// Idempotent.
std::string canonicalize_surface(std::string_view raw);

struct LabelAlias {
    std::string surface;
    // Declared spelling variants (e.g. Marker-Mechanism) resolve to the
    // canonical label during scoring; other aliases only guide diagnostics.
    bool spelling_variant = true;
};

struct RelationLabel {
    std::string canonical_name;
    std::vector<LabelAlias> aliases;
    bool is_none_class = false;
};

// Immutable after construction; safe to share across pipeline workers.
class LabelCatalog {
public:
    struct SurfaceHit {
        std::string canonical;
        bool exact = false;            // matched the canonical name itself
        bool spelling_variant = false; // alias flagged as a spelling variant
    };

    // The built-in 23-class taxonomy: 22 relation types plus None.
    static LabelCatalog microbiorel();
    // Custom taxonomy from a JSON config (see README for the schema).
    static LabelCatalog from_config(const std::filesystem::path& path);
    static LabelCatalog from_labels(std::vector<RelationLabel> labels,
                                    std::optional<std::size_t> reference_annotated_total = {});

    const std::vector<RelationLabel>& labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }

    // Ordered canonical names; stable across calls.
    std::vector<std::string> canonical_labels() const;

    bool contains(std::string_view canonical_name) const;
    const std::string& none_label() const { return none_label_; }

    // Lookup by raw surface text; matches canonical names and aliases after
    // canonicalization.
    std::optional<SurfaceHit> resolve_surface(std::string_view raw) const;

    // Position in catalog order, if the canonical name is known.
    std::optional<std::size_t> index_of(std::string_view canonical_name) const;

    // Published corpus-level annotated-relation figure, when the taxonomy
    // ships with one (the built-in catalog's dataset description says 1,994).
    std::optional<std::size_t> reference_annotated_total() const { return reference_total_; }

private:
    std::vector<RelationLabel> labels_;
    std::unordered_map<std::string, SurfaceHit> surface_index_; // canonicalized form -> hit
    std::unordered_map<std::string, std::size_t> order_;        // canonical name -> index
    std::string none_label_;
    std::optional<std::size_t> reference_total_;

    void build_index();
};

} // namespace relex
