#include "relex/labels.hpp"

#include <cctype>

#include "relex/errors.hpp"
#include "relex/jsonio.hpp"

namespace relex {

std::string canonicalize_surface(std::string_view raw) {
    std::size_t begin = 0;
    std::size_t end = raw.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;

    std::string out;
    out.reserve(end - begin);
    bool in_space_run = false;
    for (std::size_t i = begin; i < end; ++i) {
        const unsigned char c = static_cast<unsigned char>(raw[i]);
        if (std::isspace(c)) {
            in_space_run = true;
            continue;
        }
        if (in_space_run) {
            out.push_back('_');
            in_space_run = false;
        }
        if (c == '-') {
            out.push_back('_');
        } else {
            out.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    return out;
}

namespace {

const char* kMicrobioRelNames[] = {
    "Increase", "Decrease", "Stop", "Start", "Improve", "Worsen", "Presence",
    "Negative_correlation", "Affects", "Causes", "Complicates", "Experiences",
    "Interacts_with", "Location_of", "Marker/Mechanism", "Prevents", "Reveals",
    "Treats", "Physically_related_to", "Part_of", "Possible", "Associated_with",
    "None",
};

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

LabelCatalog LabelCatalog::microbiorel() {
    std::vector<RelationLabel> labels;
    labels.reserve(std::size(kMicrobioRelNames));
    for (const char* name : kMicrobioRelNames) {
        RelationLabel label;
        label.canonical_name = name;
        label.is_none_class = (label.canonical_name == "None");
        labels.push_back(std::move(label));
    }
    // The dataset statistics table spells Marker/Mechanism with a hyphen.
    for (auto& label : labels) {
        if (label.canonical_name == "Marker/Mechanism") {
            label.aliases.push_back({"Marker-Mechanism", true});
        }
    }
    return from_labels(std::move(labels), 1994);
}

LabelCatalog LabelCatalog::from_labels(std::vector<RelationLabel> labels,
                                       std::optional<std::size_t> reference_annotated_total) {
    LabelCatalog catalog;
    catalog.labels_ = std::move(labels);
    catalog.reference_total_ = reference_annotated_total;
    catalog.build_index();
    return catalog;
}

LabelCatalog LabelCatalog::from_config(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path.string()));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config, "catalog config " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("labels") || !doc["labels"].is_array()) {
        throw Error(ErrorKind::config, "catalog config " + path.string() + ": expected {\"labels\": [...]}");
    }
    std::vector<RelationLabel> labels;
    for (const auto& entry : doc["labels"]) {
        RelationLabel label;
        if (entry.is_string()) {
            label.canonical_name = entry.get<std::string>();
        } else if (entry.is_object()) {
            label.canonical_name = entry.value("name", "");
            label.is_none_class = entry.value("none", false);
            if (entry.contains("aliases")) {
                for (const auto& alias : entry["aliases"]) {
                    if (alias.is_string()) {
                        label.aliases.push_back({alias.get<std::string>(), true});
                    } else {
                        label.aliases.push_back({alias.value("surface", ""),
                                                 alias.value("spelling_variant", true)});
                    }
                }
            }
        } else {
            throw Error(ErrorKind::config, "catalog config: label entries must be strings or objects");
        }
        labels.push_back(std::move(label));
    }
    std::optional<std::size_t> reference;
    if (doc.contains("reference_annotated_total")) {
        reference = doc["reference_annotated_total"].get<std::size_t>();
    }
    return from_labels(std::move(labels), reference);
}

void LabelCatalog::build_index() {
    surface_index_.clear();
    order_.clear();
    none_label_.clear();

    std::size_t none_count = 0;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        RelationLabel& label = labels_[i];
        label.canonical_name = trimmed(label.canonical_name);
        if (label.canonical_name.empty()) {
            throw Error(ErrorKind::config, "catalog: empty canonical label name at index " + std::to_string(i));
        }
        if (order_.count(label.canonical_name)) {
            throw Error(ErrorKind::config, "catalog: duplicate canonical label: " + label.canonical_name);
        }
        order_[label.canonical_name] = i;

        const std::string canon = canonicalize_surface(label.canonical_name);
        if (surface_index_.count(canon)) {
            throw Error(ErrorKind::config,
                        "catalog: canonical form collision on '" + label.canonical_name + "'");
        }
        surface_index_[canon] = SurfaceHit{label.canonical_name, true, true};

        if (label.is_none_class) {
            ++none_count;
            none_label_ = label.canonical_name;
        }
    }
    // Without an explicit flag, a label literally named None takes the role.
    if (none_count == 0) {
        auto it = order_.find("None");
        if (it != order_.end()) {
            labels_[it->second].is_none_class = true;
            none_label_ = "None";
            none_count = 1;
        }
    }
    if (none_count != 1) {
        throw Error(ErrorKind::config, "catalog: exactly one label must carry the none-class flag (found " +
                                           std::to_string(none_count) + ")");
    }

    for (const auto& label : labels_) {
        for (const auto& alias : label.aliases) {
            const std::string canon = canonicalize_surface(alias.surface);
            if (canon.empty()) {
                throw Error(ErrorKind::config, "catalog: empty alias on label " + label.canonical_name);
            }
            auto [it, inserted] =
                surface_index_.insert({canon, SurfaceHit{label.canonical_name, false, alias.spelling_variant}});
            if (!inserted && it->second.canonical != label.canonical_name) {
                throw Error(ErrorKind::config, "catalog: alias '" + alias.surface + "' collides across labels '" +
                                                   it->second.canonical + "' and '" + label.canonical_name + "'");
            }
        }
    }
}

std::vector<std::string> LabelCatalog::canonical_labels() const {
    std::vector<std::string> names;
    names.reserve(labels_.size());
    for (const auto& label : labels_) names.push_back(label.canonical_name);
    return names;
}

bool LabelCatalog::contains(std::string_view canonical_name) const {
    return order_.count(std::string(canonical_name)) > 0;
}

std::optional<LabelCatalog::SurfaceHit> LabelCatalog::resolve_surface(std::string_view raw) const {
    auto it = surface_index_.find(canonicalize_surface(raw));
    if (it == surface_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> LabelCatalog::index_of(std::string_view canonical_name) const {
    auto it = order_.find(std::string(canonical_name));
    if (it == order_.end()) return std::nullopt;
    return it->second;
}

} // namespace relex
