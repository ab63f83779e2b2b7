#include "relex/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <vector>

#include "relex/errors.hpp"

namespace relex {

const char* to_string(HallucinationKind kind) {
    switch (kind) {
        case HallucinationKind::near_miss: return "near_miss";
        case HallucinationKind::morph_variant: return "morph_variant";
        case HallucinationKind::context_phrase: return "context_phrase";
    }
    return "unknown";
}

SynonymTable SynonymTable::builtin() {
    SynonymTable table;
    table.add("Reduce", "Decrease");
    return table;
}

SynonymTable SynonymTable::load(const std::filesystem::path& path, const LabelCatalog& catalog) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "cannot open synonym file: " + path.string());
    SynonymTable table = builtin();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const std::size_t arrow = line.find("->");
        if (arrow == std::string::npos) {
            throw Error(ErrorKind::config,
                        path.string() + ":" + std::to_string(line_no) + ": expected 'surface -> canonical'");
        }
        const std::string surface = line.substr(0, arrow);
        const std::string target = line.substr(arrow + 2);
        auto hit = catalog.resolve_surface(target);
        if (!hit || !hit->exact) {
            throw Error(ErrorKind::config, path.string() + ":" + std::to_string(line_no) +
                                               ": synonym target '" + target + "' is not a canonical label");
        }
        table.add(surface, hit->canonical);
    }
    return table;
}

void SynonymTable::add(std::string_view surface, std::string_view canonical_label) {
    entries_[canonicalize_surface(surface)] = std::string(canonical_label);
}

std::optional<std::string> SynonymTable::lookup(std::string_view surface) const {
    auto it = entries_.find(canonicalize_surface(surface));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
    if (a.size() > b.size()) std::swap(a, b);
    std::vector<std::size_t> row(a.size() + 1);
    for (std::size_t i = 0; i <= a.size(); ++i) row[i] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
        std::size_t previous_diagonal = row[0];
        row[0] = j;
        for (std::size_t i = 1; i <= a.size(); ++i) {
            const std::size_t insert_or_delete = std::min(row[i], row[i - 1]) + 1;
            const std::size_t substitute = previous_diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
            previous_diagonal = row[i];
            row[i] = std::min(insert_or_delete, substitute);
        }
    }
    return row[a.size()];
}

double normalized_edit_distance(std::string_view a, std::string_view b) {
    const std::size_t longest = std::max(a.size(), b.size());
    if (longest == 0) return 0.0;
    return static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

namespace {

// Word tokens for label scanning: runs of letters/digits (plus '/' so
// Marker/Mechanism stays one token); '_' and '-' act as separators. Byte
// offsets are kept so the original fragment can be returned verbatim.
struct RawToken {
    std::string lower;
    std::size_t begin = 0;
    std::size_t end = 0;
};

bool is_word_char(unsigned char c) { return std::isalnum(c) || c == '/' || c >= 0x80; }

std::vector<RawToken> scan_tokens(std::string_view text) {
    std::vector<RawToken> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (!is_word_char(c)) {
            ++i;
            continue;
        }
        RawToken token;
        token.begin = i;
        while (i < text.size() && is_word_char(static_cast<unsigned char>(text[i]))) {
            token.lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
            ++i;
        }
        token.end = i;
        tokens.push_back(std::move(token));
    }
    return tokens;
}

std::vector<std::string> surface_tokens(std::string_view surface) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : surface) {
        if (is_word_char(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string first_non_empty_line(const std::string& raw) {
    std::size_t pos = 0;
    while (pos < raw.size()) {
        std::size_t eol = raw.find('\n', pos);
        if (eol == std::string::npos) eol = raw.size();
        std::string_view line(raw.data() + pos, eol - pos);
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) return std::string(line);
        }
        pos = eol + 1;
    }
    return {};
}

bool is_emphasis_or_punct(unsigned char c) {
    return std::ispunct(c) && c != '/'; // keep slashes (Marker/Mechanism)
}

std::string strip_decoration(std::string line) {
    // surrounding punctuation and markdown emphasis markers
    std::size_t begin = 0;
    std::size_t end = line.size();
    auto strippable = [&](std::size_t i) {
        const unsigned char c = static_cast<unsigned char>(line[i]);
        return std::isspace(c) || is_emphasis_or_punct(c);
    };
    while (begin < end && strippable(begin)) ++begin;
    while (end > begin && strippable(end - 1)) --end;
    return line.substr(begin, end - begin);
}

// Removes one leading "relation:"-style prefix, e.g. "The extracted relation
// is:" or "Answer -".
std::string strip_label_prefix(std::string line) {
    static const std::vector<std::string> kNouns = {
        "relation", "relationship", "label", "answer", "output", "class", "prediction",
    };
    auto tokens = scan_tokens(line);
    std::size_t consumed = 0;
    std::size_t cursor = 0;
    if (cursor < tokens.size() && tokens[cursor].lower == "the") ++cursor;
    if (cursor < tokens.size()) {
        static const std::vector<std::string> kQualifiers = {"extracted", "predicted", "annotated", "expressed",
                                                             "final"};
        if (std::find(kQualifiers.begin(), kQualifiers.end(), tokens[cursor].lower) != kQualifiers.end()) {
            ++cursor;
        }
    }
    if (cursor < tokens.size() &&
        std::find(kNouns.begin(), kNouns.end(), tokens[cursor].lower) != kNouns.end()) {
        ++cursor;
        if (cursor < tokens.size() && tokens[cursor].lower == "is") ++cursor;
        consumed = tokens[cursor - 1].end;
        // require a separator after the prefix words
        std::size_t i = consumed;
        bool saw_separator = false;
        while (i < line.size()) {
            const unsigned char c = static_cast<unsigned char>(line[i]);
            if (c == ':' || c == '-' || c == '=' || c == '*') {
                saw_separator = true;
                ++i;
            } else if (std::isspace(c)) {
                ++i;
            } else {
                break;
            }
        }
        if (saw_separator) return line.substr(i);
    }
    return line;
}

} // namespace

std::string strip_to_label(const std::string& raw, const LabelCatalog& catalog) {
    if (raw.empty()) return {};

    const auto tokens = scan_tokens(raw);

    // Token sequences for every catalog surface (canonical names + aliases).
    struct Surface {
        std::vector<std::string> tokens;
    };
    std::vector<Surface> surfaces;
    for (const auto& label : catalog.labels()) {
        surfaces.push_back({surface_tokens(label.canonical_name)});
        for (const auto& alias : label.aliases) {
            surfaces.push_back({surface_tokens(alias.surface)});
        }
    }

    std::optional<std::pair<std::size_t, std::size_t>> best; // token index, surface length
    for (std::size_t start = 0; start < tokens.size(); ++start) {
        for (const auto& surface : surfaces) {
            if (surface.tokens.empty() || start + surface.tokens.size() > tokens.size()) continue;
            bool match = true;
            for (std::size_t k = 0; k < surface.tokens.size(); ++k) {
                if (tokens[start + k].lower != surface.tokens[k]) {
                    match = false;
                    break;
                }
            }
            if (match && (!best || surface.tokens.size() > best->second)) {
                best = {start, surface.tokens.size()};
            }
        }
        if (best && best->first == start) break; // earliest position wins; longest at that position
    }
    if (best) {
        const std::size_t from = tokens[best->first].begin;
        const std::size_t to = tokens[best->first + best->second - 1].end;
        return raw.substr(from, to - from);
    }

    std::string line = first_non_empty_line(raw);
    line = strip_decoration(std::move(line));
    line = strip_label_prefix(std::move(line));
    line = strip_decoration(std::move(line));
    return line;
}

NormalizedPrediction resolve_label(const std::string& candidate, const LabelCatalog& catalog,
                                   const SynonymTable& synonyms, double tau) {
    NormalizedPrediction prediction;
    prediction.raw_text = candidate;
    const std::string canon = canonicalize_surface(candidate);

    // (1) + (2): canonical names and aliases
    if (auto hit = catalog.resolve_surface(candidate)) {
        if (hit->exact) {
            prediction.label = hit->canonical;
            return prediction;
        }
        HallucinationRecord record;
        record.kind = HallucinationKind::near_miss;
        record.nearest_label = hit->canonical;
        record.evidence = candidate;
        prediction.hallucination = record;
        if (hit->spelling_variant) prediction.label = hit->canonical;
        return prediction;
    }

    // (3) shared stem against canonical names
    if (!canon.empty()) {
        std::size_t best_len = 0;
        std::optional<std::string> best_label;
        for (const auto& label : catalog.labels()) {
            const std::string label_canon = canonicalize_surface(label.canonical_name);
            std::size_t common = 0;
            while (common < canon.size() && common < label_canon.size() && canon[common] == label_canon[common]) {
                ++common;
            }
            if (common >= 6 && common > best_len) {
                best_len = common;
                best_label = label.canonical_name;
            }
        }
        if (best_label) {
            prediction.hallucination =
                HallucinationRecord{HallucinationKind::morph_variant, best_label, candidate};
            return prediction;
        }
    }

    // (4) synonym table or normalized edit distance within tau
    if (auto synonym = synonyms.lookup(candidate)) {
        prediction.hallucination = HallucinationRecord{HallucinationKind::near_miss, synonym, candidate};
        return prediction;
    }
    if (!canon.empty()) {
        double best_distance = 2.0;
        std::optional<std::string> best_label;
        for (const auto& label : catalog.labels()) {
            const double d = normalized_edit_distance(canon, canonicalize_surface(label.canonical_name));
            if (d < best_distance) {
                best_distance = d;
                best_label = label.canonical_name;
            }
        }
        if (best_label && best_distance <= tau) {
            prediction.hallucination = HallucinationRecord{HallucinationKind::near_miss, best_label, candidate};
            return prediction;
        }
    }

    // (5) free-text context phrase
    prediction.hallucination = HallucinationRecord{HallucinationKind::context_phrase, std::nullopt, candidate};
    return prediction;
}

NormalizedPrediction normalize_output(const std::string& raw, const LabelCatalog& catalog,
                                      const SynonymTable& synonyms, double tau, bool truncated) {
    NormalizedPrediction prediction = resolve_label(strip_to_label(raw, catalog), catalog, synonyms, tau);
    prediction.raw_text = raw;
    prediction.truncated = truncated;
    return prediction;
}

} // namespace relex
