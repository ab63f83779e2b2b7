#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "relex/errors.hpp"

namespace relex {

using json = nlohmann::json;

// Resolves a dotted path like "choices.0.message.content"; numeric segments
// index arrays. Returns nullptr when any hop is missing.
inline const json* json_at_path(const json& root, std::string_view path) {
    const json* node = &root;
    std::size_t pos = 0;
    while (pos <= path.size()) {
        const std::size_t dot = path.find('.', pos);
        const std::string_view seg = path.substr(pos, dot == std::string_view::npos ? path.size() - pos : dot - pos);
        if (seg.empty()) return nullptr;
        bool numeric = true;
        for (char c : seg) numeric = numeric && c >= '0' && c <= '9';
        if (numeric && node->is_array()) {
            const std::size_t idx = std::stoul(std::string(seg));
            if (idx >= node->size()) return nullptr;
            node = &(*node)[idx];
        } else if (node->is_object()) {
            auto it = node->find(std::string(seg));
            if (it == node->end()) return nullptr;
            node = &*it;
        } else {
            return nullptr;
        }
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    return node;
}

// Calls fn(line_number, parsed) for every non-empty line. Line numbers are
// 1-based. Parse failures surface as data errors naming the line.
inline void for_each_jsonl(const std::string& path,
                           const std::function<void(std::size_t, const json&)>& fn) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::data, "cannot open file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json parsed;
        try {
            parsed = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::data,
                        path + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
        }
        fn(line_no, parsed);
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::data, "cannot open file: " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::data, "cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::data, "write failed: " + path);
}

} // namespace relex
