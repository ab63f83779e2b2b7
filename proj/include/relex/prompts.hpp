#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "relex/corpus.hpp"
#include "relex/labels.hpp"

namespace relex {

enum class PromptFamily { direct_zero_shot, summarization_few_shot, instruction_tuning };

const char* to_string(PromptFamily family);

struct RenderedPrompt {
    std::optional<std::string> system;
    std::string user;
    PromptFamily family = PromptFamily::direct_zero_shot;
};

// Rendered as one sentence per line: "Entity1 Relation Entity2".
struct Demonstration {
    std::string entity1;
    std::string relation; // canonical label
    std::string entity2;
};

// Placeholder syntax: {entity1}, {entity2}, {passage}, {classes},
// {demonstrations}, {input}. Default wording is frozen by golden tests;
// overrides load from plain UTF-8 files.
struct PromptTemplates {
    std::string direct;
    std::string summarize;
    std::string instruct_system;
    std::string instruct_user;
    // Builders refuse a catalog whose size differs; set alongside a custom
    // taxonomy when overriding the built-in 23-class list.
    std::size_t expected_class_count = 23;

    static PromptTemplates defaults();
    // Reads direct.txt, summarize.txt, instruct_system.txt, instruct_user.txt;
    // missing files keep their default text.
    static PromptTemplates load_dir(const std::filesystem::path& dir);
};

// All builders are pure: identical inputs yield byte-identical prompts.

RenderedPrompt build_direct_prompt(const PassageRecord& passage, const EntityMention& entity1,
                                   const EntityMention& entity2, const LabelCatalog& catalog,
                                   const PromptTemplates& templates = PromptTemplates::defaults());

RenderedPrompt build_summarization_prompt(const PassageRecord& passage, const EntityMention& entity1,
                                          const EntityMention& entity2,
                                          const std::vector<Demonstration>& demonstrations,
                                          const PromptTemplates& templates = PromptTemplates::defaults());

RenderedPrompt build_instruction_prompt(const std::string& input_text, const std::string& entity1,
                                        const std::string& entity2,
                                        const PromptTemplates& templates = PromptTemplates::defaults());

// Stable identity for scripted backends and checkpoint records.
std::string prompt_hash(const RenderedPrompt& prompt);

// Seeded draw of demonstration triples from annotated train-split relations
// (None pairs excluded).
std::vector<Demonstration> sample_demonstrations(const Corpus& corpus, std::size_t count, std::uint64_t seed,
                                                 const LabelCatalog& catalog);

} // namespace relex
