#include "relex/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "relex/errors.hpp"
#include "relex/hash.hpp"
#include "relex/jsonio.hpp"
#include "relex/rng.hpp"

namespace relex {

const char* to_string(PromptFamily family) {
    switch (family) {
        case PromptFamily::direct_zero_shot: return "direct_zero_shot";
        case PromptFamily::summarization_few_shot: return "summarization_few_shot";
        case PromptFamily::instruction_tuning: return "instruction_tuning";
    }
    return "unknown";
}

namespace {

const char* kDirectTemplate =
    "Task: Generate the class of the relation between {entity1} and {entity2} based on the input paragraph.\n"
    "Constraints: Output only the relation label. Do not provide any justification.\n"
    "Classes: {classes}.\n"
    "Input: {passage}";

const char* kSummarizeTemplate =
    "Generate a concise summary that captures the relation between {entity1} and {entity2}, based on the "
    "surrounding context.\n"
    "{demonstrations}"
    "Context: {passage}";

const char* kInstructSystemTemplate =
    "You are a biology expert. You role is to answer the following instruction.";

const char* kInstructUserTemplate =
    "This is a paragraph describing the relation between {entity1} and {entity2}. Find the expressed relation "
    "in the text.\n"
    "{input}";

std::string substitute(std::string text, std::string_view placeholder, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return text;
}

const EntityMention& require_entity(const PassageRecord& passage, const EntityMention& entity) {
    const EntityMention* found = passage.find_entity(entity.id);
    if (!found || found->surface != entity.surface) {
        throw Error(ErrorKind::data,
                    "entity '" + entity.id + "' does not belong to passage '" + passage.passage_id + "'");
    }
    return *found;
}

} // namespace

PromptTemplates PromptTemplates::defaults() {
    PromptTemplates templates;
    templates.direct = kDirectTemplate;
    templates.summarize = kSummarizeTemplate;
    templates.instruct_system = kInstructSystemTemplate;
    templates.instruct_user = kInstructUserTemplate;
    return templates;
}

PromptTemplates PromptTemplates::load_dir(const std::filesystem::path& dir) {
    PromptTemplates templates = defaults();
    auto load = [&dir](const char* file, std::string& slot) {
        const auto path = dir / file;
        if (std::filesystem::exists(path)) slot = read_file(path.string());
    };
    load("direct.txt", templates.direct);
    load("summarize.txt", templates.summarize);
    load("instruct_system.txt", templates.instruct_system);
    load("instruct_user.txt", templates.instruct_user);
    return templates;
}

RenderedPrompt build_direct_prompt(const PassageRecord& passage, const EntityMention& entity1,
                                   const EntityMention& entity2, const LabelCatalog& catalog,
                                   const PromptTemplates& templates) {
    const EntityMention& e1 = require_entity(passage, entity1);
    const EntityMention& e2 = require_entity(passage, entity2);
    if (catalog.size() != templates.expected_class_count) {
        throw Error(ErrorKind::data, "catalog must have " + std::to_string(templates.expected_class_count) +
                                         " entries, got " + std::to_string(catalog.size()));
    }

    std::string classes;
    for (const auto& label : catalog.labels()) {
        if (!classes.empty()) classes += ", ";
        classes += label.canonical_name;
    }

    RenderedPrompt prompt;
    prompt.family = PromptFamily::direct_zero_shot;
    std::string user = templates.direct;
    user = substitute(std::move(user), "{entity1}", e1.surface);
    user = substitute(std::move(user), "{entity2}", e2.surface);
    user = substitute(std::move(user), "{classes}", classes);
    user = substitute(std::move(user), "{passage}", passage.text);
    prompt.user = std::move(user);
    return prompt;
}

RenderedPrompt build_summarization_prompt(const PassageRecord& passage, const EntityMention& entity1,
                                          const EntityMention& entity2,
                                          const std::vector<Demonstration>& demonstrations,
                                          const PromptTemplates& templates) {
    const EntityMention& e1 = require_entity(passage, entity1);
    const EntityMention& e2 = require_entity(passage, entity2);

    std::string demo_block;
    for (const auto& demo : demonstrations) {
        demo_block += demo.entity1 + " " + demo.relation + " " + demo.entity2 + "\n";
    }

    RenderedPrompt prompt;
    prompt.family = PromptFamily::summarization_few_shot;
    std::string user = templates.summarize;
    user = substitute(std::move(user), "{entity1}", e1.surface);
    user = substitute(std::move(user), "{entity2}", e2.surface);
    user = substitute(std::move(user), "{demonstrations}", demo_block);
    user = substitute(std::move(user), "{passage}", passage.text);
    prompt.user = std::move(user);
    return prompt;
}

RenderedPrompt build_instruction_prompt(const std::string& input_text, const std::string& entity1,
                                        const std::string& entity2, const PromptTemplates& templates) {
    const bool blank = std::all_of(input_text.begin(), input_text.end(),
                                   [](unsigned char c) { return std::isspace(c); });
    if (input_text.empty() || blank) {
        throw Error(ErrorKind::data, "instruction prompt requires non-empty input text");
    }

    RenderedPrompt prompt;
    prompt.family = PromptFamily::instruction_tuning;
    prompt.system = templates.instruct_system;
    std::string user = templates.instruct_user;
    user = substitute(std::move(user), "{entity1}", entity1);
    user = substitute(std::move(user), "{entity2}", entity2);
    user = substitute(std::move(user), "{input}", input_text);
    prompt.user = std::move(user);
    return prompt;
}

std::string prompt_hash(const RenderedPrompt& prompt) {
    std::string material = prompt.system.value_or("");
    material += '\x1f';
    material += prompt.user;
    material += '\x1f';
    material += to_string(prompt.family);
    return fnv1a64_hex(material);
}

std::vector<Demonstration> sample_demonstrations(const Corpus& corpus, std::size_t count, std::uint64_t seed,
                                                 const LabelCatalog& catalog) {
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < corpus.relations.size(); ++i) {
        const auto& relation = corpus.relations[i];
        if (relation.split == Split::train && relation.provenance == Provenance::annotated &&
            relation.label != catalog.none_label()) {
            pool.push_back(i);
        }
    }
    auto engine = rng::make_engine(seed);
    pool = rng::sample(std::move(pool), std::min(count, pool.size()), engine);
    std::sort(pool.begin(), pool.end());

    std::vector<Demonstration> demos;
    demos.reserve(pool.size());
    for (std::size_t index : pool) {
        const auto& relation = corpus.relations[index];
        const PassageRecord* passage = corpus.find_passage(relation.passage_id);
        if (!passage) continue;
        const EntityMention* e1 = passage->find_entity(relation.entity1_id);
        const EntityMention* e2 = passage->find_entity(relation.entity2_id);
        if (!e1 || !e2) continue;
        demos.push_back({e1->surface, relation.label, e2->surface});
    }
    return demos;
}

} // namespace relex
