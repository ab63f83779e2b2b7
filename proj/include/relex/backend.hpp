#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relex/prompts.hpp"

namespace relex {

struct DecodingParams {
    double temperature = 0.0;
    int max_new_tokens = 64;
    std::optional<std::uint64_t> seed;
};

struct GenerationRequest {
    RenderedPrompt prompt;
    DecodingParams decoding;
    std::string model_name;

    void validate() const; // throws on non-finite temperature or max_new_tokens < 1
};

enum class FinishReason { stop, length, error };

const char* to_string(FinishReason reason);

struct GenerationResult {
    std::string text;
    FinishReason finish_reason = FinishReason::stop;
    std::size_t request_index = 0;
    std::int64_t latency_ms = 0;
    std::string error; // populated when finish_reason == error
};

class GenerationBackend {
public:
    virtual ~GenerationBackend() = default;

    // Throws Error(backend) on failure (after transport retries, where
    // applicable); never hangs past the configured timeout.
    virtual GenerationResult generate(const GenerationRequest& request) = 0;

    virtual std::string name() const = 0;
    // Stable identity of the backend configuration, for run manifests.
    virtual std::string fingerprint() const = 0;

    // Fans requests out with at most max_in_flight outstanding; results come
    // back ordered by request_index and per-request failures are isolated
    // into error slots.
    std::vector<GenerationResult> batch_generate(std::span<const GenerationRequest> requests,
                                                 std::size_t max_in_flight);
};

// Deterministic offline backend. Responses resolve in order: exact prompt
// hash, first substring rule matching the user text, then the default
// response. A miss with no default is a backend error.
class ScriptedBackend : public GenerationBackend {
public:
    struct Rule {
        std::string contains;
        std::string response;
        FinishReason finish = FinishReason::stop;
    };

    ScriptedBackend() = default;
    static ScriptedBackend from_file(const std::filesystem::path& path);

    void add_hash_response(const std::string& prompt_hash_hex, const std::string& response);
    void add_rule(Rule rule);
    void set_default_response(std::string response);

    GenerationResult generate(const GenerationRequest& request) override;
    std::string name() const override { return "scripted"; }
    std::string fingerprint() const override;

    std::size_t call_count() const { return calls_.load(); }

private:
    std::map<std::string, std::string> by_hash_;
    std::vector<Rule> rules_;
    std::optional<std::string> default_response_;
    std::atomic<std::size_t> calls_{0};
};

// Chat-style JSON-over-HTTP client covering common completion-serving
// conventions; field paths are configurable rather than vendor-specific.
struct RemoteGenerationConfig {
    std::string endpoint;                                      // e.g. http://127.0.0.1:8080
    std::string path = "/v1/chat/completions";
    std::string model;
    std::string auth_header = "Authorization";
    std::string auth_env;                                      // env var holding the secret
    std::string auth_prefix = "Bearer ";
    std::string text_path = "choices.0.message.content";
    std::string finish_reason_path = "choices.0.finish_reason";
    int max_attempts = 3;
    int initial_backoff_ms = 100;
    int timeout_ms = 30000;
};

class RemoteGenerationBackend : public GenerationBackend {
public:
    explicit RemoteGenerationBackend(RemoteGenerationConfig config);

    GenerationResult generate(const GenerationRequest& request) override;
    std::string name() const override { return "remote"; }
    std::string fingerprint() const override;

    const RemoteGenerationConfig& config() const { return config_; }

private:
    RemoteGenerationConfig config_;
};

struct TokenEmbeddings {
    std::vector<std::string> tokens;
    std::vector<std::vector<double>> vectors; // all of equal dimension
};

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    virtual TokenEmbeddings embed_tokens(const std::string& text) = 0;
    virtual std::vector<double> embed_text(const std::string& text) = 0;
    virtual std::string name() const = 0;
    virtual std::string fingerprint() const = 0;
};

// Alphanumeric runs become tokens; every punctuation byte is its own token;
// whitespace separates. Bytes >= 0x80 count as letters so UTF-8 words hold
// together.
std::vector<std::string> offline_tokenize(std::string_view text);

// Hashed character-n-gram projection to a fixed dimension. Bit-deterministic
// across processes and platforms; token vectors are context-free and never
// zero-norm.
class HashedNgramEmbedder : public EmbeddingBackend {
public:
    explicit HashedNgramEmbedder(std::size_t dim = 64, std::size_t ngram = 3);

    TokenEmbeddings embed_tokens(const std::string& text) override;
    std::vector<double> embed_text(const std::string& text) override; // mean of token vectors

    std::vector<double> embed_token(std::string_view token) const;

    std::string name() const override { return "hashed_ngram"; }
    std::string fingerprint() const override;
    std::size_t dim() const { return dim_; }

private:
    std::size_t dim_;
    std::size_t ngram_;
};

struct RemoteEmbeddingConfig {
    std::string endpoint;
    std::string path = "/v1/embeddings";
    std::string model;
    std::string auth_header = "Authorization";
    std::string auth_env;
    std::string auth_prefix = "Bearer ";
    std::string input_field = "input";
    std::string vector_path = "data.0.embedding"; // pooled text vector
    std::string tokens_path;                      // per-token protocol, optional
    std::string token_vectors_path;
    int max_attempts = 3;
    int initial_backoff_ms = 100;
    int timeout_ms = 30000;
};

class RemoteEmbeddingBackend : public EmbeddingBackend {
public:
    explicit RemoteEmbeddingBackend(RemoteEmbeddingConfig config);

    TokenEmbeddings embed_tokens(const std::string& text) override;
    std::vector<double> embed_text(const std::string& text) override;
    std::string name() const override { return "remote_embedding"; }
    std::string fingerprint() const override;

private:
    RemoteEmbeddingConfig config_;
};

} // namespace relex
