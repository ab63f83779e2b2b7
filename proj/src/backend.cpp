#include "relex/backend.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "relex/errors.hpp"
#include "relex/hash.hpp"
#include "relex/jsonio.hpp"

namespace relex {

const char* to_string(FinishReason reason) {
    switch (reason) {
        case FinishReason::stop: return "stop";
        case FinishReason::length: return "length";
        case FinishReason::error: return "error";
    }
    return "unknown";
}

void GenerationRequest::validate() const {
    if (decoding.max_new_tokens < 1) {
        throw Error(ErrorKind::config, "max_new_tokens must be >= 1");
    }
    if (!std::isfinite(decoding.temperature) || decoding.temperature < 0.0) {
        throw Error(ErrorKind::config, "temperature must be finite and >= 0");
    }
}

std::vector<GenerationResult> GenerationBackend::batch_generate(std::span<const GenerationRequest> requests,
                                                                std::size_t max_in_flight) {
    if (max_in_flight < 1) throw Error(ErrorKind::config, "max_in_flight must be >= 1");
    std::vector<GenerationResult> results(requests.size());
    if (requests.empty()) return results;

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t index = next.fetch_add(1);
            if (index >= requests.size()) return;
            try {
                GenerationResult result = generate(requests[index]);
                result.request_index = index;
                results[index] = std::move(result);
            } catch (const std::exception& e) {
                GenerationResult failed;
                failed.finish_reason = FinishReason::error;
                failed.error = e.what();
                failed.request_index = index;
                results[index] = std::move(failed);
            }
        }
    };

    const std::size_t workers = std::min(max_in_flight, requests.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
    return results;
}

// ---------------------------------------------------------------------------
// Scripted backend

ScriptedBackend ScriptedBackend::from_file(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path.string()));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config, "script file " + path.string() + ": " + e.what());
    }
    ScriptedBackend backend;
    if (doc.contains("by_hash")) {
        for (const auto& [key, value] : doc["by_hash"].items()) {
            backend.add_hash_response(key, value.get<std::string>());
        }
    }
    for (const auto& raw : doc.value("rules", json::array())) {
        Rule rule;
        rule.contains = raw.value("contains", "");
        rule.response = raw.value("response", "");
        if (raw.value("finish", "stop") == std::string("length")) rule.finish = FinishReason::length;
        backend.add_rule(std::move(rule));
    }
    if (doc.contains("default")) backend.set_default_response(doc["default"].get<std::string>());
    return backend;
}

void ScriptedBackend::add_hash_response(const std::string& prompt_hash_hex, const std::string& response) {
    by_hash_[prompt_hash_hex] = response;
}

void ScriptedBackend::add_rule(Rule rule) { rules_.push_back(std::move(rule)); }

void ScriptedBackend::set_default_response(std::string response) { default_response_ = std::move(response); }

GenerationResult ScriptedBackend::generate(const GenerationRequest& request) {
    request.validate();
    calls_.fetch_add(1);

    GenerationResult result;
    auto hash_hit = by_hash_.find(prompt_hash(request.prompt));
    if (hash_hit != by_hash_.end()) {
        result.text = hash_hit->second;
        return result;
    }
    for (const auto& rule : rules_) {
        if (!rule.contains.empty() && request.prompt.user.find(rule.contains) != std::string::npos) {
            result.text = rule.response;
            result.finish_reason = rule.finish;
            return result;
        }
    }
    if (default_response_) {
        result.text = *default_response_;
        return result;
    }
    throw Error(ErrorKind::backend, "scripted backend: no response for prompt " + prompt_hash(request.prompt));
}

std::string ScriptedBackend::fingerprint() const {
    json doc;
    doc["type"] = "scripted";
    doc["by_hash"] = by_hash_;
    json rules = json::array();
    for (const auto& rule : rules_) {
        rules.push_back({{"contains", rule.contains},
                         {"response", rule.response},
                         {"finish", to_string(rule.finish)}});
    }
    doc["rules"] = std::move(rules);
    if (default_response_) doc["default"] = *default_response_;
    return fnv1a64_hex(doc.dump());
}

// ---------------------------------------------------------------------------
// Remote HTTP plumbing shared by generation and embedding clients

namespace {

struct HttpAttempt {
    bool transport_ok = false;
    int status = 0;
    std::string body;
    std::string transport_error;
};

bool retryable(const HttpAttempt& attempt) {
    if (!attempt.transport_ok) return true;           // connect/timeout
    if (attempt.status == 429) return true;           // rate limit
    if (attempt.status >= 500) return true;           // server side
    return false;
}

std::string auth_value(const std::string& auth_env, const std::string& auth_prefix) {
    if (auth_env.empty()) return {};
    const char* secret = std::getenv(auth_env.c_str());
    if (!secret || !*secret) return {};
    return auth_prefix + secret;
}

// POSTs body with bounded exponential-backoff retries. Auth and
// malformed-request statuses are terminal immediately.
HttpAttempt post_with_retries(const std::string& endpoint, const std::string& path, const json& body,
                              const std::string& auth_header, const std::string& auth_env,
                              const std::string& auth_prefix, int max_attempts, int initial_backoff_ms,
                              int timeout_ms, const char* what) {
    if (endpoint.empty()) throw Error(ErrorKind::config, std::string(what) + ": endpoint not configured");
    if (max_attempts < 1) max_attempts = 1;

    httplib::Client client(endpoint);
    client.set_connection_timeout(0, timeout_ms * 1000LL);
    client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    client.set_write_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);

    httplib::Headers headers;
    const std::string auth = auth_value(auth_env, auth_prefix);
    if (!auth.empty()) headers.insert({auth_header, auth});

    const std::string payload = body.dump();
    HttpAttempt last;
    int backoff = initial_backoff_ms;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        auto response = client.Post(path, headers, payload, "application/json");
        if (response) {
            last.transport_ok = true;
            last.status = response->status;
            last.body = response->body;
            last.transport_error.clear();
        } else {
            last = HttpAttempt{};
            last.transport_error = httplib::to_string(response.error());
        }

        if (last.transport_ok && last.status == 200) return last;
        if (last.transport_ok && (last.status == 401 || last.status == 403)) {
            throw Error(ErrorKind::backend, std::string(what) + ": authentication failed (HTTP " +
                                                std::to_string(last.status) + ") at " + endpoint + path);
        }
        if (!retryable(last)) {
            throw Error(ErrorKind::backend, std::string(what) + ": request rejected (HTTP " +
                                                std::to_string(last.status) + ") at " + endpoint + path +
                                                ": " + last.body);
        }
        if (attempt < max_attempts) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
            backoff *= 2;
        }
    }

    std::string detail = last.transport_ok ? "HTTP " + std::to_string(last.status)
                                           : "transport error: " + last.transport_error;
    throw Error(ErrorKind::backend, std::string(what) + ": " + detail + " from " + endpoint + path + " after " +
                                        std::to_string(max_attempts) + " attempts");
}

} // namespace

RemoteGenerationBackend::RemoteGenerationBackend(RemoteGenerationConfig config) : config_(std::move(config)) {}

GenerationResult RemoteGenerationBackend::generate(const GenerationRequest& request) {
    request.validate();

    json body;
    body["model"] = request.model_name.empty() ? config_.model : request.model_name;
    json messages = json::array();
    if (request.prompt.system) {
        messages.push_back({{"role", "system"}, {"content", *request.prompt.system}});
    }
    messages.push_back({{"role", "user"}, {"content", request.prompt.user}});
    body["messages"] = std::move(messages);
    body["temperature"] = request.decoding.temperature;
    body["max_tokens"] = request.decoding.max_new_tokens;
    if (request.decoding.seed) body["seed"] = *request.decoding.seed;

    const auto started = std::chrono::steady_clock::now();
    HttpAttempt attempt = post_with_retries(config_.endpoint, config_.path, body, config_.auth_header,
                                            config_.auth_env, config_.auth_prefix, config_.max_attempts,
                                            config_.initial_backoff_ms, config_.timeout_ms, "generation");
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);

    json parsed;
    try {
        parsed = json::parse(attempt.body);
    } catch (const json::exception&) {
        throw Error(ErrorKind::backend, "generation: non-JSON response from " + config_.endpoint + config_.path);
    }
    const json* text = json_at_path(parsed, config_.text_path);
    if (!text || !text->is_string()) {
        throw Error(ErrorKind::backend, "generation: malformed response, missing text at '" + config_.text_path +
                                            "' from " + config_.endpoint + config_.path);
    }

    GenerationResult result;
    result.text = text->get<std::string>();
    result.latency_ms = elapsed.count();
    if (!config_.finish_reason_path.empty()) {
        const json* finish = json_at_path(parsed, config_.finish_reason_path);
        if (finish && finish->is_string() && finish->get<std::string>() == "length") {
            result.finish_reason = FinishReason::length;
        }
    }
    return result;
}

std::string RemoteGenerationBackend::fingerprint() const {
    json doc = {{"type", "remote"},        {"endpoint", config_.endpoint}, {"path", config_.path},
                {"model", config_.model},  {"text_path", config_.text_path}};
    return fnv1a64_hex(doc.dump());
}

// ---------------------------------------------------------------------------
// Offline embeddings

std::vector<std::string> offline_tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            flush();
        } else if (std::isalnum(c) || c >= 0x80) {
            current.push_back(static_cast<char>(c));
        } else {
            flush();
            tokens.push_back(std::string(1, static_cast<char>(c)));
        }
    }
    flush();
    return tokens;
}

HashedNgramEmbedder::HashedNgramEmbedder(std::size_t dim, std::size_t ngram) : dim_(dim), ngram_(ngram) {
    if (dim_ < 1) throw Error(ErrorKind::config, "embedding dimension must be >= 1");
    if (ngram_ < 1) throw Error(ErrorKind::config, "ngram size must be >= 1");
}

std::vector<double> HashedNgramEmbedder::embed_token(std::string_view token) const {
    std::vector<double> vec(dim_, 0.0);
    const std::string padded = "^" + std::string(token) + "$";
    const std::size_t n = std::min(ngram_, padded.size());
    for (std::size_t i = 0; i + n <= padded.size(); ++i) {
        const std::uint64_t h = fnv1a64(std::string_view(padded).substr(i, n));
        const double sign = (h >> 63) ? -1.0 : 1.0;
        vec[h % dim_] += sign;
    }
    const bool all_zero = std::all_of(vec.begin(), vec.end(), [](double v) { return v == 0.0; });
    if (all_zero) vec[fnv1a64(token) % dim_] = 1.0;
    return vec;
}

TokenEmbeddings HashedNgramEmbedder::embed_tokens(const std::string& text) {
    auto tokens = offline_tokenize(text);
    if (tokens.empty()) throw Error(ErrorKind::data, "embed_tokens: empty input");
    TokenEmbeddings out;
    out.tokens = std::move(tokens);
    out.vectors.reserve(out.tokens.size());
    for (const auto& token : out.tokens) out.vectors.push_back(embed_token(token));
    return out;
}

std::vector<double> HashedNgramEmbedder::embed_text(const std::string& text) {
    TokenEmbeddings embeddings = embed_tokens(text);
    std::vector<double> mean(dim_, 0.0);
    for (const auto& vec : embeddings.vectors) {
        for (std::size_t i = 0; i < dim_; ++i) mean[i] += vec[i];
    }
    for (double& v : mean) v /= static_cast<double>(embeddings.vectors.size());
    return mean;
}

std::string HashedNgramEmbedder::fingerprint() const {
    return fnv1a64_hex("hashed_ngram:" + std::to_string(dim_) + ":" + std::to_string(ngram_));
}

// ---------------------------------------------------------------------------
// Remote embeddings

RemoteEmbeddingBackend::RemoteEmbeddingBackend(RemoteEmbeddingConfig config) : config_(std::move(config)) {}

TokenEmbeddings RemoteEmbeddingBackend::embed_tokens(const std::string& text) {
    if (config_.tokens_path.empty() || config_.token_vectors_path.empty()) {
        throw Error(ErrorKind::config,
                    "remote embedding backend has no token-level protocol configured "
                    "(tokens_path/token_vectors_path); use the offline embedder for token scores");
    }
    json body = {{"model", config_.model}, {config_.input_field, text}};
    HttpAttempt attempt = post_with_retries(config_.endpoint, config_.path, body, config_.auth_header,
                                            config_.auth_env, config_.auth_prefix, config_.max_attempts,
                                            config_.initial_backoff_ms, config_.timeout_ms, "embedding");
    json parsed;
    try {
        parsed = json::parse(attempt.body);
    } catch (const json::exception&) {
        throw Error(ErrorKind::backend, "embedding: non-JSON response from " + config_.endpoint + config_.path);
    }
    const json* tokens = json_at_path(parsed, config_.tokens_path);
    const json* vectors = json_at_path(parsed, config_.token_vectors_path);
    if (!tokens || !tokens->is_array() || !vectors || !vectors->is_array() || tokens->size() != vectors->size() ||
        tokens->empty()) {
        throw Error(ErrorKind::backend, "embedding: malformed token response from " + config_.endpoint);
    }
    TokenEmbeddings out;
    for (const auto& t : *tokens) out.tokens.push_back(t.get<std::string>());
    for (const auto& v : *vectors) out.vectors.push_back(v.get<std::vector<double>>());
    return out;
}

std::vector<double> RemoteEmbeddingBackend::embed_text(const std::string& text) {
    json body = {{"model", config_.model}, {config_.input_field, text}};
    HttpAttempt attempt = post_with_retries(config_.endpoint, config_.path, body, config_.auth_header,
                                            config_.auth_env, config_.auth_prefix, config_.max_attempts,
                                            config_.initial_backoff_ms, config_.timeout_ms, "embedding");
    json parsed;
    try {
        parsed = json::parse(attempt.body);
    } catch (const json::exception&) {
        throw Error(ErrorKind::backend, "embedding: non-JSON response from " + config_.endpoint + config_.path);
    }
    const json* vector = json_at_path(parsed, config_.vector_path);
    if (!vector || !vector->is_array() || vector->empty()) {
        throw Error(ErrorKind::backend, "embedding: malformed response, missing vector at '" +
                                            config_.vector_path + "' from " + config_.endpoint);
    }
    return vector->get<std::vector<double>>();
}

std::string RemoteEmbeddingBackend::fingerprint() const {
    json doc = {{"type", "remote_embedding"},
                {"endpoint", config_.endpoint},
                {"path", config_.path},
                {"model", config_.model}};
    return fnv1a64_hex(doc.dump());
}

} // namespace relex
