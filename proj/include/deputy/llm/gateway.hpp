#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <vector>

#include "deputy/agents/kind.hpp"

namespace deputy::llm {

struct ModelRequest {
    std::string model_id;
    std::string system_prompt;
    std::string user_prompt;
    long max_output_tokens = 4096;
    double temperature = 0.0;
    /// false for reasoning passes; true only for the schema-repair call,
    /// since schema enforcement degrades reasoning quality.
    bool structured_mode = false;
};

struct ModelResponse {
    std::string text;
    long input_tokens = 0;
    long output_tokens = 0;
    std::chrono::milliseconds latency{0};
    int retries = 0;
};

class ProviderError : public std::runtime_error {
public:
    explicit ProviderError(const std::string& message, bool transient = false)
        : std::runtime_error(message), transient_(transient) {}

    bool transient() const { return transient_; }

private:
    bool transient_;
};

class ContextLimitError : public std::runtime_error {
public:
    explicit ContextLimitError(long tokens, long limit)
        : std::runtime_error("prompt of ~" + std::to_string(tokens) +
                             " tokens exceeds the provider context limit of " +
                             std::to_string(limit)) {}
};

class AuthError : public ProviderError {
public:
    explicit AuthError(const std::string& message) : ProviderError(message, false) {}
};

class ModelProvider {
public:
    virtual ~ModelProvider() = default;
    virtual std::string name() const = 0;
    virtual ModelResponse complete(const ModelRequest& request) = 0;
};

struct UsageLedgerEntry {
    agents::AgentKind agent = agents::AgentKind::Security;
    agents::Pass pass = agents::Pass::SinglePass;
    long input_tokens = 0;
    long output_tokens = 0;
    int calls = 0;
};

/// Per-agent, per-pass token accounting; totals only ever grow.
class UsageLedger {
public:
    UsageLedgerEntry record(const ModelResponse& response, agents::AgentKind agent,
                            agents::Pass pass);
    /// Zero-valued entry when the (agent, pass) cell was never used.
    UsageLedgerEntry lookup(agents::AgentKind agent, agents::Pass pass) const;
    /// Rows with at least one call, in canonical agent order.
    std::vector<UsageLedgerEntry> rows() const;
    long total_output_tokens() const;

private:
    mutable std::mutex mu_;
    std::map<std::pair<int, int>, UsageLedgerEntry> entries_;
};

struct GatewayOptions {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{1000};
    int concurrency = 6;  // one in-flight request per agent by default
    long max_context_tokens = 100000;
    int chars_per_token = 4;
    /// Injected so tests never sleep for real.
    std::function<void(std::chrono::milliseconds)> sleeper;
};

/// Uniform entry point to a provider: context-limit preflight, bounded retry
/// with exponential backoff, a concurrency cap, and usage accounting.
class Gateway {
public:
    Gateway(std::shared_ptr<ModelProvider> provider, GatewayOptions options = {});

    ModelResponse complete(const ModelRequest& request);
    /// complete() plus ledger recording for an agent pass.
    ModelResponse complete_for(agents::AgentKind agent, agents::Pass pass,
                               const ModelRequest& request);

    UsageLedger& ledger() { return ledger_; }
    const UsageLedger& ledger() const { return ledger_; }
    ModelProvider& provider() { return *provider_; }

private:
    std::shared_ptr<ModelProvider> provider_;
    GatewayOptions options_;
    UsageLedger ledger_;
    std::counting_semaphore<4096> slots_;
};

}  // namespace deputy::llm
