#include "deputy/llm/gateway.hpp"

#include <thread>

#include "deputy/retrieval/merge.hpp"

namespace deputy::llm {

UsageLedgerEntry UsageLedger::record(const ModelResponse& response, agents::AgentKind agent,
                                     agents::Pass pass) {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(agents::agent_index(agent), static_cast<int>(pass));
    UsageLedgerEntry& entry = entries_[key];
    entry.agent = agent;
    entry.pass = pass;
    entry.input_tokens += response.input_tokens;
    entry.output_tokens += response.output_tokens;
    entry.calls += 1;
    return entry;
}

UsageLedgerEntry UsageLedger::lookup(agents::AgentKind agent, agents::Pass pass) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find({agents::agent_index(agent), static_cast<int>(pass)});
    if (it == entries_.end()) {
        UsageLedgerEntry zero;
        zero.agent = agent;
        zero.pass = pass;
        return zero;
    }
    return it->second;
}

std::vector<UsageLedgerEntry> UsageLedger::rows() const {
    std::lock_guard lock(mu_);
    std::vector<UsageLedgerEntry> out;
    out.reserve(entries_.size());
    for (const auto& [key, entry] : entries_) out.push_back(entry);
    return out;
}

long UsageLedger::total_output_tokens() const {
    std::lock_guard lock(mu_);
    long total = 0;
    for (const auto& [key, entry] : entries_) total += entry.output_tokens;
    return total;
}

Gateway::Gateway(std::shared_ptr<ModelProvider> provider, GatewayOptions options)
    : provider_(std::move(provider)),
      options_(std::move(options)),
      slots_(options_.concurrency > 0 ? options_.concurrency : 1) {
    if (!options_.sleeper) {
        options_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
}

ModelResponse Gateway::complete(const ModelRequest& request) {
    long prompt_tokens =
        retrieval::estimate_tokens(request.system_prompt, options_.chars_per_token) +
        retrieval::estimate_tokens(request.user_prompt, options_.chars_per_token);
    if (prompt_tokens > options_.max_context_tokens) {
        throw ContextLimitError(prompt_tokens, options_.max_context_tokens);
    }

    slots_.acquire();
    struct Release {
        std::counting_semaphore<4096>* s;
        ~Release() { s->release(); }
    } release{&slots_};

    auto backoff = options_.initial_backoff;
    int attempt = 0;
    while (true) {
        ++attempt;
        auto started = std::chrono::steady_clock::now();
        try {
            ModelResponse response = provider_->complete(request);
            response.retries = attempt - 1;
            if (response.latency.count() == 0) {
                response.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - started);
            }
            return response;
        } catch (const ProviderError& e) {
            if (!e.transient() || attempt >= options_.max_attempts) throw;
            options_.sleeper(backoff);
            backoff *= 2;
        }
    }
}

ModelResponse Gateway::complete_for(agents::AgentKind agent, agents::Pass pass,
                                    const ModelRequest& request) {
    ModelResponse response = complete(request);
    ledger_.record(response, agent, pass);
    return response;
}

}  // namespace deputy::llm
