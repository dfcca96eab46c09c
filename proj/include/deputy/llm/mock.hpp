#pragma once

#include <mutex>
#include <string>
#include <vector>

#include "deputy/llm/gateway.hpp"

namespace deputy::llm {

/// One scripted reply sequence: element i answers the i-th matching call,
/// the last element repeats. "!transient-error", "!error" and "!auth-error"
/// elements raise instead of answering.
struct MockResponseSeq {
    std::vector<std::string> replies;
};

struct MockContainsRule {
    std::vector<std::string> needles;  // all must appear in system+user text
    MockResponseSeq response;
};

/// Fixture format of the scripted provider: a map from prompt digest to
/// response plus substring rules and an optional default.
struct MockScript {
    std::map<std::string, MockResponseSeq> exact;  // sha256(system \x1e user) -> response
    std::vector<MockContainsRule> contains;
    std::optional<MockResponseSeq> fallback;
};

/// Deterministic provider driven by a MockScript; the whole pipeline is
/// bit-reproducible on top of it. Every request is logged for assertions.
class ScriptedMockProvider final : public ModelProvider {
public:
    ScriptedMockProvider() = default;
    explicit ScriptedMockProvider(MockScript script);

    static MockScript parse_script(const std::string& json_text);
    static MockScript load_script(const std::string& path);
    static std::string prompt_digest(const ModelRequest& request);

    std::string name() const override { return "mock"; }
    ModelResponse complete(const ModelRequest& request) override;

    std::vector<ModelRequest> request_log() const;
    /// Requests whose system+user text contains every needle.
    long count_requests(const std::vector<std::string>& needles) const;

    /// Artificial per-call delay, for service load tests.
    void set_latency(std::chrono::milliseconds latency);

private:
    std::string next_reply(MockResponseSeq& seq, const std::string& key);

    mutable std::mutex mu_;
    MockScript script_;
    std::map<std::string, std::size_t> cursor_;
    std::vector<ModelRequest> log_;
    std::chrono::milliseconds latency_{0};
};

}  // namespace deputy::llm
