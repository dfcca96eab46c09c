#pragma once

#include <map>
#include <string>
#include <vector>

#include "deputy/agents/comment.hpp"
#include "deputy/agents/kind.hpp"
#include "deputy/agents/xml.hpp"
#include "deputy/context/context.hpp"
#include "deputy/llm/gateway.hpp"

namespace deputy::agents {

struct AgentSettings {
    double weightage = 1.0;
    double confidence_threshold = 0.6;
    bool enabled = true;
};

/// All six agents registered exactly once; thresholds are configuration, not
/// constants baked into call sites.
struct AgentRegistry {
    std::map<AgentKind, AgentSettings> settings;

    static AgentRegistry defaults();
    std::map<AgentKind, double> thresholds() const;
    std::vector<AgentKind> enabled() const;
};

struct AgentResult {
    AgentKind agent = AgentKind::Security;
    std::string single_pass_text;  // audit trail; superseded by the reflection
    std::string reflection_text;
    std::vector<ReviewComment> comments;  // parsed from the reflection response
    int reasks = 0;
    std::vector<std::string> warnings;
};

struct AgentFailure {
    AgentKind agent = AgentKind::Security;
    std::string error;
};

struct AgentRunSet {
    std::vector<AgentResult> results;    // canonical agent order
    std::vector<AgentFailure> failures;  // canonical agent order
};

class NoAgentResults : public std::runtime_error {
public:
    NoAgentResults() : std::runtime_error("no agent results") {}
};

struct RunAgentOptions {
    std::string model_id = "review-default";
    long max_output_tokens = 4096;
    context::PromptLimits prompt_limits;
};

/// Two reasoning calls per agent: a free-form single pass, then a reflection
/// pass that receives the single-pass text and emits the comment XML. If the
/// XML does not parse, one structured-mode repair call re-asks for the
/// schema; after that the agent yields zero comments with a recorded
/// parse failure.
AgentResult run_agent(AgentKind agent, const context::OptimizedContext& ctx, llm::Gateway& gateway,
                      const RunAgentOptions& options = {});

/// Runs the enabled agents concurrently; results come back in canonical
/// order regardless of completion order, and one agent's failure never
/// cancels the others. Throws NoAgentResults when every agent failed.
AgentRunSet run_all_agents(const context::OptimizedContext& ctx,
                           const std::vector<AgentKind>& enabled, llm::Gateway& gateway,
                           const RunAgentOptions& options = {});

}  // namespace deputy::agents
