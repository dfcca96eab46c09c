#include "deputy/agents/agent.hpp"

#include <future>

namespace deputy::agents {

std::string_view agent_name(AgentKind kind) {
    switch (kind) {
        case AgentKind::Security: return "security";
        case AgentKind::CodeCommunication: return "code-communication";
        case AgentKind::PerformanceOptimization: return "performance-optimization";
        case AgentKind::CodeMaintainability: return "code-maintainability";
        case AgentKind::Error: return "error";
        case AgentKind::BusinessLogicValidation: return "business-logic-validation";
    }
    return "?";
}

std::string_view agent_display(AgentKind kind) {
    switch (kind) {
        case AgentKind::Security: return "Security";
        case AgentKind::CodeCommunication: return "Code Communication";
        case AgentKind::PerformanceOptimization: return "Performance Optimization";
        case AgentKind::CodeMaintainability: return "Code Maintainability";
        case AgentKind::Error: return "Error";
        case AgentKind::BusinessLogicValidation: return "Business Logic Validation";
    }
    return "?";
}

std::optional<AgentKind> agent_from_name(std::string_view name) {
    for (AgentKind kind : kAllAgents) {
        if (agent_name(kind) == name) return kind;
    }
    return std::nullopt;
}

std::string_view pass_name(Pass pass) {
    return pass == Pass::SinglePass ? "single-pass" : "reflection";
}

AgentRegistry AgentRegistry::defaults() {
    AgentRegistry registry;
    for (AgentKind kind : kAllAgents) {
        AgentSettings settings;
        settings.confidence_threshold =
            (kind == AgentKind::Security || kind == AgentKind::Error) ? 0.7 : 0.6;
        registry.settings[kind] = settings;
    }
    return registry;
}

std::map<AgentKind, double> AgentRegistry::thresholds() const {
    std::map<AgentKind, double> out;
    for (const auto& [kind, s] : settings) out[kind] = s.confidence_threshold;
    return out;
}

std::vector<AgentKind> AgentRegistry::enabled() const {
    std::vector<AgentKind> out;
    for (AgentKind kind : kAllAgents) {
        auto it = settings.find(kind);
        if (it != settings.end() && it->second.enabled) out.push_back(kind);
    }
    return out;
}

namespace {

llm::ModelRequest make_request(const RunAgentOptions& options,
                               const context::RenderedPrompt& prompt, bool structured) {
    llm::ModelRequest request;
    request.model_id = options.model_id;
    request.system_prompt = prompt.system;
    request.user_prompt = prompt.user;
    request.max_output_tokens = options.max_output_tokens;
    request.structured_mode = structured;
    return request;
}

// Schema-repair call: not a reasoning pass, so this is the one place
// structured output mode is on.
llm::ModelRequest make_repair_request(const RunAgentOptions& options, AgentKind agent,
                                      const std::string& reflection_text) {
    llm::ModelRequest request;
    request.model_id = options.model_id;
    request.system_prompt =
        "You are a formatting converter.\nAgent: " + std::string(agent_name(agent)) +
        "\nPass: repair\n\nConvert the review below into exactly this XML schema, one <comment> "
        "per finding, and output nothing else:\n\n<review>\n  <comments>\n    <comment>\n      "
        "<description></description>\n      <corrective_code></corrective_code>\n      "
        "<file_path></file_path>\n      <line_number></line_number>\n      "
        "<confidence_score></confidence_score>\n      <bucket></bucket>\n    </comment>\n  "
        "</comments>\n</review>";
    request.user_prompt = reflection_text;
    request.max_output_tokens = options.max_output_tokens;
    request.structured_mode = true;
    return request;
}

}  // namespace

AgentResult run_agent(AgentKind agent, const context::OptimizedContext& ctx, llm::Gateway& gateway,
                      const RunAgentOptions& options) {
    AgentResult result;
    result.agent = agent;

    auto single_bundle = context::bundle_for_agent(ctx, agent, Pass::SinglePass);
    auto single_prompt = context::render_agent_prompt(ctx, single_bundle, options.prompt_limits);
    for (const auto& w : single_prompt.warnings) result.warnings.push_back(w);
    auto single_response = gateway.complete_for(
        agent, Pass::SinglePass, make_request(options, single_prompt, /*structured=*/false));
    result.single_pass_text = single_response.text;

    auto reflection_bundle =
        context::bundle_for_agent(ctx, agent, Pass::Reflection, result.single_pass_text);
    auto reflection_prompt =
        context::render_agent_prompt(ctx, reflection_bundle, options.prompt_limits);
    for (const auto& w : reflection_prompt.warnings) result.warnings.push_back(w);
    auto reflection_response = gateway.complete_for(
        agent, Pass::Reflection, make_request(options, reflection_prompt, /*structured=*/false));
    result.reflection_text = reflection_response.text;

    try {
        auto parsed = parse_agent_xml(result.reflection_text);
        result.comments = std::move(parsed.comments);
        for (auto& w : parsed.warnings) result.warnings.push_back(std::move(w));
    } catch (const XmlParseError&) {
        result.reasks = 1;
        auto repair_response = gateway.complete_for(
            agent, Pass::Reflection, make_repair_request(options, agent, result.reflection_text));
        try {
            auto parsed = parse_agent_xml(repair_response.text);
            result.comments = std::move(parsed.comments);
            for (auto& w : parsed.warnings) result.warnings.push_back(std::move(w));
            result.reflection_text = repair_response.text;
        } catch (const XmlParseError& e) {
            result.comments.clear();
            result.warnings.push_back(std::string("parse-failure after re-ask: ") + e.what());
        }
    }

    // attribution is ours, the model never self-reports identity
    for (auto& comment : result.comments) comment.agent = agent;
    return result;
}

AgentRunSet run_all_agents(const context::OptimizedContext& ctx,
                           const std::vector<AgentKind>& enabled, llm::Gateway& gateway,
                           const RunAgentOptions& options) {
    struct Slot {
        std::optional<AgentResult> result;
        std::optional<AgentFailure> failure;
    };
    std::vector<Slot> slots(kAllAgents.size());

    std::vector<std::future<void>> futures;
    futures.reserve(enabled.size());
    for (AgentKind agent : enabled) {
        futures.push_back(std::async(std::launch::async, [&, agent] {
            Slot& slot = slots[static_cast<std::size_t>(agent_index(agent))];
            try {
                slot.result = run_agent(agent, ctx, gateway, options);
            } catch (const std::exception& e) {
                slot.failure = AgentFailure{agent, e.what()};
            }
        }));
    }
    for (auto& future : futures) future.get();

    AgentRunSet run;
    for (AgentKind agent : kAllAgents) {
        Slot& slot = slots[static_cast<std::size_t>(agent_index(agent))];
        if (slot.result) run.results.push_back(std::move(*slot.result));
        if (slot.failure) run.failures.push_back(std::move(*slot.failure));
    }
    if (run.results.empty() && !enabled.empty()) throw NoAgentResults();
    return run;
}

}  // namespace deputy::agents
