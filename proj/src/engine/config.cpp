#include "deputy/engine/config.hpp"

#include <json.hpp>

#include <fstream>

namespace deputy::engine {

using nlohmann::json;

agents::AgentRegistry EngineConfig::registry() const {
    auto registry = agents::AgentRegistry::defaults();
    for (auto& [kind, settings] : registry.settings) {
        settings.enabled = agents.enabled.count(kind) > 0;
        auto threshold = agents.thresholds.find(kind);
        if (threshold != agents.thresholds.end()) {
            settings.confidence_threshold = threshold->second;
        }
        auto weight = agents.weightage.find(kind);
        if (weight != agents.weightage.end()) settings.weightage = weight->second;
    }
    return registry;
}

EngineConfig default_config() {
    EngineConfig config;
    auto defaults = agents::AgentRegistry::defaults();
    for (const auto& [kind, settings] : defaults.settings) {
        config.agents.enabled.insert(kind);
        config.agents.thresholds[kind] = settings.confidence_threshold;
        config.agents.weightage[kind] = settings.weightage;
    }
    return config;
}

namespace {

void reject_unknown_keys(const json& node, const std::set<std::string>& known,
                         const std::string& where) {
    if (!node.is_object()) {
        throw ConfigError("config section '" + where + "' must be an object");
    }
    for (const auto& [key, value] : node.items()) {
        if (!known.count(key)) {
            throw ConfigError("unknown config key: " + where + (where.empty() ? "" : ".") + key);
        }
    }
}

agents::AgentKind agent_or_throw(const std::string& name, const std::string& where) {
    auto kind = agents::agent_from_name(name);
    if (!kind) throw ConfigError("unknown agent '" + name + "' in " + where);
    return *kind;
}

features::SizeClass size_class_or_throw(const std::string& name) {
    for (features::SizeClass size : {features::SizeClass::S, features::SizeClass::M,
                                     features::SizeClass::L, features::SizeClass::XL,
                                     features::SizeClass::XXL}) {
        if (features::size_class_name(size) == name) return size;
    }
    throw ConfigError("unknown size class '" + name + "' in estimates");
}

template <typename T>
void read_to(const json& node, const char* key, T& out) {
    if (node.contains(key)) out = node.at(key).get<T>();
}

bool provider_from_name_ok(const std::string& name) {
    return name == "github" || name == "gitlab" || name == "bitbucket";
}

}  // namespace

EngineConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    reject_unknown_keys(root, {"agents", "retrieval", "chunker", "gateway", "blending",
                               "estimates", "limits", "service", "vcs"},
                        "");

    EngineConfig config = default_config();

    if (root.contains("agents")) {
        const json& node = root["agents"];
        reject_unknown_keys(node, {"enabled", "thresholds", "weightage"}, "agents");
        if (node.contains("enabled")) {
            config.agents.enabled.clear();
            for (const auto& name : node["enabled"]) {
                config.agents.enabled.insert(
                    agent_or_throw(name.get<std::string>(), "agents.enabled"));
            }
        }
        if (node.contains("thresholds")) {
            for (const auto& [name, value] : node["thresholds"].items()) {
                auto kind = agent_or_throw(name, "agents.thresholds");
                double threshold = value.get<double>();
                if (threshold < 0.0 || threshold > 1.0) {
                    throw ConfigError("threshold for '" + name + "' must be in [0,1]");
                }
                config.agents.thresholds[kind] = threshold;
            }
        }
        if (node.contains("weightage")) {
            for (const auto& [name, value] : node["weightage"].items()) {
                auto kind = agent_or_throw(name, "agents.weightage");
                double weight = value.get<double>();
                if (weight <= 0.0 || weight > 1.0) {
                    throw ConfigError("weightage for '" + name + "' must be in (0,1]");
                }
                config.agents.weightage[kind] = weight;
            }
        }
    }

    if (root.contains("retrieval")) {
        const json& node = root["retrieval"];
        reject_unknown_keys(node, {"top_k", "min_similarity", "budget_tokens", "chars_per_token"},
                            "retrieval");
        read_to(node, "top_k", config.retrieval.top_k);
        read_to(node, "min_similarity", config.retrieval.min_similarity);
        read_to(node, "budget_tokens", config.retrieval.budget_tokens);
        read_to(node, "chars_per_token", config.retrieval.chars_per_token);
        if (config.retrieval.top_k <= 0) throw ConfigError("retrieval.top_k must be positive");
        if (config.retrieval.min_similarity < 0.0 || config.retrieval.min_similarity > 1.0) {
            throw ConfigError("retrieval.min_similarity must be in [0,1]");
        }
        if (config.retrieval.budget_tokens <= 0) {
            throw ConfigError("retrieval.budget_tokens must be positive");
        }
    }

    if (root.contains("chunker")) {
        const json& node = root["chunker"];
        reject_unknown_keys(node, {"max_chunk_lines", "ttl_seconds", "languages"}, "chunker");
        read_to(node, "max_chunk_lines", config.chunker.max_chunk_lines);
        read_to(node, "ttl_seconds", config.chunker.ttl_seconds);
        if (node.contains("languages")) {
            config.chunker.languages.clear();
            for (const auto& lang : node["languages"]) {
                config.chunker.languages.insert(lang.get<std::string>());
            }
        }
        if (config.chunker.max_chunk_lines <= 0) {
            throw ConfigError("chunker.max_chunk_lines must be positive");
        }
        if (config.chunker.ttl_seconds <= 0) {
            throw ConfigError("chunker.ttl_seconds must be positive");
        }
    }

    if (root.contains("gateway")) {
        const json& node = root["gateway"];
        reject_unknown_keys(node,
                            {"provider", "mock_script", "review_model", "summary_model",
                             "api_base", "api_key_env", "max_context_tokens", "concurrency",
                             "max_attempts", "initial_backoff_ms"},
                            "gateway");
        read_to(node, "provider", config.gateway.provider);
        read_to(node, "mock_script", config.gateway.mock_script);
        read_to(node, "review_model", config.gateway.review_model);
        read_to(node, "summary_model", config.gateway.summary_model);
        read_to(node, "api_base", config.gateway.api_base);
        read_to(node, "api_key_env", config.gateway.api_key_env);
        read_to(node, "max_context_tokens", config.gateway.max_context_tokens);
        read_to(node, "concurrency", config.gateway.concurrency);
        read_to(node, "max_attempts", config.gateway.max_attempts);
        read_to(node, "initial_backoff_ms", config.gateway.initial_backoff_ms);
        if (config.gateway.provider != "mock" && config.gateway.provider != "openai" &&
            config.gateway.provider != "anthropic") {
            throw ConfigError("gateway.provider must be mock, openai or anthropic");
        }
        if (config.gateway.concurrency <= 0) {
            throw ConfigError("gateway.concurrency must be positive");
        }
        if (config.gateway.max_attempts <= 0) {
            throw ConfigError("gateway.max_attempts must be positive");
        }
    }

    if (root.contains("blending")) {
        const json& node = root["blending"];
        reject_unknown_keys(node, {"model_summaries", "default_threshold"}, "blending");
        read_to(node, "model_summaries", config.blending.model_summaries);
        read_to(node, "default_threshold", config.blending.default_threshold);
    }

    if (root.contains("estimates")) {
        for (const auto& [name, value] : root["estimates"].items()) {
            int minutes = value.get<int>();
            if (minutes <= 0) throw ConfigError("estimate minutes must be positive");
            config.estimates[size_class_or_throw(name)] = minutes;
        }
    }

    if (root.contains("limits")) {
        const json& node = root["limits"];
        reject_unknown_keys(node, {"max_changed_loc", "per_agent_budget_tokens"}, "limits");
        read_to(node, "max_changed_loc", config.limits.max_changed_loc);
        read_to(node, "per_agent_budget_tokens", config.limits.per_agent_budget_tokens);
    }

    if (root.contains("service")) {
        const json& node = root["service"];
        reject_unknown_keys(node, {"port", "workers", "queue_capacity", "secret_env"}, "service");
        read_to(node, "port", config.service.port);
        read_to(node, "workers", config.service.workers);
        read_to(node, "queue_capacity", config.service.queue_capacity);
        read_to(node, "secret_env", config.service.secret_env);
        if (config.service.workers <= 0) throw ConfigError("service.workers must be positive");
        if (config.service.queue_capacity <= 0) {
            throw ConfigError("service.queue_capacity must be positive");
        }
    }

    if (root.contains("vcs")) {
        const json& node = root["vcs"];
        reject_unknown_keys(node,
                            {"provider", "api_base", "token_env", "tracker_base",
                             "tracker_token_env", "wiki_token_env"},
                            "vcs");
        read_to(node, "provider", config.vcs.provider);
        read_to(node, "api_base", config.vcs.api_base);
        read_to(node, "token_env", config.vcs.token_env);
        read_to(node, "tracker_base", config.vcs.tracker_base);
        read_to(node, "tracker_token_env", config.vcs.tracker_token_env);
        read_to(node, "wiki_token_env", config.vcs.wiki_token_env);
        if (config.vcs.provider != "stub" && !provider_from_name_ok(config.vcs.provider)) {
            throw ConfigError("vcs.provider must be stub, github, gitlab or bitbucket");
        }
    }

    if (config.gateway.provider == "mock" && config.gateway.mock_script.empty()) {
        // allowed: programmatic embedding provides the script; the CLI warns
    }
    return config;
}

EngineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not readable: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

std::string config_reference_json() {
    EngineConfig config = default_config();
    json agents_node;
    for (auto kind : agents::kAllAgents) {
        agents_node["enabled"].push_back(std::string(agents::agent_name(kind)));
    }
    for (const auto& [kind, threshold] : config.agents.thresholds) {
        agents_node["thresholds"][std::string(agents::agent_name(kind))] = threshold;
    }
    for (const auto& [kind, weight] : config.agents.weightage) {
        agents_node["weightage"][std::string(agents::agent_name(kind))] = weight;
    }
    json estimates;
    for (const auto& [size, minutes] : config.estimates) {
        estimates[std::string(features::size_class_name(size))] = minutes;
    }
    json root = {
        {"agents", agents_node},
        {"retrieval",
         {{"top_k", config.retrieval.top_k},
          {"min_similarity", config.retrieval.min_similarity},
          {"budget_tokens", config.retrieval.budget_tokens},
          {"chars_per_token", config.retrieval.chars_per_token}}},
        {"chunker",
         {{"max_chunk_lines", config.chunker.max_chunk_lines},
          {"ttl_seconds", config.chunker.ttl_seconds},
          {"languages", config.chunker.languages}}},
        {"gateway",
         {{"provider", config.gateway.provider},
          {"mock_script", config.gateway.mock_script},
          {"review_model", config.gateway.review_model},
          {"summary_model", config.gateway.summary_model},
          {"api_base", config.gateway.api_base},
          {"api_key_env", config.gateway.api_key_env},
          {"max_context_tokens", config.gateway.max_context_tokens},
          {"concurrency", config.gateway.concurrency},
          {"max_attempts", config.gateway.max_attempts},
          {"initial_backoff_ms", config.gateway.initial_backoff_ms}}},
        {"blending",
         {{"model_summaries", config.blending.model_summaries},
          {"default_threshold", config.blending.default_threshold}}},
        {"estimates", estimates},
        {"limits",
         {{"max_changed_loc", config.limits.max_changed_loc},
          {"per_agent_budget_tokens", config.limits.per_agent_budget_tokens}}},
        {"service",
         {{"port", config.service.port},
          {"workers", config.service.workers},
          {"queue_capacity", config.service.queue_capacity},
          {"secret_env", config.service.secret_env}}},
        {"vcs",
         {{"provider", config.vcs.provider},
          {"api_base", config.vcs.api_base},
          {"token_env", config.vcs.token_env},
          {"tracker_base", config.vcs.tracker_base},
          {"tracker_token_env", config.vcs.tracker_token_env},
          {"wiki_token_env", config.vcs.wiki_token_env}}},
    };
    return root.dump(2);
}

}  // namespace deputy::engine
