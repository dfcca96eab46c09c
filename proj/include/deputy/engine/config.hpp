#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "deputy/agents/agent.hpp"
#include "deputy/features/summary.hpp"

namespace deputy::engine {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Whole-engine configuration. Loads from one declarative JSON file;
/// unknown keys are rejected; secrets come from environment variables named
/// in the file, never from the file itself.
struct EngineConfig {
    struct Agents {
        std::set<agents::AgentKind> enabled;  // all six by default
        std::map<agents::AgentKind, double> thresholds;
        std::map<agents::AgentKind, double> weightage;
    } agents;

    struct Retrieval {
        int top_k = 25;
        double min_similarity = 0.35;
        long budget_tokens = 24000;
        int chars_per_token = 4;
    } retrieval;

    struct Chunker {
        long max_chunk_lines = 400;
        long ttl_seconds = 1800;  // review job duration + slack
        std::set<std::string> languages = {"python"};
    } chunker;

    struct Gateway {
        std::string provider = "mock";  // mock | openai | anthropic
        std::string mock_script;        // path, mock provider only
        std::string review_model = "review-default";
        std::string summary_model = "summary-default";
        std::string api_base;
        std::string api_key_env;
        long max_context_tokens = 100000;
        int concurrency = 6;
        int max_attempts = 3;
        long initial_backoff_ms = 1000;
    } gateway;

    struct Blending {
        bool model_summaries = false;  // overlap merge text via the model
        double default_threshold = 0.6;
    } blending;

    std::map<features::SizeClass, int> estimates = features::default_estimate_table();

    struct Limits {
        long max_changed_loc = 5000;  // oversized-PR ceiling
        long per_agent_budget_tokens = 16000;
    } limits;

    struct Service {
        int port = 8080;
        int workers = 4;
        int queue_capacity = 256;
        std::string secret_env = "DD_WEBHOOK_SECRET";
    } service;

    struct Vcs {
        std::string provider = "stub";  // stub | github | gitlab | bitbucket
        std::string api_base;
        std::string token_env;
        std::string tracker_base;
        std::string tracker_token_env;
        std::string wiki_token_env;
    } vcs;

    agents::AgentRegistry registry() const;
};

EngineConfig default_config();
EngineConfig parse_config(const std::string& json_text);
EngineConfig load_config(const std::string& path);

/// The generated configuration reference: every key with its default.
std::string config_reference_json();

}  // namespace deputy::engine
