#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deputy/blend/blending.hpp"
#include "deputy/chunk/store.hpp"
#include "deputy/chunk/workspace.hpp"
#include "deputy/engine/config.hpp"
#include "deputy/llm/gateway.hpp"
#include "deputy/retrieval/search.hpp"
#include "deputy/vcs/clients.hpp"
#include "deputy/vcs/post.hpp"

namespace deputy::engine {

/// Pluggable components of one engine instance; tests inject in-memory
/// implementations, build_engine() wires them from configuration.
struct EngineDeps {
    std::shared_ptr<vcs::VcsClient> vcs;
    std::shared_ptr<vcs::TrackerClient> tracker;
    std::shared_ptr<vcs::WikiClient> wiki;
    std::shared_ptr<chunk::ChunkStore> store;
    std::shared_ptr<retrieval::Embedder> embedder;
    std::shared_ptr<llm::ModelProvider> provider;
    std::function<chunk::WorkspaceHandle(const std::string&, const std::string&)> cloner;
};

enum class RunOutcome { posted, degraded, skipped_oversize, failed, nothing_to_review };

std::string_view run_outcome_name(RunOutcome outcome);

struct RunReport {
    vcs::PrRef pr;
    RunOutcome outcome = RunOutcome::failed;
    std::vector<std::pair<std::string, double>> stage_ms;  // fixed stage order
    std::vector<std::string> warnings;
    std::vector<llm::UsageLedgerEntry> usage;
    std::optional<blend::ReviewReport> report;
    std::optional<vcs::PostReceipt> receipt;
    std::string error;
};

class Engine {
public:
    Engine(EngineConfig config, EngineDeps deps);

    /// The full pipeline: fetch diff, resolve docs, clone + chunk, retrieve,
    /// build context, run agents, blend, summarize, post.
    RunReport review_pull_request(const vcs::PullRequestEvent& event);

    /// Same pipeline over a local working tree; nothing is posted anywhere.
    RunReport review_local(const std::string& repo_path, const std::string& base_ref,
                           const std::string& head_ref);

    /// Context-aware chat on a comment-added event. Returns the reply text,
    /// or nullopt when the comment is not a chat command.
    std::optional<std::string> handle_chat(const vcs::PullRequestEvent& event);

    const EngineConfig& config() const { return config_; }
    llm::Gateway& gateway() { return *gateway_; }

private:
    struct PipelineOptions {
        bool post = true;
    };
    RunReport run_pipeline(const vcs::PullRequestEvent& event, vcs::VcsClient& client,
                           const PipelineOptions& options);
    context::OptimizedContext build_context_for(const vcs::PullRequestEvent& event,
                                                vcs::VcsClient& client,
                                                std::vector<std::string>& warnings,
                                                bool& semantic_degraded);

    EngineConfig config_;
    EngineDeps deps_;
    std::shared_ptr<llm::Gateway> gateway_;
};

/// Instantiates the configured components (providers, store, embedder).
Engine build_engine(const EngineConfig& config);

/// Deterministic renderings of a run: wall-clock values never appear, so a
/// scripted-mock run is byte-stable. Stage timings are log material.
std::string render_run_text(const RunReport& run);
std::string render_run_json(const RunReport& run);

}  // namespace deputy::engine
