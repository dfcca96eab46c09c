#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "deputy/agents/kind.hpp"
#include "deputy/chunk/chunk.hpp"
#include "deputy/vcs/diff.hpp"
#include "deputy/vcs/types.hpp"

namespace deputy::context {

/// The six context items assembled for a review run.
struct OptimizedContext {
    std::string pr_title;
    std::string pr_description;
    vcs::UnifiedDiff pr_diff;
    std::optional<vcs::KnowledgeDoc> story;
    std::optional<vcs::KnowledgeDoc> approach;
    std::vector<chunk::CodeChunk> relevant_chunks;  // merged-score order, deduplicated
};

OptimizedContext build_optimized_context(const vcs::PullRequestEvent& event,
                                         const vcs::UnifiedDiff& diff,
                                         const std::vector<vcs::KnowledgeDoc>& docs,
                                         const std::vector<chunk::CodeChunk>& chunks);

enum class BundlePart {
    diff,
    title,
    description,
    context_code,
    user_story,
    confluence_pages,
    initial_llm_review,
};

std::string_view bundle_part_name(BundlePart part);

/// Which context parts one agent receives in one pass.
struct AgentContextBundle {
    agents::AgentKind agent = agents::AgentKind::Security;
    agents::Pass pass = agents::Pass::SinglePass;
    std::set<BundlePart> parts;
    std::optional<std::string> initial_review;  // reflection pass only
};

class BundleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Part sets follow the per-agent context matrix: every agent gets diff,
/// title and description; the performance, maintainability and error agents
/// add context code; business-logic validation alone adds the story and wiki
/// parts; a reflection pass always adds the initial review.
AgentContextBundle bundle_for_agent(const OptimizedContext& ctx, agents::AgentKind agent,
                                    agents::Pass pass,
                                    std::optional<std::string> initial_review = std::nullopt);

struct PromptLimits {
    long max_tokens = 16000;  // per-agent serialized bundle budget
    int chars_per_token = 4;
};

struct RenderedPrompt {
    std::string system;
    std::string user;
    std::vector<std::string> warnings;
};

/// Serializes a bundle into the model prompt. Order: title, description,
/// story, approach, context chunks (fenced with path and span), diff, and —
/// reflection only — the initial review. Empty optional parts are omitted;
/// over-budget chunks are dropped lowest-score-first with a warning.
RenderedPrompt render_agent_prompt(const OptimizedContext& ctx, const AgentContextBundle& bundle,
                                   const PromptLimits& limits = {});

}  // namespace deputy::context
