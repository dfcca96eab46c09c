#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deputy/agents/agent.hpp"
#include "deputy/features/summary.hpp"
#include "deputy/llm/gateway.hpp"
#include "deputy/vcs/types.hpp"

namespace deputy::blend {

using ThresholdMap = std::map<agents::AgentKind, double>;

/// One post-processing rule: a pure comments -> comments function, applied
/// in ascending order.
struct BlendingDimension {
    enum class Kind { filter, transform };

    std::string name;
    Kind kind = Kind::filter;
    int order = 0;
    std::function<std::vector<agents::ReviewComment>(const std::vector<agents::ReviewComment>&)>
        apply;
};

struct ReviewReport {
    vcs::PrRef pr;
    std::vector<agents::ReviewComment> comments;  // post-blending
    std::optional<features::PrSummary> summary;
    std::map<std::string, long> dropped_by_dimension;
    std::vector<std::string> warnings;
};

/// Keeps a comment iff its confidence reaches its agent's threshold; an
/// agent missing from the map gets default_threshold plus a warning. Order
/// preserved.
std::vector<agents::ReviewComment> confidence_filter(
    const std::vector<agents::ReviewComment>& comments, const ThresholdMap& thresholds,
    double default_threshold = 0.6, std::vector<std::string>* warnings = nullptr);

/// Collapses comments sharing (file, line) into one: description via the
/// gateway when given (deterministic concatenation otherwise or on failure),
/// confidence is the group max, bucket and corrective code come from the
/// highest-confidence member (canonical agent order breaks ties).
std::vector<agents::ReviewComment> overlap_summarize(
    const std::vector<agents::ReviewComment>& comments, llm::Gateway* gateway = nullptr,
    const std::string& model_id = "review-default");

struct BlendOptions {
    double default_threshold = 0.6;
    llm::Gateway* summarize_gateway = nullptr;  // null -> deterministic merge text
    std::string model_id = "review-default";
};

/// Default dimension stack: confidence-filter (order 10) before
/// overlap-summarize (order 20), so noise does not pollute the summaries.
std::vector<BlendingDimension> default_dimensions(const ThresholdMap& thresholds,
                                                  const BlendOptions& options = {});

/// The consolidation engine: unions all agents' comments and applies the
/// dimensions in ascending order, recording per-dimension drop counts.
ReviewReport blend(const std::vector<agents::AgentResult>& results,
                   std::vector<BlendingDimension> dims, const ThresholdMap& thresholds,
                   const BlendOptions& options = {});

}  // namespace deputy::blend
