#pragma once

#include <map>
#include <string>

#include "deputy/context/context.hpp"
#include "deputy/llm/gateway.hpp"

namespace deputy::features {

enum class SizeClass { S, M, L, XL, XXL };

std::string_view size_class_name(SizeClass size);

/// Step function over changed LOC: S 0-50, M 51-100, L 101-200, XL 201-500,
/// XXL above.
SizeClass size_class_for_loc(long changed_loc);

/// Review-minute estimates per size class; placeholder values surfaced in
/// configuration.
std::map<SizeClass, int> default_estimate_table();

struct PrSummary {
    std::string summary_text;
    long changed_loc = 0;
    SizeClass size_class = SizeClass::S;
    int estimated_review_minutes = 0;
    bool degraded = false;  // model call failed, text is deterministic stats
};

struct SummaryOptions {
    std::string model_id = "summary-default";
    long max_output_tokens = 1024;
    std::map<SizeClass, int> estimates = default_estimate_table();
};

/// One model call over {title, description, diff}. On gateway failure the
/// text degrades to deterministic diff statistics and the summary is flagged.
PrSummary summarize_pr(const context::OptimizedContext& ctx, llm::Gateway& gateway,
                       const SummaryOptions& options = {});

/// Stable comment format: "## PR Summary" header, size badge, estimate, body.
std::string render_summary_comment(const PrSummary& summary);

}  // namespace deputy::features
