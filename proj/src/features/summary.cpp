#include "deputy/features/summary.hpp"

#include "deputy/vcs/diff.hpp"

namespace deputy::features {

std::string_view size_class_name(SizeClass size) {
    switch (size) {
        case SizeClass::S: return "S";
        case SizeClass::M: return "M";
        case SizeClass::L: return "L";
        case SizeClass::XL: return "XL";
        case SizeClass::XXL: return "XXL";
    }
    return "?";
}

SizeClass size_class_for_loc(long changed_loc) {
    if (changed_loc <= 50) return SizeClass::S;
    if (changed_loc <= 100) return SizeClass::M;
    if (changed_loc <= 200) return SizeClass::L;
    if (changed_loc <= 500) return SizeClass::XL;
    return SizeClass::XXL;
}

std::map<SizeClass, int> default_estimate_table() {
    return {{SizeClass::S, 10},
            {SizeClass::M, 20},
            {SizeClass::L, 40},
            {SizeClass::XL, 90},
            {SizeClass::XXL, 180}};
}

namespace {

std::string diff_statistics(const context::OptimizedContext& ctx) {
    std::string out = "Changed files:\n";
    for (const auto& file : ctx.pr_diff.files) {
        long added = 0;
        long removed = 0;
        for (const auto& hunk : file.hunks) {
            for (const auto& line : hunk.lines) {
                if (line.kind == vcs::LineKind::added) ++added;
                if (line.kind == vcs::LineKind::removed) ++removed;
            }
        }
        out += "- " + file.path + " (+" + std::to_string(added) + "/-" +
               std::to_string(removed) + ")\n";
    }
    return out;
}

}  // namespace

PrSummary summarize_pr(const context::OptimizedContext& ctx, llm::Gateway& gateway,
                       const SummaryOptions& options) {
    PrSummary summary;
    summary.changed_loc = vcs::changed_loc(ctx.pr_diff);
    summary.size_class = size_class_for_loc(summary.changed_loc);
    auto it = options.estimates.find(summary.size_class);
    summary.estimated_review_minutes = (it != options.estimates.end()) ? it->second : 0;

    llm::ModelRequest request;
    request.model_id = options.model_id;
    request.max_output_tokens = options.max_output_tokens;
    request.system_prompt =
        "Task: pr-summary\n\nSummarize the pull request below for reviewers and service owners: "
        "what changes, why, and anything risky. Be concise and concrete.";
    request.user_prompt = "## Pull request title\n" + ctx.pr_title + "\n\n";
    if (!ctx.pr_description.empty()) {
        request.user_prompt += "## Pull request description\n" + ctx.pr_description + "\n\n";
    }
    request.user_prompt += "## Diff\n```diff\n" + vcs::serialize_diff(ctx.pr_diff) + "```\n";

    try {
        summary.summary_text = gateway.complete(request).text;
    } catch (const std::exception&) {
        summary.summary_text = diff_statistics(ctx);
        summary.degraded = true;
    }
    return summary;
}

std::string render_summary_comment(const PrSummary& summary) {
    std::string out = "## PR Summary\n";
    out += "**Size:** ";
    out += size_class_name(summary.size_class);
    out += " (" + std::to_string(summary.changed_loc) + " changed LOC) | ";
    out += "**Estimated review time:** " + std::to_string(summary.estimated_review_minutes) +
           " min\n\n";
    out += summary.summary_text;
    if (!summary.summary_text.empty() && summary.summary_text.back() != '\n') out += "\n";
    if (summary.degraded) out += "\n_Summary degraded to diff statistics._\n";
    return out;
}

}  // namespace deputy::features
