#include "deputy/context/context.hpp"

#include <algorithm>
#include <set>

#include "deputy/retrieval/merge.hpp"

namespace deputy::context {

using agents::AgentKind;
using agents::Pass;

OptimizedContext build_optimized_context(const vcs::PullRequestEvent& event,
                                         const vcs::UnifiedDiff& diff,
                                         const std::vector<vcs::KnowledgeDoc>& docs,
                                         const std::vector<chunk::CodeChunk>& chunks) {
    OptimizedContext ctx;
    ctx.pr_title = event.title;
    ctx.pr_description = event.description;
    ctx.pr_diff = diff;
    for (const auto& doc : docs) {
        if (doc.source == vcs::DocSource::story && !ctx.story) {
            ctx.story = doc;
        } else if (doc.source == vcs::DocSource::approach && !ctx.approach) {
            ctx.approach = doc;
        }
    }
    std::set<std::string> seen;
    for (const auto& chunk : chunks) {
        if (seen.insert(chunk.chunk_id).second) ctx.relevant_chunks.push_back(chunk);
    }
    return ctx;
}

std::string_view bundle_part_name(BundlePart part) {
    switch (part) {
        case BundlePart::diff: return "diff";
        case BundlePart::title: return "title";
        case BundlePart::description: return "description";
        case BundlePart::context_code: return "context-code";
        case BundlePart::user_story: return "user-story";
        case BundlePart::confluence_pages: return "confluence-pages";
        case BundlePart::initial_llm_review: return "initial-llm-review";
    }
    return "?";
}

AgentContextBundle bundle_for_agent(const OptimizedContext&, AgentKind agent, Pass pass,
                                    std::optional<std::string> initial_review) {
    if (pass == Pass::Reflection && !initial_review) {
        throw BundleError("reflection pass requires the initial review");
    }

    AgentContextBundle bundle;
    bundle.agent = agent;
    bundle.pass = pass;
    bundle.parts = {BundlePart::diff, BundlePart::title, BundlePart::description};
    switch (agent) {
        case AgentKind::Security:
        case AgentKind::CodeCommunication:
            break;
        case AgentKind::PerformanceOptimization:
        case AgentKind::CodeMaintainability:
        case AgentKind::Error:
            bundle.parts.insert(BundlePart::context_code);
            break;
        case AgentKind::BusinessLogicValidation:
            bundle.parts.insert(BundlePart::context_code);
            bundle.parts.insert(BundlePart::user_story);
            bundle.parts.insert(BundlePart::confluence_pages);
            break;
    }
    if (pass == Pass::Reflection) {
        bundle.parts.insert(BundlePart::initial_llm_review);
        bundle.initial_review = std::move(initial_review);
    }
    return bundle;
}

namespace {

std::string_view responsibilities(AgentKind agent) {
    switch (agent) {
        case AgentKind::Security:
            return "Identify security issues and recommend corrective code: injection attacks, "
                   "improper input validation, use of components with known vulnerabilities, "
                   "hardcoded credentials, unsafe data handling.";
        case AgentKind::CodeCommunication:
            return "Identify issues in how the code communicates: missing or incomplete "
                   "docstrings, improper documentation for a snippet, incorrect or inconsistent "
                   "logging usage.";
        case AgentKind::PerformanceOptimization:
            return "Identify performance problems and suggest optimizations: algorithmic time "
                   "and space complexity, database query efficiency, wasteful allocation or IO "
                   "patterns.";
        case AgentKind::CodeMaintainability:
            return "Identify issues of maintainability, readability, reusability and overall "
                   "code quality.";
        case AgentKind::Error:
            return "Identify any logical, syntactical or runtime error the change may induce.";
        case AgentKind::BusinessLogicValidation:
            return "Correlate the changes with the stated business requirements and check "
                   "whether the change adheres to them.";
    }
    return {};
}

constexpr std::string_view kXmlSkeleton =
    "<review>\n"
    "  <comments>\n"
    "    <comment>\n"
    "      <description></description>\n"
    "      <corrective_code></corrective_code>\n"
    "      <file_path></file_path>\n"
    "      <line_number></line_number>\n"
    "      <confidence_score></confidence_score>\n"
    "      <bucket></bucket>\n"
    "    </comment>\n"
    "  </comments>\n"
    "</review>";

std::string render_system(const AgentContextBundle& bundle) {
    std::string out;
    out += "You are the ";
    out += agents::agent_display(bundle.agent);
    out += " reviewer, one of several focused agents reviewing a pull request.\n";
    out += "Agent: ";
    out += agents::agent_name(bundle.agent);
    out += "\nPass: ";
    out += agents::pass_name(bundle.pass);
    out += "\n\n";
    out += responsibilities(bundle.agent);
    out += "\n\n";
    if (bundle.pass == Pass::SinglePass) {
        out +=
            "Review the pull request below. Think freely and thoroughly; do not constrain "
            "your output to any schema. For every finding give the file path, the line number "
            "in the new version of the file, a confidence score between 0 and 1, a short "
            "category bucket, and corrective code when it helps.";
    } else {
        out +=
            "Your initial review of this pull request is included at the end of the input. "
            "Re-examine it: remove findings that are wrong or weak, sharpen the rest, and add "
            "anything important you missed. Then output ONLY an XML document in exactly this "
            "schema, one <comment> per finding:\n\n";
        out += kXmlSkeleton;
    }
    return out;
}

std::string fence(const std::string& body, const std::string& info = {}) {
    std::string out = "```";
    out += info;
    out += "\n";
    out += body;
    if (!body.empty() && body.back() != '\n') out += "\n";
    out += "```\n";
    return out;
}

std::string render_chunk_section(const std::vector<chunk::CodeChunk>& chunks,
                                 std::size_t count) {
    std::string out;
    if (count == 0) return out;
    out += "## Context code\n\n";
    for (std::size_t i = 0; i < count; ++i) {
        const auto& chunk = chunks[i];
        out += "### " + chunk.file_path + ":" + std::to_string(chunk.span.start_line) + "-" +
               std::to_string(chunk.span.end_line) + " (" + chunk.qualified_name() + ")\n";
        out += fence(chunk.content);
        out += "\n";
    }
    return out;
}

std::string render_user_prompt(const OptimizedContext& ctx, const AgentContextBundle& bundle,
                               std::size_t chunk_count) {
    const auto& parts = bundle.parts;
    std::string out;
    if (parts.count(BundlePart::title)) {
        out += "## Pull request title\n" + ctx.pr_title + "\n\n";
    }
    if (parts.count(BundlePart::description) && !ctx.pr_description.empty()) {
        out += "## Pull request description\n" + ctx.pr_description + "\n\n";
    }
    if (parts.count(BundlePart::user_story) && ctx.story) {
        out += "## User story (" + ctx.story->external_key + ")\n";
        if (!ctx.story->title.empty()) out += ctx.story->title + "\n\n";
        out += ctx.story->body + "\n\n";
    }
    if (parts.count(BundlePart::confluence_pages) && ctx.approach) {
        out += "## Approach document (" + ctx.approach->external_key + ")\n";
        if (!ctx.approach->title.empty()) out += ctx.approach->title + "\n\n";
        out += ctx.approach->body + "\n\n";
    }
    if (parts.count(BundlePart::context_code)) {
        out += render_chunk_section(ctx.relevant_chunks, chunk_count);
    }
    if (parts.count(BundlePart::diff)) {
        out += "## Diff\n";
        out += fence(vcs::serialize_diff(ctx.pr_diff), "diff");
        out += "\n";
    }
    if (parts.count(BundlePart::initial_llm_review) && bundle.initial_review) {
        out += "## Initial review\n" + *bundle.initial_review + "\n";
    }
    return out;
}

}  // namespace

RenderedPrompt render_agent_prompt(const OptimizedContext& ctx, const AgentContextBundle& bundle,
                                   const PromptLimits& limits) {
    RenderedPrompt prompt;
    prompt.system = render_system(bundle);

    std::size_t chunk_count =
        bundle.parts.count(BundlePart::context_code) ? ctx.relevant_chunks.size() : 0;
    prompt.user = render_user_prompt(ctx, bundle, chunk_count);

    std::size_t dropped = 0;
    while (chunk_count > 0 &&
           retrieval::estimate_tokens(prompt.system, limits.chars_per_token) +
                   retrieval::estimate_tokens(prompt.user, limits.chars_per_token) >
               limits.max_tokens) {
        --chunk_count;
        ++dropped;
        prompt.user = render_user_prompt(ctx, bundle, chunk_count);
    }
    if (dropped > 0) {
        prompt.warnings.push_back("dropped " + std::to_string(dropped) +
                                  " context chunk(s) to fit the prompt budget");
    }
    return prompt;
}

}  // namespace deputy::context
