#include "deputy/features/chat.hpp"

#include "deputy/util/strings.hpp"
#include "deputy/vcs/diff.hpp"

namespace deputy::features {

std::optional<ChatCommand> parse_chat_command(const std::string& comment_text) {
    std::string text = util::trim(comment_text);

    ChatCommand command;
    std::string_view rest;
    std::string_view view = text;
    // "#deputydev" first: "#dd" must not shadow it
    if (view.substr(0, 10) == "#deputydev") {
        command.trigger = ChatCommand::Trigger::deputydev;
        rest = view.substr(10);
    } else if (view.substr(0, 3) == "#dd") {
        command.trigger = ChatCommand::Trigger::dd;
        rest = view.substr(3);
    } else {
        return std::nullopt;
    }
    // the trigger must stand alone: "#ddx" or "#deputydevs" is not a command
    if (!rest.empty() && rest[0] != ' ' && rest[0] != '\t' && rest[0] != '\n' && rest[0] != '-') {
        return std::nullopt;
    }

    std::string prompt = util::trim(rest);
    if (!prompt.empty() && prompt[0] == '-') prompt = util::trim(prompt.substr(1));
    if (prompt.empty()) throw ChatError("empty chat prompt");
    command.prompt = std::move(prompt);
    return command;
}

std::string answer_chat(const ChatCommand& command, const context::OptimizedContext& ctx,
                        llm::Gateway& gateway, const ChatOptions& options) {
    llm::ModelRequest request;
    request.model_id = options.model_id;
    request.max_output_tokens = options.max_output_tokens;
    request.system_prompt =
        "Task: chat\n\nYou are a context-aware assistant on a pull request. Answer the "
        "developer's question using the PR context below. You may generate code, tests or "
        "documentation when asked.";

    std::string user;
    user += "## Question\n" + command.prompt + "\n\n";
    user += "## Pull request title\n" + ctx.pr_title + "\n\n";
    if (!ctx.pr_description.empty()) {
        user += "## Pull request description\n" + ctx.pr_description + "\n\n";
    }

    const chunk::CodeChunk* anchored = nullptr;
    if (command.anchor) {
        for (const auto& chunk : ctx.relevant_chunks) {
            if (chunk.file_path == command.anchor->first &&
                chunk.span.start_line <= command.anchor->second &&
                command.anchor->second <= chunk.span.end_line) {
                anchored = &chunk;
                break;
            }
        }
    }
    if (anchored != nullptr) {
        user += "## Code under discussion (" + anchored->file_path + ":" +
                std::to_string(anchored->span.start_line) + "-" +
                std::to_string(anchored->span.end_line) + ")\n```\n" + anchored->content;
        if (!anchored->content.empty() && anchored->content.back() != '\n') user += "\n";
        user += "```\n\n";
    }

    std::size_t listed = 0;
    for (const auto& chunk : ctx.relevant_chunks) {
        if (listed >= options.max_context_chunks) break;
        if (anchored == &chunk) continue;
        if (listed == 0) user += "## Related code\n";
        user += "### " + chunk.file_path + ":" + std::to_string(chunk.span.start_line) + "-" +
                std::to_string(chunk.span.end_line) + " (" + chunk.qualified_name() + ")\n```\n" +
                chunk.content;
        if (!chunk.content.empty() && chunk.content.back() != '\n') user += "\n";
        user += "```\n\n";
        ++listed;
    }

    user += "## Diff\n```diff\n" + vcs::serialize_diff(ctx.pr_diff) + "```\n";
    request.user_prompt = std::move(user);

    return gateway.complete(request).text;
}

}  // namespace deputy::features
