#pragma once

#include <optional>
#include <string>
#include <utility>

#include "deputy/context/context.hpp"
#include "deputy/llm/gateway.hpp"

namespace deputy::features {

class ChatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ChatCommand {
    enum class Trigger { dd, deputydev };
    Trigger trigger = Trigger::dd;
    std::string prompt;
    std::optional<std::pair<std::string, long>> anchor;  // (file, new-file line)
    std::string author;
};

/// Recognizes "#dd" / "#deputydev" at the start of a comment (followed by
/// whitespace or "-"); anything else returns nullopt and the comment is
/// ignored. A trigger with nothing after it throws ChatError("empty chat
/// prompt").
std::optional<ChatCommand> parse_chat_command(const std::string& comment_text);

struct ChatOptions {
    std::string model_id = "review-default";
    long max_output_tokens = 2048;
    std::size_t max_context_chunks = 5;
};

/// One context-aware model call: the question plus title, description, diff,
/// top relevant chunks, and — when the command is anchored — the chunk
/// containing the anchor line.
std::string answer_chat(const ChatCommand& command, const context::OptimizedContext& ctx,
                        llm::Gateway& gateway, const ChatOptions& options = {});

}  // namespace deputy::features
