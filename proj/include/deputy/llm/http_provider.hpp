#pragma once

#include <string>

#include "deputy/llm/gateway.hpp"

namespace deputy::llm {

/// Wire dialect of a hosted chat-completion API.
enum class HttpDialect { openai, anthropic };

/// Request/response translation, separated from transport so it can be
/// tested without a network.
std::string build_chat_request_body(HttpDialect dialect, const ModelRequest& request);
ModelResponse parse_chat_response_body(HttpDialect dialect, const std::string& body);

/// Thin adapter over a hosted chat API. Model ids, base URL and the API key
/// come from configuration; nothing is hardcoded.
class HttpChatProvider final : public ModelProvider {
public:
    HttpChatProvider(HttpDialect dialect, std::string base_url, std::string api_key);

    std::string name() const override;
    ModelResponse complete(const ModelRequest& request) override;

private:
    HttpDialect dialect_;
    std::string base_url_;
    std::string api_key_;
};

}  // namespace deputy::llm
