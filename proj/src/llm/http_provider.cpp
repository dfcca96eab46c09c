#include "deputy/llm/http_provider.hpp"

#include <json.hpp>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace deputy::llm {

using nlohmann::json;

std::string build_chat_request_body(HttpDialect dialect, const ModelRequest& request) {
    json body;
    if (dialect == HttpDialect::openai) {
        body = {
            {"model", request.model_id},
            {"temperature", request.temperature},
            {"max_tokens", request.max_output_tokens},
            {"messages",
             json::array({
                 {{"role", "system"}, {"content", request.system_prompt}},
                 {{"role", "user"}, {"content", request.user_prompt}},
             })},
        };
        if (request.structured_mode) {
            body["response_format"] = {{"type", "json_object"}};
        }
    } else {
        body = {
            {"model", request.model_id},
            {"temperature", request.temperature},
            {"max_tokens", request.max_output_tokens},
            {"system", request.system_prompt},
            {"messages",
             json::array({
                 {{"role", "user"}, {"content", request.user_prompt}},
             })},
        };
    }
    return body.dump();
}

ModelResponse parse_chat_response_body(HttpDialect dialect, const std::string& body) {
    json root = json::parse(body);
    ModelResponse response;
    if (dialect == HttpDialect::openai) {
        response.text = root.at("choices").at(0).at("message").at("content").get<std::string>();
        if (root.contains("usage")) {
            response.input_tokens = root["usage"].value("prompt_tokens", 0L);
            response.output_tokens = root["usage"].value("completion_tokens", 0L);
        }
    } else {
        const json& content = root.at("content");
        for (const auto& block : content) {
            if (block.value("type", "") == "text") response.text += block.value("text", "");
        }
        if (root.contains("usage")) {
            response.input_tokens = root["usage"].value("input_tokens", 0L);
            response.output_tokens = root["usage"].value("output_tokens", 0L);
        }
    }
    return response;
}

HttpChatProvider::HttpChatProvider(HttpDialect dialect, std::string base_url, std::string api_key)
    : dialect_(dialect), base_url_(std::move(base_url)), api_key_(std::move(api_key)) {}

std::string HttpChatProvider::name() const {
    return dialect_ == HttpDialect::openai ? "openai-http" : "anthropic-http";
}

ModelResponse HttpChatProvider::complete(const ModelRequest& request) {
    httplib::Client client(base_url_);
    client.set_read_timeout(120, 0);

    httplib::Headers headers;
    std::string path;
    if (dialect_ == HttpDialect::openai) {
        headers = {{"Authorization", "Bearer " + api_key_}};
        path = "/v1/chat/completions";
    } else {
        headers = {{"x-api-key", api_key_}, {"anthropic-version", "2023-06-01"}};
        path = "/v1/messages";
    }

    auto result = client.Post(path, headers, build_chat_request_body(dialect_, request),
                              "application/json");
    if (!result) {
        throw ProviderError("provider unreachable: " + httplib::to_string(result.error()),
                            /*transient=*/true);
    }
    if (result->status == 401 || result->status == 403) {
        throw AuthError("provider rejected credentials (HTTP " +
                        std::to_string(result->status) + ")");
    }
    if (result->status == 429 || result->status >= 500) {
        throw ProviderError("provider error HTTP " + std::to_string(result->status), true);
    }
    if (result->status != 200) {
        throw ProviderError("provider error HTTP " + std::to_string(result->status) + ": " +
                            result->body);
    }
    try {
        return parse_chat_response_body(dialect_, result->body);
    } catch (const json::exception& e) {
        throw ProviderError(std::string("malformed provider response: ") + e.what());
    }
}

}  // namespace deputy::llm
