#include "deputy/llm/mock.hpp"

#include <json.hpp>

#include <fstream>
#include <thread>

#include "deputy/retrieval/merge.hpp"
#include "deputy/util/hash.hpp"

namespace deputy::llm {

using nlohmann::json;

namespace {

MockResponseSeq parse_response(const json& value) {
    MockResponseSeq seq;
    if (value.is_string()) {
        seq.replies.push_back(value.get<std::string>());
    } else if (value.is_array()) {
        for (const auto& item : value) seq.replies.push_back(item.get<std::string>());
    } else {
        throw ProviderError("mock script: response must be a string or array of strings");
    }
    if (seq.replies.empty()) throw ProviderError("mock script: empty response sequence");
    return seq;
}

}  // namespace

ScriptedMockProvider::ScriptedMockProvider(MockScript script) : script_(std::move(script)) {}

MockScript ScriptedMockProvider::parse_script(const std::string& json_text) {
    json root = json::parse(json_text);
    MockScript script;
    if (root.contains("exact")) {
        for (const auto& [digest, value] : root["exact"].items()) {
            script.exact[digest] = parse_response(value);
        }
    }
    if (root.contains("contains")) {
        for (const auto& rule : root["contains"]) {
            MockContainsRule parsed;
            if (rule.contains("needle")) {
                parsed.needles.push_back(rule["needle"].get<std::string>());
            }
            if (rule.contains("needles")) {
                for (const auto& needle : rule["needles"]) {
                    parsed.needles.push_back(needle.get<std::string>());
                }
            }
            parsed.response = parse_response(rule.at("response"));
            script.contains.push_back(std::move(parsed));
        }
    }
    if (root.contains("default")) {
        script.fallback = parse_response(root["default"]);
    }
    return script;
}

MockScript ScriptedMockProvider::load_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProviderError("mock script not readable: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_script(text);
}

std::string ScriptedMockProvider::prompt_digest(const ModelRequest& request) {
    return util::sha256_hex(request.system_prompt + "\x1e" + request.user_prompt);
}

std::string ScriptedMockProvider::next_reply(MockResponseSeq& seq, const std::string& key) {
    std::size_t& pos = cursor_[key];
    const std::string& reply = seq.replies[std::min(pos, seq.replies.size() - 1)];
    ++pos;
    if (reply == "!transient-error") throw ProviderError("scripted transient failure", true);
    if (reply == "!error") throw ProviderError("scripted failure", false);
    if (reply == "!auth-error") throw AuthError("scripted auth failure");
    return reply;
}

ModelResponse ScriptedMockProvider::complete(const ModelRequest& request) {
    std::chrono::milliseconds delay{0};
    std::string text;
    {
        std::lock_guard lock(mu_);
        log_.push_back(request);
        delay = latency_;

        std::string digest = prompt_digest(request);
        auto exact = script_.exact.find(digest);
        if (exact != script_.exact.end()) {
            text = next_reply(exact->second, "exact:" + digest);
        } else {
            bool matched = false;
            std::string haystack = request.system_prompt + "\n" + request.user_prompt;
            for (std::size_t i = 0; i < script_.contains.size(); ++i) {
                auto& rule = script_.contains[i];
                bool all = !rule.needles.empty();
                for (const auto& needle : rule.needles) {
                    if (haystack.find(needle) == std::string::npos) {
                        all = false;
                        break;
                    }
                }
                if (all) {
                    text = next_reply(rule.response, "contains:" + std::to_string(i));
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                if (!script_.fallback) {
                    throw ProviderError("mock script has no response for this prompt");
                }
                text = next_reply(*script_.fallback, "default");
            }
        }
    }
    if (delay.count() > 0) std::this_thread::sleep_for(delay);

    ModelResponse response;
    response.text = text;
    response.input_tokens =
        retrieval::estimate_tokens(request.system_prompt) +
        retrieval::estimate_tokens(request.user_prompt);
    response.output_tokens = retrieval::estimate_tokens(response.text);
    response.latency = std::max(delay, std::chrono::milliseconds(1));
    return response;
}

std::vector<ModelRequest> ScriptedMockProvider::request_log() const {
    std::lock_guard lock(mu_);
    return log_;
}

long ScriptedMockProvider::count_requests(const std::vector<std::string>& needles) const {
    std::lock_guard lock(mu_);
    long count = 0;
    for (const auto& request : log_) {
        std::string haystack = request.system_prompt + "\n" + request.user_prompt;
        bool all = true;
        for (const auto& needle : needles) {
            if (haystack.find(needle) == std::string::npos) {
                all = false;
                break;
            }
        }
        if (all) ++count;
    }
    return count;
}

void ScriptedMockProvider::set_latency(std::chrono::milliseconds latency) {
    std::lock_guard lock(mu_);
    latency_ = latency;
}

}  // namespace deputy::llm
