#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "deputy/vcs/types.hpp"

namespace deputy::vcs {

class WebhookError : public std::runtime_error {
public:
    enum class Kind { unknown_provider, bad_json, missing_field, invariant, bad_signature };

    WebhookError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Maps a provider-native webhook payload onto the normalized event. The
/// payload must be valid JSON for the declared provider; missing mandatory
/// fields are reported with their JSON path.
PullRequestEvent parse_webhook(std::string_view raw_payload, Provider provider);

/// Validates an HMAC-SHA256 signature header ("sha256=<hex>" or bare hex)
/// against the raw payload. Constant-time comparison.
bool verify_webhook_signature(std::string_view raw_payload, std::string_view signature_header,
                              std::string_view secret);

}  // namespace deputy::vcs
