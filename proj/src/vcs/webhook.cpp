#include "deputy/vcs/webhook.hpp"

#include <json.hpp>

#include "deputy/util/hash.hpp"

namespace deputy::vcs {

using nlohmann::json;

std::string_view provider_name(Provider p) {
    switch (p) {
        case Provider::github: return "github";
        case Provider::gitlab: return "gitlab";
        case Provider::bitbucket: return "bitbucket";
    }
    return "unknown";
}

std::optional<Provider> provider_from_name(std::string_view name) {
    if (name == "github") return Provider::github;
    if (name == "gitlab") return Provider::gitlab;
    if (name == "bitbucket") return Provider::bitbucket;
    return std::nullopt;
}

std::string_view event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::opened: return "opened";
        case EventKind::updated: return "updated";
        case EventKind::comment_added: return "comment-added";
    }
    return "unknown";
}

namespace {

// Walks a dotted path ("pull_request.head.ref"); nullptr when absent.
const json* find_path(const json& root, std::string_view path) {
    const json* cur = &root;
    std::size_t pos = 0;
    while (pos <= path.size()) {
        auto dot = path.find('.', pos);
        auto key = std::string(path.substr(pos, dot == std::string_view::npos ? dot : dot - pos));
        if (!cur->is_object() || !cur->contains(key)) return nullptr;
        cur = &(*cur)[key];
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    return cur;
}

std::string require_string(const json& root, std::string_view path) {
    const json* v = find_path(root, path);
    if (v == nullptr || v->is_null()) {
        throw WebhookError(WebhookError::Kind::missing_field,
                           "missing mandatory field: " + std::string(path));
    }
    if (v->is_string()) return v->get<std::string>();
    if (v->is_number_integer()) return std::to_string(v->get<long>());
    throw WebhookError(WebhookError::Kind::missing_field,
                       "field is not a string: " + std::string(path));
}

std::string optional_string(const json& root, std::string_view path) {
    const json* v = find_path(root, path);
    if (v == nullptr) return {};
    if (v->is_string()) return v->get<std::string>();
    if (v->is_number_integer()) return std::to_string(v->get<long>());
    return {};
}

long require_number(const json& root, std::string_view path) {
    const json* v = find_path(root, path);
    if (v == nullptr || !v->is_number_integer()) {
        throw WebhookError(WebhookError::Kind::missing_field,
                           "missing mandatory field: " + std::string(path));
    }
    return v->get<long>();
}

void check_invariants(const PullRequestEvent& event) {
    if (event.source_branch == event.target_branch) {
        throw WebhookError(WebhookError::Kind::invariant, "branch invariant violated");
    }
    if (event.title.empty()) {
        throw WebhookError(WebhookError::Kind::invariant, "title must be non-empty");
    }
    if (event.pr_number <= 0) {
        throw WebhookError(WebhookError::Kind::invariant, "pr-number must be positive");
    }
}

PullRequestEvent parse_github(const json& payload) {
    PullRequestEvent event;
    event.provider = Provider::github;

    std::string action = optional_string(payload, "action");
    bool is_comment = payload.contains("comment");
    event.kind = is_comment              ? EventKind::comment_added
                 : (action == "opened")  ? EventKind::opened
                                         : EventKind::updated;

    event.pr_number = require_number(payload, "pull_request.number");
    event.title = require_string(payload, "pull_request.title");
    event.description = optional_string(payload, "pull_request.body");
    event.author = optional_string(payload, "pull_request.user.login");
    event.source_branch = require_string(payload, "pull_request.head.ref");
    event.target_branch = require_string(payload, "pull_request.base.ref");
    event.repo_id = require_string(payload, "repository.full_name");
    event.repo_url = optional_string(payload, "repository.clone_url");

    if (is_comment) {
        CommentRef comment;
        comment.comment_id = optional_string(payload, "comment.id");
        comment.text = require_string(payload, "comment.body");
        comment.author = optional_string(payload, "comment.user.login");
        const json* path = find_path(payload, "comment.path");
        const json* line = find_path(payload, "comment.line");
        if (path != nullptr && path->is_string() && line != nullptr && line->is_number_integer()) {
            comment.anchor = {path->get<std::string>(), line->get<long>()};
        }
        event.comment = std::move(comment);
    }
    return event;
}

PullRequestEvent parse_gitlab(const json& payload) {
    PullRequestEvent event;
    event.provider = Provider::gitlab;

    std::string object_kind = optional_string(payload, "object_kind");
    if (object_kind == "note") {
        event.kind = EventKind::comment_added;
        event.pr_number = require_number(payload, "merge_request.iid");
        event.title = require_string(payload, "merge_request.title");
        event.description = optional_string(payload, "merge_request.description");
        event.source_branch = require_string(payload, "merge_request.source_branch");
        event.target_branch = require_string(payload, "merge_request.target_branch");
        CommentRef comment;
        comment.comment_id = optional_string(payload, "object_attributes.id");
        comment.text = require_string(payload, "object_attributes.note");
        comment.author = optional_string(payload, "user.username");
        event.comment = std::move(comment);
    } else {
        std::string action = optional_string(payload, "object_attributes.action");
        event.kind = (action == "open") ? EventKind::opened : EventKind::updated;
        event.pr_number = require_number(payload, "object_attributes.iid");
        event.title = require_string(payload, "object_attributes.title");
        event.description = optional_string(payload, "object_attributes.description");
        event.source_branch = require_string(payload, "object_attributes.source_branch");
        event.target_branch = require_string(payload, "object_attributes.target_branch");
    }
    event.author = optional_string(payload, "user.username");
    event.repo_id = require_string(payload, "project.path_with_namespace");
    event.repo_url = optional_string(payload, "project.git_http_url");
    return event;
}

PullRequestEvent parse_bitbucket(const json& payload) {
    PullRequestEvent event;
    event.provider = Provider::bitbucket;

    std::string key = optional_string(payload, "event_key");
    bool is_comment = payload.contains("comment") || key == "pullrequest:comment_created";
    event.kind = is_comment                          ? EventKind::comment_added
                 : (key == "pullrequest:updated")    ? EventKind::updated
                                                     : EventKind::opened;

    event.pr_number = require_number(payload, "pullrequest.id");
    event.title = require_string(payload, "pullrequest.title");
    event.description = optional_string(payload, "pullrequest.description");
    event.author = optional_string(payload, "pullrequest.author.nickname");
    if (event.author.empty()) {
        event.author = optional_string(payload, "pullrequest.author.display_name");
    }
    event.source_branch = require_string(payload, "pullrequest.source.branch.name");
    event.target_branch = require_string(payload, "pullrequest.destination.branch.name");
    event.repo_id = require_string(payload, "repository.full_name");
    event.repo_url = optional_string(payload, "repository.clone_url");

    if (is_comment) {
        CommentRef comment;
        comment.comment_id = optional_string(payload, "comment.id");
        comment.text = require_string(payload, "comment.content.raw");
        comment.author = optional_string(payload, "comment.user.nickname");
        const json* path = find_path(payload, "comment.inline.path");
        const json* line = find_path(payload, "comment.inline.to");
        if (path != nullptr && path->is_string() && line != nullptr && line->is_number_integer()) {
            comment.anchor = {path->get<std::string>(), line->get<long>()};
        }
        event.comment = std::move(comment);
    }
    return event;
}

}  // namespace

PullRequestEvent parse_webhook(std::string_view raw_payload, Provider provider) {
    json payload;
    try {
        payload = json::parse(raw_payload);
    } catch (const json::exception& e) {
        throw WebhookError(WebhookError::Kind::bad_json,
                           std::string("payload is not valid JSON: ") + e.what());
    }

    PullRequestEvent event;
    switch (provider) {
        case Provider::github: event = parse_github(payload); break;
        case Provider::gitlab: event = parse_gitlab(payload); break;
        case Provider::bitbucket: event = parse_bitbucket(payload); break;
    }
    event.received_at = std::chrono::system_clock::now();
    check_invariants(event);
    return event;
}

bool verify_webhook_signature(std::string_view raw_payload, std::string_view signature_header,
                              std::string_view secret) {
    std::string expected = util::hmac_sha256_hex(secret, raw_payload);
    std::string_view given = signature_header;
    if (given.substr(0, 7) == "sha256=") given.remove_prefix(7);
    if (given.size() != expected.size()) return false;
    unsigned char mismatch = 0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        mismatch |= static_cast<unsigned char>(given[i]) ^
                    static_cast<unsigned char>(expected[i]);
    }
    return mismatch == 0;
}

}  // namespace deputy::vcs
