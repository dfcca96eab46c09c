#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>

namespace deputy::vcs {

enum class Provider { github, gitlab, bitbucket };

std::string_view provider_name(Provider p);
std::optional<Provider> provider_from_name(std::string_view name);

enum class EventKind { opened, updated, comment_added };

std::string_view event_kind_name(EventKind k);

/// Inline or top-level PR comment carried by a comment-added event.
struct CommentRef {
    std::string comment_id;
    std::string text;
    std::string author;
    std::optional<std::pair<std::string, long>> anchor;  // (file path, new-file line)
};

struct PullRequestEvent {
    Provider provider = Provider::github;
    std::string repo_url;
    std::string repo_id;
    long pr_number = 0;
    std::string source_branch;
    std::string target_branch;
    std::string title;
    std::string description;
    std::string author;
    EventKind kind = EventKind::opened;
    std::chrono::system_clock::time_point received_at{};
    std::optional<CommentRef> comment;  // comment-added events only
};

struct PrRef {
    std::string repo_id;
    long pr_number = 0;

    friend bool operator==(const PrRef&, const PrRef&) = default;
};

enum class DocSource { story, approach };

/// Ticket or wiki text referenced from the PR description, markup stripped.
struct KnowledgeDoc {
    DocSource source = DocSource::story;
    std::string external_key;
    std::string title;
    std::string body;
};

}  // namespace deputy::vcs
