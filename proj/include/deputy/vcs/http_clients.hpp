#pragma once

#include <string>

#include "deputy/vcs/clients.hpp"

namespace deputy::vcs {

/// Thin REST adapter for the three hosted providers: fetches PR diffs and
/// posts comments. Everything interesting lives behind the VcsClient
/// interface; tests use the in-memory stub instead.
class HttpVcsClient final : public VcsClient {
public:
    HttpVcsClient(Provider provider, std::string api_base, std::string token);

    std::string fetch_diff_text(const PullRequestEvent& event) override;
    PostResult post_comment(const PrRef& pr, const PostPayload& payload) override;

private:
    Provider provider_;
    std::string api_base_;
    std::string token_;
};

/// Issue-tracker REST adapter (Jira-shaped: /rest/api/2/issue/KEY).
class HttpTrackerClient final : public TrackerClient {
public:
    HttpTrackerClient(std::string base_url, std::string token);
    std::optional<KnowledgeDoc> fetch_ticket(const std::string& key) override;

private:
    std::string base_url_;
    std::string token_;
};

/// Wiki page fetcher; markup is stripped to plain text.
class HttpWikiClient final : public WikiClient {
public:
    explicit HttpWikiClient(std::string token);
    std::optional<KnowledgeDoc> fetch_page(const std::string& url) override;

private:
    std::string token_;
};

/// Crude tag stripper for wiki HTML -> plain text bodies.
std::string strip_markup(const std::string& html);

}  // namespace deputy::vcs
