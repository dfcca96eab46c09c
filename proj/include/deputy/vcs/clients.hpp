#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "deputy/vcs/diff.hpp"
#include "deputy/vcs/types.hpp"

namespace deputy::vcs {

class VcsError : public std::runtime_error {
public:
    VcsError(const std::string& message, bool transient = false)
        : std::runtime_error(message), transient_(transient) {}

    bool transient() const { return transient_; }

private:
    bool transient_;
};

/// The anchor line of an inline comment no longer exists (force-push etc.).
class CommentLineGone : public VcsError {
public:
    using VcsError::VcsError;
};

class OversizedPrError : public std::runtime_error {
public:
    OversizedPrError(long loc, long limit)
        : std::runtime_error("oversized PR: " + std::to_string(loc) + " changed LOC exceeds " +
                             std::to_string(limit)),
          loc_(loc),
          limit_(limit) {}

    long loc() const { return loc_; }
    long limit() const { return limit_; }

private:
    long loc_;
    long limit_;
};

struct PostPayload {
    enum class Kind { inline_comment, file_comment, summary, reply };
    Kind kind = Kind::inline_comment;
    std::string path;
    long line = 0;
    std::string body;
    std::string content_hash;  // dedup key, scoped to the PR
    std::string reply_to;      // provider comment id, Kind::reply only
};

struct PostResult {
    bool created = false;  // false when deduplicated
    std::string provider_comment_id;
};

class VcsClient {
public:
    virtual ~VcsClient() = default;

    /// Raw unified diff between the target and source branch heads.
    virtual std::string fetch_diff_text(const PullRequestEvent& event) = 0;

    /// Posts one comment. Implementations must deduplicate on
    /// (pr, content_hash) and throw CommentLineGone when an inline anchor is
    /// not commentable.
    virtual PostResult post_comment(const PrRef& pr, const PostPayload& payload) = 0;
};

class TrackerClient {
public:
    virtual ~TrackerClient() = default;
    /// nullopt when the ticket does not exist; throws VcsError on fetch failure.
    virtual std::optional<KnowledgeDoc> fetch_ticket(const std::string& key) = 0;
};

class WikiClient {
public:
    virtual ~WikiClient() = default;
    virtual std::optional<KnowledgeDoc> fetch_page(const std::string& url) = 0;
};

/// Parses and validates a PR diff; throws OversizedPrError above max_loc.
UnifiedDiff fetch_diff(const PullRequestEvent& event, VcsClient& client, long max_loc);

// ---------------------------------------------------------------------------
// In-memory implementations backing every test and the stub deployment mode.

class InMemoryVcsClient final : public VcsClient {
public:
    std::string fetch_diff_text(const PullRequestEvent& event) override;
    PostResult post_comment(const PrRef& pr, const PostPayload& payload) override;

    void set_diff(const std::string& diff_text);

    /// Restricts which (path, line) pairs accept inline comments. Unset
    /// paths accept everything.
    void set_commentable_lines(const std::string& path, std::set<long> lines);

    /// The next `n` post_comment calls fail with a transient error.
    void fail_next_posts(int n);

    struct StoredComment {
        PrRef pr;
        PostPayload payload;
        std::string id;
    };
    std::vector<StoredComment> comments() const;

private:
    mutable std::mutex mu_;
    std::string diff_text_;
    std::map<std::string, std::set<long>> commentable_;
    std::vector<StoredComment> comments_;
    std::map<std::string, std::string> hash_to_id_;  // "<repo>#<pr>#<hash>" -> id
    int fail_posts_ = 0;
    long next_id_ = 1;
};

class InMemoryTrackerClient final : public TrackerClient {
public:
    std::optional<KnowledgeDoc> fetch_ticket(const std::string& key) override;
    void add_ticket(const std::string& key, const std::string& title, const std::string& body);
    void fail_for(const std::string& key);  // simulate a fetch error

private:
    std::mutex mu_;
    std::map<std::string, KnowledgeDoc> tickets_;
    std::set<std::string> failing_;
};

class InMemoryWikiClient final : public WikiClient {
public:
    std::optional<KnowledgeDoc> fetch_page(const std::string& url) override;
    void add_page(const std::string& url, const std::string& title, const std::string& body);

private:
    std::mutex mu_;
    std::map<std::string, KnowledgeDoc> pages_;
};

/// VcsClient over a local working tree; diffs are produced by the local
/// version-control tooling. Posting is collected in memory, never sent
/// anywhere.
class LocalGitClient final : public VcsClient {
public:
    LocalGitClient(std::string repo_path, std::string base_ref, std::string head_ref);

    std::string fetch_diff_text(const PullRequestEvent& event) override;
    PostResult post_comment(const PrRef& pr, const PostPayload& payload) override;

private:
    std::string repo_path_;
    std::string base_ref_;
    std::string head_ref_;
    std::mutex mu_;
    long next_id_ = 1;
};

}  // namespace deputy::vcs
