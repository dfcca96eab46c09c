#include "deputy/vcs/clients.hpp"

#include "deputy/util/proc.hpp"

namespace deputy::vcs {

UnifiedDiff fetch_diff(const PullRequestEvent& event, VcsClient& client, long max_loc) {
    std::string text = client.fetch_diff_text(event);
    UnifiedDiff diff = parse_unified_diff(text);
    long loc = changed_loc(diff);
    if (max_loc > 0 && loc > max_loc) throw OversizedPrError(loc, max_loc);
    return diff;
}

// --- InMemoryVcsClient ------------------------------------------------------

std::string InMemoryVcsClient::fetch_diff_text(const PullRequestEvent&) {
    std::lock_guard lock(mu_);
    return diff_text_;
}

PostResult InMemoryVcsClient::post_comment(const PrRef& pr, const PostPayload& payload) {
    std::lock_guard lock(mu_);
    if (fail_posts_ > 0) {
        --fail_posts_;
        throw VcsError("provider rejected comment (injected failure)", /*transient=*/true);
    }
    if (payload.kind == PostPayload::Kind::inline_comment) {
        auto it = commentable_.find(payload.path);
        if (it != commentable_.end() && it->second.count(payload.line) == 0) {
            throw CommentLineGone("line " + std::to_string(payload.line) + " of " + payload.path +
                                  " is not commentable");
        }
    }
    std::string dedup_key = pr.repo_id + "#" + std::to_string(pr.pr_number) + "#" +
                            payload.content_hash;
    if (!payload.content_hash.empty()) {
        auto it = hash_to_id_.find(dedup_key);
        if (it != hash_to_id_.end()) return {false, it->second};
    }
    std::string id = "c" + std::to_string(next_id_++);
    comments_.push_back({pr, payload, id});
    if (!payload.content_hash.empty()) hash_to_id_[dedup_key] = id;
    return {true, id};
}

void InMemoryVcsClient::set_diff(const std::string& diff_text) {
    std::lock_guard lock(mu_);
    diff_text_ = diff_text;
}

void InMemoryVcsClient::set_commentable_lines(const std::string& path, std::set<long> lines) {
    std::lock_guard lock(mu_);
    commentable_[path] = std::move(lines);
}

void InMemoryVcsClient::fail_next_posts(int n) {
    std::lock_guard lock(mu_);
    fail_posts_ = n;
}

std::vector<InMemoryVcsClient::StoredComment> InMemoryVcsClient::comments() const {
    std::lock_guard lock(mu_);
    return comments_;
}

// --- InMemoryTrackerClient / InMemoryWikiClient -----------------------------

std::optional<KnowledgeDoc> InMemoryTrackerClient::fetch_ticket(const std::string& key) {
    std::lock_guard lock(mu_);
    if (failing_.count(key)) throw VcsError("tracker fetch failed for " + key, true);
    auto it = tickets_.find(key);
    if (it == tickets_.end()) return std::nullopt;
    return it->second;
}

void InMemoryTrackerClient::add_ticket(const std::string& key, const std::string& title,
                                       const std::string& body) {
    std::lock_guard lock(mu_);
    tickets_[key] = KnowledgeDoc{DocSource::story, key, title, body};
}

void InMemoryTrackerClient::fail_for(const std::string& key) {
    std::lock_guard lock(mu_);
    failing_.insert(key);
}

std::optional<KnowledgeDoc> InMemoryWikiClient::fetch_page(const std::string& url) {
    std::lock_guard lock(mu_);
    auto it = pages_.find(url);
    if (it == pages_.end()) return std::nullopt;
    return it->second;
}

void InMemoryWikiClient::add_page(const std::string& url, const std::string& title,
                                  const std::string& body) {
    std::lock_guard lock(mu_);
    pages_[url] = KnowledgeDoc{DocSource::approach, url, title, body};
}

// --- LocalGitClient ----------------------------------------------------------

LocalGitClient::LocalGitClient(std::string repo_path, std::string base_ref, std::string head_ref)
    : repo_path_(std::move(repo_path)),
      base_ref_(std::move(base_ref)),
      head_ref_(std::move(head_ref)) {}

std::string LocalGitClient::fetch_diff_text(const PullRequestEvent&) {
    auto result = util::run_command({"git", "-C", repo_path_, "-c", "core.quotepath=false",
                                     "diff", "--no-color", "--no-ext-diff",
                                     base_ref_ + "..." + head_ref_});
    if (!result.ok()) {
        throw VcsError("git diff failed: " + result.err);
    }
    return result.out;
}

PostResult LocalGitClient::post_comment(const PrRef&, const PostPayload&) {
    std::lock_guard lock(mu_);
    return {true, "local-" + std::to_string(next_id_++)};
}

}  // namespace deputy::vcs
