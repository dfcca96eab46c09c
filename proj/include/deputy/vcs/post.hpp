#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "deputy/blend/blending.hpp"
#include "deputy/vcs/clients.hpp"
#include "deputy/vcs/types.hpp"

namespace deputy::vcs {

struct PostedItem {
    enum class Kind { inline_comment, file_comment, summary };
    Kind kind = Kind::inline_comment;
    std::string provider_comment_id;
    std::string content_hash;
    bool fell_back_to_file = false;  // inline anchor gone, posted file-level
};

struct PostReceipt {
    std::vector<PostedItem> posted;
    long duplicates_skipped = 0;
    std::vector<std::string> partial_failures;

    bool fully_posted() const { return partial_failures.empty(); }
};

struct PostOptions {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{50};
    std::function<void(std::chrono::milliseconds)> sleeper;  // injectable for tests
};

/// Content hash scoping the idempotency key of one comment within its PR.
std::string comment_content_hash(const blend::ReviewReport& report,
                                 const agents::ReviewComment& comment);

/// Delivers a finalized report: every comment as an inline comment at its
/// (file, line), the summary as a top-level comment. Idempotent per
/// (pr, content-hash); a comment whose line no longer exists falls back to a
/// file-level comment, flagged in the receipt. Provider rejections are
/// retried with bounded backoff, then recorded as partial failures.
PostReceipt post_review(const PullRequestEvent& event, const blend::ReviewReport& report,
                        VcsClient& client, const PostOptions& options = {});

}  // namespace deputy::vcs
