#include "deputy/vcs/post.hpp"

#include <thread>

#include "deputy/features/summary.hpp"
#include "deputy/util/hash.hpp"

namespace deputy::vcs {

std::string comment_content_hash(const blend::ReviewReport& report,
                                 const agents::ReviewComment& comment) {
    std::string canonical = report.pr.repo_id + "\x1f" + std::to_string(report.pr.pr_number) +
                            "\x1f" + comment.file_path + "\x1f" +
                            std::to_string(comment.line_number) + "\x1f" + comment.description +
                            "\x1f" + comment.corrective_code.value_or("") + "\x1f" +
                            comment.bucket;
    return util::sha256_hex(canonical).substr(0, 24);
}

namespace {

std::string render_comment_body(const agents::ReviewComment& comment) {
    std::string body = comment.description;
    if (comment.corrective_code) {
        body += "\n\nSuggested change:\n```\n" + *comment.corrective_code;
        if (!comment.corrective_code->empty() && comment.corrective_code->back() != '\n') {
            body += "\n";
        }
        body += "```";
    }
    body += "\n\n_" + std::string(agents::agent_display(comment.agent)) + " · " +
            comment.bucket + " · confidence " + std::to_string(comment.confidence_score).substr(0, 4) +
            "_";
    return body;
}

PostResult post_with_retry(VcsClient& client, const PrRef& pr, const PostPayload& payload,
                           const PostOptions& options) {
    auto backoff = options.initial_backoff;
    int attempt = 0;
    while (true) {
        ++attempt;
        try {
            return client.post_comment(pr, payload);
        } catch (const CommentLineGone&) {
            throw;  // handled by the caller's file-level fallback
        } catch (const VcsError& e) {
            if (!e.transient() || attempt >= options.max_attempts) throw;
            options.sleeper(backoff);
            backoff *= 2;
        }
    }
}

}  // namespace

PostReceipt post_review(const PullRequestEvent& event, const blend::ReviewReport& report,
                        VcsClient& client, const PostOptions& options) {
    PostOptions opts = options;
    if (!opts.sleeper) {
        opts.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
    PrRef pr{event.repo_id, event.pr_number};
    PostReceipt receipt;

    for (const auto& comment : report.comments) {
        PostPayload payload;
        payload.kind = PostPayload::Kind::inline_comment;
        payload.path = comment.file_path;
        payload.line = comment.line_number;
        payload.body = render_comment_body(comment);
        payload.content_hash = comment_content_hash(report, comment);

        try {
            PostResult result;
            bool fell_back = false;
            try {
                result = post_with_retry(client, pr, payload, opts);
            } catch (const CommentLineGone&) {
                PostPayload fallback = payload;
                fallback.kind = PostPayload::Kind::file_comment;
                fallback.line = 0;
                fallback.body = "(was " + comment.file_path + ":" +
                                std::to_string(comment.line_number) + ", line no longer in diff)\n\n" +
                                payload.body;
                result = post_with_retry(client, pr, fallback, opts);
                fell_back = true;
            }
            if (!result.created) {
                ++receipt.duplicates_skipped;
                continue;
            }
            receipt.posted.push_back({fell_back ? PostedItem::Kind::file_comment
                                                : PostedItem::Kind::inline_comment,
                                      result.provider_comment_id, payload.content_hash,
                                      fell_back});
        } catch (const std::exception& e) {
            receipt.partial_failures.push_back(comment.file_path + ":" +
                                               std::to_string(comment.line_number) + ": " +
                                               e.what());
        }
    }

    if (report.summary) {
        PostPayload payload;
        payload.kind = PostPayload::Kind::summary;
        payload.body = features::render_summary_comment(*report.summary);
        payload.content_hash = util::sha256_hex(pr.repo_id + "\x1f" +
                                                std::to_string(pr.pr_number) + "\x1f" +
                                                payload.body)
                                   .substr(0, 24);
        try {
            PostResult result = post_with_retry(client, pr, payload, opts);
            if (result.created) {
                receipt.posted.push_back({PostedItem::Kind::summary, result.provider_comment_id,
                                          payload.content_hash, false});
            } else {
                ++receipt.duplicates_skipped;
            }
        } catch (const std::exception& e) {
            receipt.partial_failures.push_back(std::string("summary: ") + e.what());
        }
    }
    return receipt;
}

}  // namespace deputy::vcs
