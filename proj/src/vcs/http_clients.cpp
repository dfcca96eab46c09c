#include "deputy/vcs/http_clients.hpp"

#include <json.hpp>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace deputy::vcs {

using nlohmann::json;

namespace {

httplib::Result check(httplib::Result result, const std::string& what) {
    if (!result) {
        throw VcsError(what + ": unreachable (" + httplib::to_string(result.error()) + ")",
                       /*transient=*/true);
    }
    if (result->status == 429 || result->status >= 500) {
        throw VcsError(what + ": HTTP " + std::to_string(result->status), true);
    }
    if (result->status >= 400) {
        throw VcsError(what + ": HTTP " + std::to_string(result->status) + " " + result->body);
    }
    return result;
}

}  // namespace

HttpVcsClient::HttpVcsClient(Provider provider, std::string api_base, std::string token)
    : provider_(provider), api_base_(std::move(api_base)), token_(std::move(token)) {}

std::string HttpVcsClient::fetch_diff_text(const PullRequestEvent& event) {
    httplib::Client client(api_base_);
    client.set_follow_location(true);
    std::string pr = std::to_string(event.pr_number);
    switch (provider_) {
        case Provider::github: {
            httplib::Headers headers = {{"Authorization", "Bearer " + token_},
                                        {"Accept", "application/vnd.github.v3.diff"}};
            auto result = check(client.Get("/repos/" + event.repo_id + "/pulls/" + pr, headers),
                                "github diff");
            return result->body;
        }
        case Provider::gitlab: {
            httplib::Headers headers = {{"PRIVATE-TOKEN", token_}};
            // raw diffs endpoint keeps us out of per-file JSON assembly
            auto result = check(
                client.Get("/api/v4/projects/" + httplib::detail::encode_url(event.repo_id) +
                               "/merge_requests/" + pr + "/raw_diffs",
                           headers),
                "gitlab diff");
            return result->body;
        }
        case Provider::bitbucket: {
            httplib::Headers headers = {{"Authorization", "Bearer " + token_}};
            auto result = check(
                client.Get("/2.0/repositories/" + event.repo_id + "/pullrequests/" + pr + "/diff",
                           headers),
                "bitbucket diff");
            return result->body;
        }
    }
    throw VcsError("unsupported provider");
}

PostResult HttpVcsClient::post_comment(const PrRef& pr, const PostPayload& payload) {
    httplib::Client client(api_base_);
    std::string pr_number = std::to_string(pr.pr_number);
    // the dedup marker travels inside the body so reposts can be detected
    // provider-side by readers; full dedup state lives with the engine run
    std::string body_text = payload.body;
    if (!payload.content_hash.empty()) {
        body_text += "\n\n<!-- deputy:" + payload.content_hash + " -->";
    }

    switch (provider_) {
        case Provider::github: {
            httplib::Headers headers = {{"Authorization", "Bearer " + token_},
                                        {"Accept", "application/vnd.github+json"}};
            json request;
            std::string path;
            if (payload.kind == PostPayload::Kind::inline_comment) {
                path = "/repos/" + pr.repo_id + "/pulls/" + pr_number + "/comments";
                request = {{"body", body_text},
                           {"path", payload.path},
                           {"line", payload.line},
                           {"side", "RIGHT"}};
            } else {
                path = "/repos/" + pr.repo_id + "/issues/" + pr_number + "/comments";
                request = {{"body", body_text}};
            }
            auto result = client.Post(path, headers, request.dump(), "application/json");
            if (result && result->status == 422 &&
                payload.kind == PostPayload::Kind::inline_comment) {
                throw CommentLineGone("github rejected the line anchor: " + result->body);
            }
            auto ok = check(std::move(result), "github comment");
            return {true, std::to_string(json::parse(ok->body).value("id", 0L))};
        }
        case Provider::gitlab: {
            httplib::Headers headers = {{"PRIVATE-TOKEN", token_}};
            std::string path = "/api/v4/projects/" + httplib::detail::encode_url(pr.repo_id) +
                               "/merge_requests/" + pr_number + "/notes";
            json request = {{"body", body_text}};
            auto ok = check(client.Post(path, headers, request.dump(), "application/json"),
                            "gitlab note");
            return {true, std::to_string(json::parse(ok->body).value("id", 0L))};
        }
        case Provider::bitbucket: {
            httplib::Headers headers = {{"Authorization", "Bearer " + token_}};
            std::string path =
                "/2.0/repositories/" + pr.repo_id + "/pullrequests/" + pr_number + "/comments";
            json request = {{"content", {{"raw", body_text}}}};
            if (payload.kind == PostPayload::Kind::inline_comment) {
                request["inline"] = {{"path", payload.path}, {"to", payload.line}};
            }
            auto result = client.Post(path, headers, request.dump(), "application/json");
            if (result && result->status == 400 &&
                payload.kind == PostPayload::Kind::inline_comment) {
                throw CommentLineGone("bitbucket rejected the line anchor: " + result->body);
            }
            auto ok = check(std::move(result), "bitbucket comment");
            return {true, std::to_string(json::parse(ok->body).value("id", 0L))};
        }
    }
    throw VcsError("unsupported provider");
}

HttpTrackerClient::HttpTrackerClient(std::string base_url, std::string token)
    : base_url_(std::move(base_url)), token_(std::move(token)) {}

std::optional<KnowledgeDoc> HttpTrackerClient::fetch_ticket(const std::string& key) {
    if (base_url_.empty()) return std::nullopt;
    httplib::Client client(base_url_);
    httplib::Headers headers = {{"Authorization", "Bearer " + token_}};
    auto result = client.Get("/rest/api/2/issue/" + key + "?fields=summary,description", headers);
    if (!result) throw VcsError("tracker unreachable", true);
    if (result->status == 404) return std::nullopt;
    if (result->status != 200) {
        throw VcsError("tracker HTTP " + std::to_string(result->status));
    }
    json root = json::parse(result->body);
    KnowledgeDoc doc;
    doc.source = DocSource::story;
    doc.external_key = key;
    if (root.contains("fields")) {
        doc.title = root["fields"].value("summary", "");
        doc.body = strip_markup(root["fields"].value("description", ""));
    }
    return doc;
}

HttpWikiClient::HttpWikiClient(std::string token) : token_(std::move(token)) {}

std::optional<KnowledgeDoc> HttpWikiClient::fetch_page(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) return std::nullopt;
    auto path_start = url.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(base);
    client.set_follow_location(true);
    httplib::Headers headers;
    if (!token_.empty()) headers.insert({"Authorization", "Bearer " + token_});
    auto result = client.Get(path, headers);
    if (!result) throw VcsError("wiki unreachable", true);
    if (result->status == 404) return std::nullopt;
    if (result->status != 200) throw VcsError("wiki HTTP " + std::to_string(result->status));

    KnowledgeDoc doc;
    doc.source = DocSource::approach;
    doc.external_key = url;
    doc.body = strip_markup(result->body);
    return doc;
}

std::string strip_markup(const std::string& html) {
    std::string out;
    out.reserve(html.size());
    bool in_tag = false;
    for (char c : html) {
        if (c == '<') {
            in_tag = true;
        } else if (c == '>') {
            in_tag = false;
            out.push_back(' ');
        } else if (!in_tag) {
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace deputy::vcs
