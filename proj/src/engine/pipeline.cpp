#include "deputy/engine/pipeline.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <future>
#include <iomanip>
#include <sstream>

#include "deputy/chunk/chunker.hpp"
#include "deputy/features/chat.hpp"
#include "deputy/llm/http_provider.hpp"
#include "deputy/llm/mock.hpp"
#include "deputy/retrieval/merge.hpp"
#include "deputy/util/hash.hpp"
#include "deputy/util/proc.hpp"
#include "deputy/vcs/http_clients.hpp"
#include "deputy/vcs/knowledge.hpp"

namespace deputy::engine {

std::string_view run_outcome_name(RunOutcome outcome) {
    switch (outcome) {
        case RunOutcome::posted: return "posted";
        case RunOutcome::degraded: return "degraded";
        case RunOutcome::skipped_oversize: return "skipped-oversize";
        case RunOutcome::failed: return "failed";
        case RunOutcome::nothing_to_review: return "nothing-to-review";
    }
    return "?";
}

namespace {

class StageTimer {
public:
    explicit StageTimer(RunReport& report) : report_(report) {}

    template <typename Fn>
    auto run(const std::string& stage, Fn&& fn) {
        auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            record(stage, start);
        } else {
            auto result = fn();
            record(stage, start);
            return result;
        }
    }

private:
    void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
        auto elapsed = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        report_.stage_ms.emplace_back(stage, elapsed);
    }

    RunReport& report_;
};

std::string notice_hash(const vcs::PrRef& pr, const std::string& body) {
    return util::sha256_hex(pr.repo_id + "\x1f" + std::to_string(pr.pr_number) + "\x1f" + body)
        .substr(0, 24);
}

}  // namespace

Engine::Engine(EngineConfig config, EngineDeps deps)
    : config_(std::move(config)), deps_(std::move(deps)) {
    llm::GatewayOptions options;
    options.max_attempts = config_.gateway.max_attempts;
    options.initial_backoff = std::chrono::milliseconds(config_.gateway.initial_backoff_ms);
    options.concurrency = config_.gateway.concurrency;
    options.max_context_tokens = config_.gateway.max_context_tokens;
    options.chars_per_token = config_.retrieval.chars_per_token;
    gateway_ = std::make_shared<llm::Gateway>(deps_.provider, options);
    if (!deps_.cloner) deps_.cloner = chunk::clone_ephemeral;
}

context::OptimizedContext Engine::build_context_for(const vcs::PullRequestEvent& event,
                                                    vcs::VcsClient& client,
                                                    std::vector<std::string>& warnings,
                                                    bool& semantic_degraded) {
    auto diff = vcs::fetch_diff(event, client, config_.limits.max_changed_loc);

    auto docs = vcs::resolve_knowledge_docs(event.description, *deps_.tracker, *deps_.wiki);
    for (auto& w : docs.warnings) warnings.push_back("knowledge: " + w);

    std::vector<chunk::CodeChunk> chunks;
    try {
        std::string clone_from = event.repo_url.empty() ? event.repo_id : event.repo_url;
        auto workspace = deps_.cloner(clone_from, event.source_branch);
        chunk::ChunkerOptions chunker_options;
        chunker_options.max_chunk_lines = config_.chunker.max_chunk_lines;
        chunker_options.languages = config_.chunker.languages;
        auto result = chunk::semantic_chunk(workspace, event.repo_id, chunker_options);
        for (auto& w : result.warnings) warnings.push_back("chunker: " + w);
        chunks = std::move(result.chunks);
        chunk::store_chunks(chunks, std::chrono::seconds(config_.chunker.ttl_seconds),
                            *deps_.store);
    } catch (const std::exception& e) {
        warnings.push_back(std::string("context code unavailable: ") + e.what());
        semantic_degraded = true;
    }

    auto query = retrieval::build_retrieval_query(event.repo_id, diff);
    auto lexical_future = std::async(std::launch::async, [&] {
        return retrieval::lexical_search(query, *deps_.store, config_.retrieval.top_k);
    });
    retrieval::ScoredChunkSet semantic;
    semantic.source = retrieval::SearchSource::semantic;
    try {
        semantic = retrieval::semantic_search(query, *deps_.store, *deps_.embedder,
                                              config_.retrieval.top_k,
                                              config_.retrieval.min_similarity);
    } catch (const retrieval::EmbedderError& e) {
        warnings.push_back(std::string("semantic search degraded: ") + e.what());
        semantic_degraded = true;
    }
    auto lexical = lexical_future.get();
    auto relevant =
        retrieval::merge_relevant(lexical, semantic, config_.retrieval.budget_tokens,
                                  *deps_.store, config_.retrieval.chars_per_token);

    return context::build_optimized_context(event, diff, docs.docs, relevant);
}

RunReport Engine::run_pipeline(const vcs::PullRequestEvent& event, vcs::VcsClient& client,
                               const PipelineOptions& options) {
    RunReport run;
    run.pr = {event.repo_id, event.pr_number};
    StageTimer timer(run);
    bool degraded = false;

    vcs::UnifiedDiff diff;
    try {
        diff = timer.run("fetch-diff", [&] {
            return vcs::fetch_diff(event, client, config_.limits.max_changed_loc);
        });
    } catch (const vcs::OversizedPrError& e) {
        run.outcome = RunOutcome::skipped_oversize;
        run.warnings.push_back(e.what());
        if (options.post) {
            vcs::PostPayload notice;
            notice.kind = vcs::PostPayload::Kind::summary;
            notice.body = std::string("Automated review skipped: ") + e.what() +
                          ". Consider splitting the change.";
            notice.content_hash = notice_hash(run.pr, notice.body);
            try {
                client.post_comment(run.pr, notice);
            } catch (const std::exception& post_error) {
                run.warnings.push_back(std::string("notice post failed: ") + post_error.what());
            }
        }
        return run;
    } catch (const std::exception& e) {
        run.outcome = RunOutcome::failed;
        run.error = std::string("fetch-diff: ") + e.what();
        return run;
    }
    if (diff.empty()) {
        run.outcome = RunOutcome::nothing_to_review;
        return run;
    }

    auto docs = timer.run("resolve-docs", [&] {
        return vcs::resolve_knowledge_docs(event.description, *deps_.tracker, *deps_.wiki);
    });
    for (auto& w : docs.warnings) run.warnings.push_back("knowledge: " + w);

    std::vector<chunk::CodeChunk> chunks;
    timer.run("chunk", [&] {
        try {
            std::string clone_from = event.repo_url.empty() ? event.repo_id : event.repo_url;
            auto workspace = deps_.cloner(clone_from, event.source_branch);
            chunk::ChunkerOptions chunker_options;
            chunker_options.max_chunk_lines = config_.chunker.max_chunk_lines;
            chunker_options.languages = config_.chunker.languages;
            auto result = chunk::semantic_chunk(workspace, event.repo_id, chunker_options);
            for (auto& w : result.warnings) run.warnings.push_back("chunker: " + w);
            chunks = std::move(result.chunks);
            chunk::store_chunks(chunks, std::chrono::seconds(config_.chunker.ttl_seconds),
                                *deps_.store);
        } catch (const std::exception& e) {
            run.warnings.push_back(std::string("context code unavailable: ") + e.what());
            degraded = true;
        }
    });

    auto relevant = timer.run("retrieve", [&] {
        auto query = retrieval::build_retrieval_query(event.repo_id, diff);
        auto lexical_future = std::async(std::launch::async, [&] {
            return retrieval::lexical_search(query, *deps_.store, config_.retrieval.top_k);
        });
        retrieval::ScoredChunkSet semantic;
        semantic.source = retrieval::SearchSource::semantic;
        try {
            semantic = retrieval::semantic_search(query, *deps_.store, *deps_.embedder,
                                                  config_.retrieval.top_k,
                                                  config_.retrieval.min_similarity);
        } catch (const retrieval::EmbedderError& e) {
            run.warnings.push_back(std::string("semantic search degraded: ") + e.what());
            degraded = true;
        }
        auto lexical = lexical_future.get();
        return retrieval::merge_relevant(lexical, semantic, config_.retrieval.budget_tokens,
                                         *deps_.store, config_.retrieval.chars_per_token);
    });

    auto ctx = timer.run("context", [&] {
        return context::build_optimized_context(event, diff, docs.docs, relevant);
    });

    auto registry = config_.registry();
    agents::AgentRunSet run_set;
    try {
        run_set = timer.run("agents", [&] {
            agents::RunAgentOptions agent_options;
            agent_options.model_id = config_.gateway.review_model;
            agent_options.prompt_limits.max_tokens = config_.limits.per_agent_budget_tokens;
            agent_options.prompt_limits.chars_per_token = config_.retrieval.chars_per_token;
            return agents::run_all_agents(ctx, registry.enabled(), *gateway_, agent_options);
        });
    } catch (const agents::NoAgentResults& e) {
        run.outcome = RunOutcome::failed;
        run.error = e.what();
        run.usage = gateway_->ledger().rows();
        return run;
    }
    for (const auto& failure : run_set.failures) {
        run.warnings.push_back("agent " + std::string(agents::agent_name(failure.agent)) +
                               " failed: " + failure.error);
        degraded = true;
    }
    for (const auto& result : run_set.results) {
        for (const auto& w : result.warnings) {
            run.warnings.push_back(std::string(agents::agent_name(result.agent)) + ": " + w);
        }
    }

    auto report = timer.run("blend", [&] {
        blend::BlendOptions blend_options;
        blend_options.default_threshold = config_.blending.default_threshold;
        blend_options.summarize_gateway =
            config_.blending.model_summaries ? gateway_.get() : nullptr;
        blend_options.model_id = config_.gateway.review_model;
        auto thresholds = registry.thresholds();
        auto dims = blend::default_dimensions(thresholds, blend_options);
        return blend::blend(run_set.results, std::move(dims), thresholds, blend_options);
    });
    report.pr = run.pr;
    for (auto& w : report.warnings) run.warnings.push_back("blending: " + w);
    report.warnings.clear();

    timer.run("summarize", [&] {
        features::SummaryOptions summary_options;
        summary_options.model_id = config_.gateway.summary_model;
        summary_options.estimates = config_.estimates;
        report.summary = features::summarize_pr(ctx, *gateway_, summary_options);
        if (report.summary->degraded) {
            run.warnings.push_back("summary degraded to diff statistics");
            degraded = true;
        }
    });

    if (options.post) {
        auto receipt = timer.run("post", [&] { return vcs::post_review(event, report, client); });
        if (!receipt.fully_posted()) {
            for (const auto& failure : receipt.partial_failures) {
                run.warnings.push_back("post: " + failure);
            }
            degraded = true;
        }
        run.receipt = std::move(receipt);
    }

    run.report = std::move(report);
    run.usage = gateway_->ledger().rows();
    run.outcome = degraded ? RunOutcome::degraded : RunOutcome::posted;
    return run;
}

RunReport Engine::review_pull_request(const vcs::PullRequestEvent& event) {
    return run_pipeline(event, *deps_.vcs, {.post = true});
}

RunReport Engine::review_local(const std::string& repo_path, const std::string& base_ref,
                               const std::string& head_ref) {
    auto probe = util::run_command({"git", "-C", repo_path, "rev-parse", "--is-inside-work-tree"});
    if (!probe.ok()) {
        RunReport run;
        run.pr = {repo_path, 0};
        run.outcome = RunOutcome::failed;
        run.error = "not a version-controlled working tree: " + repo_path;
        return run;
    }

    vcs::PullRequestEvent event;
    event.provider = vcs::Provider::github;  // irrelevant locally
    event.repo_url = repo_path;
    event.repo_id = repo_path;
    event.pr_number = 0;
    event.source_branch = head_ref;
    event.target_branch = base_ref;
    event.title = "Local review " + base_ref + ".." + head_ref;
    event.kind = vcs::EventKind::opened;

    vcs::LocalGitClient client(repo_path, base_ref, head_ref);
    return run_pipeline(event, client, {.post = false});
}

std::optional<std::string> Engine::handle_chat(const vcs::PullRequestEvent& event) {
    if (!event.comment) return std::nullopt;

    std::optional<features::ChatCommand> command;
    std::string reply;
    try {
        command = features::parse_chat_command(event.comment->text);
        if (!command) return std::nullopt;
    } catch (const features::ChatError& e) {
        reply = std::string("Cannot answer: ") + e.what() + ".";
    }

    vcs::PrRef pr{event.repo_id, event.pr_number};
    if (reply.empty()) {
        command->anchor = event.comment->anchor;
        command->author = event.comment->author;
        try {
            std::vector<std::string> warnings;
            bool semantic_degraded = false;
            auto ctx = build_context_for(event, *deps_.vcs, warnings, semantic_degraded);

            // make sure the anchored chunk is available to the prompt
            if (command->anchor) {
                bool covered = false;
                for (const auto& chunk : ctx.relevant_chunks) {
                    if (chunk.file_path == command->anchor->first &&
                        chunk.span.start_line <= command->anchor->second &&
                        command->anchor->second <= chunk.span.end_line) {
                        covered = true;
                        break;
                    }
                }
                if (!covered) {
                    for (const auto& entry : deps_.store->scan(event.repo_id)) {
                        if (entry.chunk.file_path == command->anchor->first &&
                            entry.chunk.span.start_line <= command->anchor->second &&
                            command->anchor->second <= entry.chunk.span.end_line) {
                            ctx.relevant_chunks.insert(ctx.relevant_chunks.begin(), entry.chunk);
                            break;
                        }
                    }
                }
            }

            features::ChatOptions chat_options;
            chat_options.model_id = config_.gateway.review_model;
            reply = features::answer_chat(*command, ctx, *gateway_, chat_options);
        } catch (const std::exception& e) {
            std::string error_id = util::sha256_hex(e.what()).substr(0, 8);
            reply = "Sorry, I could not answer that right now (error " + error_id + ").";
        }
    }

    vcs::PostPayload payload;
    payload.kind = vcs::PostPayload::Kind::reply;
    payload.reply_to = event.comment->comment_id;
    payload.body = reply;
    payload.content_hash = notice_hash(pr, event.comment->comment_id + "\x1f" + reply);
    try {
        deps_.vcs->post_comment(pr, payload);
    } catch (const std::exception&) {
        // the reply text is still returned for logs
    }
    return reply;
}

Engine build_engine(const EngineConfig& config) {
    EngineDeps deps;

    auto env_or_empty = [](const std::string& name) -> std::string {
        if (name.empty()) return {};
        const char* value = std::getenv(name.c_str());
        return value ? value : "";
    };

    if (config.gateway.provider == "mock") {
        llm::MockScript script;
        if (!config.gateway.mock_script.empty()) {
            script = llm::ScriptedMockProvider::load_script(config.gateway.mock_script);
        }
        deps.provider = std::make_shared<llm::ScriptedMockProvider>(std::move(script));
    } else {
        llm::HttpDialect dialect = config.gateway.provider == "openai"
                                       ? llm::HttpDialect::openai
                                       : llm::HttpDialect::anthropic;
        std::string base = config.gateway.api_base;
        if (base.empty()) {
            base = dialect == llm::HttpDialect::openai ? "https://api.openai.com"
                                                       : "https://api.anthropic.com";
        }
        deps.provider = std::make_shared<llm::HttpChatProvider>(
            dialect, base, env_or_empty(config.gateway.api_key_env));
    }

    deps.store = std::make_shared<chunk::InMemoryChunkStore>();
    deps.embedder = std::make_shared<retrieval::HashingEmbedder>();
    deps.cloner = chunk::clone_ephemeral;

    if (config.vcs.provider == "stub") {
        deps.vcs = std::make_shared<vcs::InMemoryVcsClient>();
        deps.tracker = std::make_shared<vcs::InMemoryTrackerClient>();
        deps.wiki = std::make_shared<vcs::InMemoryWikiClient>();
    } else {
        auto provider = vcs::provider_from_name(config.vcs.provider);
        std::string base = config.vcs.api_base;
        if (base.empty()) {
            switch (*provider) {
                case vcs::Provider::github: base = "https://api.github.com"; break;
                case vcs::Provider::gitlab: base = "https://gitlab.com"; break;
                case vcs::Provider::bitbucket: base = "https://api.bitbucket.org"; break;
            }
        }
        deps.vcs = std::make_shared<vcs::HttpVcsClient>(*provider, base,
                                                        env_or_empty(config.vcs.token_env));
        deps.tracker = std::make_shared<vcs::HttpTrackerClient>(
            config.vcs.tracker_base, env_or_empty(config.vcs.tracker_token_env));
        deps.wiki =
            std::make_shared<vcs::HttpWikiClient>(env_or_empty(config.vcs.wiki_token_env));
    }

    return Engine(config, std::move(deps));
}

namespace {

std::string fixed2(double value) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << value;
    return out.str();
}

}  // namespace

std::string render_run_text(const RunReport& run) {
    std::ostringstream out;
    out << "outcome: " << run_outcome_name(run.outcome) << "\n";
    out << "pr: " << run.pr.repo_id << "#" << run.pr.pr_number << "\n";
    if (!run.error.empty()) out << "error: " << run.error << "\n";

    if (run.report) {
        const auto& report = *run.report;
        if (report.summary) {
            out << "\n" << features::render_summary_comment(*report.summary);
        }
        out << "\ncomments (" << report.comments.size() << "):\n";
        for (std::size_t i = 0; i < report.comments.size(); ++i) {
            const auto& comment = report.comments[i];
            out << "[" << (i + 1) << "] " << comment.file_path << ":" << comment.line_number
                << " (" << agents::agent_name(comment.agent) << " | " << comment.bucket
                << " | confidence " << fixed2(comment.confidence_score) << ")\n";
            std::istringstream description(comment.description);
            std::string description_line;
            while (std::getline(description, description_line)) {
                out << "    " << description_line << "\n";
            }
            if (comment.corrective_code) {
                out << "    suggested change:\n";
                std::istringstream code(*comment.corrective_code);
                std::string line;
                while (std::getline(code, line)) out << "      " << line << "\n";
            }
        }
        if (!report.dropped_by_dimension.empty()) {
            out << "dropped:";
            for (const auto& [dimension, count] : report.dropped_by_dimension) {
                out << " " << dimension << "=" << count;
            }
            out << "\n";
        }
    }
    if (run.receipt) {
        out << "posted: " << run.receipt->posted.size() << " comment(s), "
            << run.receipt->duplicates_skipped << " duplicate(s) skipped\n";
    }
    if (!run.warnings.empty()) {
        out << "warnings (" << run.warnings.size() << "):\n";
        for (const auto& warning : run.warnings) out << "- " << warning << "\n";
    }
    return out.str();
}

std::string render_run_json(const RunReport& run) {
    nlohmann::json root;
    root["outcome"] = std::string(run_outcome_name(run.outcome));
    root["pr"] = {{"repo_id", run.pr.repo_id}, {"pr_number", run.pr.pr_number}};
    if (!run.error.empty()) root["error"] = run.error;

    nlohmann::json stages = nlohmann::json::array();
    for (const auto& [stage, ms] : run.stage_ms) stages.push_back(stage);
    root["stages"] = stages;  // order only; durations are log material

    if (run.report) {
        const auto& report = *run.report;
        nlohmann::json comments = nlohmann::json::array();
        for (const auto& comment : report.comments) {
            nlohmann::json entry = {
                {"description", comment.description},
                {"file_path", comment.file_path},
                {"line_number", comment.line_number},
                {"confidence_score", comment.confidence_score},
                {"bucket", comment.bucket},
                {"agent", std::string(agents::agent_name(comment.agent))},
            };
            if (comment.corrective_code) entry["corrective_code"] = *comment.corrective_code;
            comments.push_back(std::move(entry));
        }
        root["report"]["comments"] = std::move(comments);
        if (report.summary) {
            root["report"]["summary"] = {
                {"text", report.summary->summary_text},
                {"changed_loc", report.summary->changed_loc},
                {"size_class", std::string(features::size_class_name(report.summary->size_class))},
                {"estimated_review_minutes", report.summary->estimated_review_minutes},
                {"degraded", report.summary->degraded},
            };
        }
        root["report"]["dropped_by_dimension"] = report.dropped_by_dimension;
    }
    if (run.receipt) {
        root["receipt"] = {{"posted", run.receipt->posted.size()},
                           {"duplicates_skipped", run.receipt->duplicates_skipped},
                           {"partial_failures", run.receipt->partial_failures.size()}};
    }
    root["warnings"] = run.warnings;

    nlohmann::json usage = nlohmann::json::array();
    for (const auto& entry : run.usage) {
        usage.push_back({{"agent", std::string(agents::agent_name(entry.agent))},
                         {"pass", std::string(agents::pass_name(entry.pass))},
                         {"input_tokens", entry.input_tokens},
                         {"output_tokens", entry.output_tokens},
                         {"calls", entry.calls}});
    }
    root["usage"] = std::move(usage);
    return root.dump(2);
}

}  // namespace deputy::engine
