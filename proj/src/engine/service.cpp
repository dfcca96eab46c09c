#include "deputy/engine/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include "deputy/vcs/webhook.hpp"

namespace deputy::engine {

JobQueue::JobQueue(int workers, int capacity) : capacity_(capacity) {
    workers_.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) {
        workers_.emplace_back([this] { worker_loop(); });
    }
}

JobQueue::~JobQueue() {
    shutdown();
}

bool JobQueue::push(std::function<void()> job) {
    {
        std::lock_guard lock(mu_);
        if (stopping_ || static_cast<int>(jobs_.size()) >= capacity_) return false;
        jobs_.push_back(std::move(job));
    }
    cv_.notify_one();
    return true;
}

void JobQueue::shutdown() {
    {
        std::lock_guard lock(mu_);
        if (stopping_) return;
        stopping_ = true;
    }
    cv_.notify_all();
    for (auto& worker : workers_) {
        if (worker.joinable()) worker.join();
    }
}

std::size_t JobQueue::pending() const {
    std::lock_guard lock(mu_);
    return jobs_.size();
}

void JobQueue::worker_loop() {
    while (true) {
        std::function<void()> job;
        {
            std::unique_lock lock(mu_);
            cv_.wait(lock, [this] { return stopping_ || !jobs_.empty(); });
            if (stopping_ && jobs_.empty()) return;
            job = std::move(jobs_.front());
            jobs_.pop_front();
        }
        try {
            job();
        } catch (...) {
            // a job must never take a worker down
        }
    }
}

struct WebhookService::Impl {
    httplib::Server server;
};

WebhookService::WebhookService(std::shared_ptr<Engine> engine, ServiceOptions options)
    : engine_(std::move(engine)),
      options_(std::move(options)),
      queue_(std::make_unique<JobQueue>(options_.workers, options_.queue_capacity)),
      impl_(std::make_unique<Impl>()) {}

WebhookService::~WebhookService() {
    stop();
}

void WebhookService::start() {
    auto& server = impl_->server;

    server.Get("/healthz", [](const httplib::Request&, httplib::Response& response) {
        response.set_content("ok", "text/plain");
    });

    server.Post(R"(/webhook/([a-z]+))", [this](const httplib::Request& request,
                                               httplib::Response& response) {
        auto reply = [&](int status, const std::string& message) {
            response.status = status;
            nlohmann::json body = {{"status", message}};
            response.set_content(body.dump(), "application/json");
        };

        auto provider = vcs::provider_from_name(request.matches[1].str());
        if (!provider) {
            reply(404, "unknown provider");
            return;
        }
        if (!options_.shared_secret.empty()) {
            std::string signature = request.get_header_value("X-Hub-Signature-256");
            if (signature.empty() ||
                !vcs::verify_webhook_signature(request.body, signature,
                                               options_.shared_secret)) {
                reply(401, "signature verification failed");
                return;
            }
        }

        vcs::PullRequestEvent event;
        try {
            event = vcs::parse_webhook(request.body, *provider);
        } catch (const vcs::WebhookError& e) {
            reply(400, e.what());
            return;
        }

        auto engine = engine_;
        auto completed = &jobs_completed_;
        std::function<void()> job;
        if (event.kind == vcs::EventKind::comment_added) {
            job = [engine, event, completed] {
                engine->handle_chat(event);
                completed->fetch_add(1);
            };
        } else {
            job = [engine, event, completed] {
                engine->review_pull_request(event);
                completed->fetch_add(1);
            };
        }
        if (!queue_->push(std::move(job))) {
            reply(503, "queue full");
            return;
        }
        jobs_accepted_.fetch_add(1);
        // accepted: the review proceeds in the background
        reply(202, "accepted");
    });

    port_ = options_.port;
    if (port_ == 0) {
        port_ = server.bind_to_any_port("0.0.0.0");
    } else {
        server.bind_to_port("0.0.0.0", port_);
    }
    server_thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    server.wait_until_ready();
}

void WebhookService::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
    if (server_thread_.joinable()) server_thread_.join();
    if (queue_) queue_->shutdown();
}

}  // namespace deputy::engine
