#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "deputy/engine/pipeline.hpp"

namespace deputy::engine {

/// Bounded in-process job queue with a fixed worker pool. push() never
/// blocks: a full queue is reported to the caller instead.
class JobQueue {
public:
    JobQueue(int workers, int capacity);
    ~JobQueue();

    bool push(std::function<void()> job);
    void shutdown();
    std::size_t pending() const;

private:
    void worker_loop();

    int capacity_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<std::function<void()>> jobs_;
    std::vector<std::thread> workers_;
    bool stopping_ = false;
};

struct ServiceOptions {
    int port = 0;  // 0 binds an ephemeral port
    int workers = 4;
    int queue_capacity = 256;
    std::string shared_secret;  // empty disables signature checks
};

/// POST /webhook/{provider}: verifies the signature when a secret is
/// configured, normalizes the event, enqueues the review or chat job, and
/// acknowledges with 202 before any review work happens.
class WebhookService {
public:
    WebhookService(std::shared_ptr<Engine> engine, ServiceOptions options);
    ~WebhookService();

    void start();
    void stop();
    int port() const { return port_; }
    long jobs_accepted() const { return jobs_accepted_.load(); }
    long jobs_completed() const { return jobs_completed_.load(); }

private:
    std::shared_ptr<Engine> engine_;
    ServiceOptions options_;
    std::unique_ptr<JobQueue> queue_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::thread server_thread_;
    int port_ = 0;
    std::atomic<long> jobs_accepted_{0};
    std::atomic<long> jobs_completed_{0};
};

}  // namespace deputy::engine
