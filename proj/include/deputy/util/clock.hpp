#pragma once

#include <chrono>
#include <memory>
#include <mutex>

namespace deputy::util {

using TimePoint = std::chrono::system_clock::time_point;

class Clock {
public:
    virtual ~Clock() = default;
    virtual TimePoint now() const = 0;
};

class SystemClock final : public Clock {
public:
    TimePoint now() const override { return std::chrono::system_clock::now(); }
};

/// Test clock advanced by hand.
class ManualClock final : public Clock {
public:
    explicit ManualClock(TimePoint start = {}) : now_(start) {}

    TimePoint now() const override {
        std::lock_guard lock(mu_);
        return now_;
    }

    void advance(std::chrono::seconds d) {
        std::lock_guard lock(mu_);
        now_ += d;
    }

private:
    mutable std::mutex mu_;
    TimePoint now_;
};

}  // namespace deputy::util
