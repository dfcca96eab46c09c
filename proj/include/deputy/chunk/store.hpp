#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deputy/chunk/chunk.hpp"
#include "deputy/util/clock.hpp"

namespace deputy::chunk {

class ChunkCollisionError : public std::runtime_error {
public:
    explicit ChunkCollisionError(const std::string& id)
        : std::runtime_error("chunk-id collision with divergent content: " + id) {}
};

struct ChunkStoreEntry {
    std::string chunk_id;
    CodeChunk chunk;
    std::optional<std::vector<float>> embedding;
    util::TimePoint expires_at{};
};

/// Ephemeral key-value store with TTL, the shape an external cache would be
/// substituted behind. Entries are unreadable once expired.
class ChunkStore {
public:
    virtual ~ChunkStore() = default;

    virtual void put(const std::string& id, const ChunkStoreEntry& entry,
                     std::chrono::seconds ttl) = 0;
    virtual std::optional<ChunkStoreEntry> get(const std::string& id) = 0;
    /// Live entries for one repo, ordered by (file, span, id) for
    /// deterministic iteration.
    virtual std::vector<ChunkStoreEntry> scan(const std::string& repo_id) = 0;

    virtual const util::Clock& clock() const = 0;
};

class InMemoryChunkStore final : public ChunkStore {
public:
    explicit InMemoryChunkStore(std::shared_ptr<util::Clock> clock =
                                    std::make_shared<util::SystemClock>());

    void put(const std::string& id, const ChunkStoreEntry& entry,
             std::chrono::seconds ttl) override;
    std::optional<ChunkStoreEntry> get(const std::string& id) override;
    std::vector<ChunkStoreEntry> scan(const std::string& repo_id) override;
    const util::Clock& clock() const override { return *clock_; }

    std::size_t size() const;

private:
    std::shared_ptr<util::Clock> clock_;
    mutable std::mutex mu_;
    std::map<std::string, ChunkStoreEntry> entries_;
};

/// Stores chunks with the given TTL; re-storing an identical chunk refreshes
/// its expiry, divergent content under the same id throws
/// ChunkCollisionError. Returns the number stored.
std::size_t store_chunks(const std::vector<CodeChunk>& chunks, std::chrono::seconds ttl,
                         ChunkStore& store);

}  // namespace deputy::chunk
