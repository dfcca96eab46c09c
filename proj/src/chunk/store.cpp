#include "deputy/chunk/store.hpp"

#include <algorithm>

namespace deputy::chunk {

InMemoryChunkStore::InMemoryChunkStore(std::shared_ptr<util::Clock> clock)
    : clock_(std::move(clock)) {}

void InMemoryChunkStore::put(const std::string& id, const ChunkStoreEntry& entry,
                             std::chrono::seconds ttl) {
    if (ttl <= std::chrono::seconds(0)) {
        throw std::invalid_argument("ttl must be positive");
    }
    std::lock_guard lock(mu_);
    auto now = clock_->now();
    auto it = entries_.find(id);
    if (it != entries_.end() && it->second.expires_at > now &&
        it->second.chunk.content != entry.chunk.content) {
        throw ChunkCollisionError(id);
    }
    ChunkStoreEntry stored = entry;
    stored.chunk_id = id;
    stored.expires_at = now + ttl;
    entries_[id] = std::move(stored);
}

std::optional<ChunkStoreEntry> InMemoryChunkStore::get(const std::string& id) {
    std::lock_guard lock(mu_);
    auto it = entries_.find(id);
    if (it == entries_.end()) return std::nullopt;
    if (it->second.expires_at <= clock_->now()) {
        entries_.erase(it);
        return std::nullopt;
    }
    return it->second;
}

std::vector<ChunkStoreEntry> InMemoryChunkStore::scan(const std::string& repo_id) {
    std::lock_guard lock(mu_);
    auto now = clock_->now();
    std::vector<ChunkStoreEntry> out;
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (it->second.expires_at <= now) {
            it = entries_.erase(it);
            continue;
        }
        if (it->second.chunk.repo_id == repo_id) out.push_back(it->second);
        ++it;
    }
    std::sort(out.begin(), out.end(), [](const ChunkStoreEntry& a, const ChunkStoreEntry& b) {
        if (a.chunk.file_path != b.chunk.file_path) return a.chunk.file_path < b.chunk.file_path;
        if (a.chunk.span.start_line != b.chunk.span.start_line) {
            return a.chunk.span.start_line < b.chunk.span.start_line;
        }
        return a.chunk_id < b.chunk_id;
    });
    return out;
}

std::size_t InMemoryChunkStore::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

std::size_t store_chunks(const std::vector<CodeChunk>& chunks, std::chrono::seconds ttl,
                         ChunkStore& store) {
    std::size_t stored = 0;
    for (const auto& chunk : chunks) {
        ChunkStoreEntry entry;
        entry.chunk_id = chunk.chunk_id;
        entry.chunk = chunk;
        store.put(chunk.chunk_id, entry, ttl);
        ++stored;
    }
    return stored;
}

}  // namespace deputy::chunk
