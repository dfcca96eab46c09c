#include "deputy/retrieval/search.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "deputy/util/hash.hpp"

namespace deputy::retrieval {

namespace {

void sort_hits(std::vector<ScoredHit>& hits) {
    std::sort(hits.begin(), hits.end(), [](const ScoredHit& a, const ScoredHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.chunk_id < b.chunk_id;
    });
}

bool chunk_is_the_change(const RetrievalQuery& query, const chunk::CodeChunk& chunk) {
    return vcs::span_within_changes(query.diff, chunk.file_path, chunk.span.start_line,
                                    chunk.span.end_line);
}

}  // namespace

ScoredChunkSet lexical_search(const RetrievalQuery& query, chunk::ChunkStore& store, int top_k) {
    ScoredChunkSet result;
    result.source = SearchSource::lexical;
    if (query.identifiers.empty() || top_k <= 0) return result;

    for (const auto& entry : store.scan(query.repo_id)) {
        if (chunk_is_the_change(query, entry.chunk)) continue;

        std::map<std::string, long> term_counts;
        for (const auto& token : identifier_subtokens_with_repeats(entry.chunk.content)) {
            ++term_counts[token];
        }
        double score = 0.0;
        for (const auto& term : query.identifiers) {
            auto it = term_counts.find(term);
            if (it != term_counts.end()) score += static_cast<double>(it->second);
        }
        if (score > 0.0) result.hits.push_back({entry.chunk_id, score});
    }
    sort_hits(result.hits);
    if (result.hits.size() > static_cast<std::size_t>(top_k)) result.hits.resize(top_k);
    return result;
}

std::vector<float> HashingEmbedder::embed(const std::string& text) {
    std::vector<float> vec(static_cast<std::size_t>(dim_), 0.0f);
    for (const auto& token : identifier_subtokens_with_repeats(text)) {
        std::uint64_t h = util::stable_hash64(token);
        auto idx = static_cast<std::size_t>(h % static_cast<std::uint64_t>(dim_));
        float sign = ((h >> 32) & 1u) ? 1.0f : -1.0f;
        vec[idx] += sign;
    }
    double norm = 0.0;
    for (float v : vec) norm += static_cast<double>(v) * v;
    if (norm > 0.0) {
        auto inv = static_cast<float>(1.0 / std::sqrt(norm));
        for (auto& v : vec) v *= inv;
    }
    return vec;
}

double cosine_similarity(const std::vector<float>& a, const std::vector<float>& b) {
    if (a.size() != b.size() || a.empty()) return 0.0;
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    double cos = dot / (std::sqrt(na) * std::sqrt(nb));
    if (std::abs(cos - 1.0) < 1e-12) cos = 1.0;
    if (cos > 1.0) cos = 1.0;
    if (cos < -1.0) cos = -1.0;
    return cos;
}

ScoredChunkSet semantic_search(const RetrievalQuery& query, chunk::ChunkStore& store,
                               Embedder& embedder, int top_k, double min_similarity) {
    ScoredChunkSet result;
    result.source = SearchSource::semantic;
    if (top_k <= 0) return result;

    std::vector<float> query_vec = embedder.embed(query.query_text);

    for (const auto& entry : store.scan(query.repo_id)) {
        if (chunk_is_the_change(query, entry.chunk)) continue;

        std::vector<float> emb;
        if (entry.embedding) {
            emb = *entry.embedding;
        } else {
            emb = embedder.embed(entry.chunk.content);
            auto remaining = std::chrono::duration_cast<std::chrono::seconds>(
                entry.expires_at - store.clock().now());
            if (remaining > std::chrono::seconds(0)) {
                chunk::ChunkStoreEntry updated = entry;
                updated.embedding = emb;
                store.put(entry.chunk_id, updated, remaining);
            }
        }
        double sim = cosine_similarity(query_vec, emb);
        if (sim >= min_similarity) result.hits.push_back({entry.chunk_id, sim});
    }
    sort_hits(result.hits);
    if (result.hits.size() > static_cast<std::size_t>(top_k)) result.hits.resize(top_k);
    return result;
}

}  // namespace deputy::retrieval
