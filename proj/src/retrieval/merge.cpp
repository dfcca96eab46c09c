#include "deputy/retrieval/merge.hpp"

#include <algorithm>
#include <map>

namespace deputy::retrieval {

namespace {

std::map<std::string, double> normalized_scores(const ScoredChunkSet& set) {
    std::map<std::string, double> out;
    if (set.hits.empty()) return out;
    double lo = set.hits.front().score;
    double hi = set.hits.front().score;
    for (const auto& hit : set.hits) {
        lo = std::min(lo, hit.score);
        hi = std::max(hi, hit.score);
    }
    for (const auto& hit : set.hits) {
        out[hit.chunk_id] = (hi > lo) ? (hit.score - lo) / (hi - lo) : 1.0;
    }
    return out;
}

}  // namespace

std::vector<MergedHit> merge_union(const ScoredChunkSet& a, const ScoredChunkSet& b) {
    auto norm_a = normalized_scores(a);
    auto norm_b = normalized_scores(b);

    std::map<std::string, MergedHit> merged;
    auto absorb = [&](const std::map<std::string, double>& norm, SearchSource source) {
        for (const auto& [id, score] : norm) {
            MergedHit& hit = merged[id];
            hit.chunk_id = id;
            hit.score = std::max(hit.score, score);
            if (source == SearchSource::lexical) {
                hit.in_lexical = true;
            } else {
                hit.in_semantic = true;
            }
        }
    };
    absorb(norm_a, a.source);
    absorb(norm_b, b.source);

    std::vector<MergedHit> out;
    out.reserve(merged.size());
    for (auto& [id, hit] : merged) out.push_back(std::move(hit));
    std::sort(out.begin(), out.end(), [](const MergedHit& x, const MergedHit& y) {
        if (x.score != y.score) return x.score > y.score;
        return x.chunk_id < y.chunk_id;
    });
    return out;
}

long estimate_tokens(std::string_view text, int chars_per_token) {
    if (chars_per_token <= 0) chars_per_token = 4;
    return static_cast<long>((text.size() + chars_per_token - 1) /
                             static_cast<std::size_t>(chars_per_token));
}

std::vector<chunk::CodeChunk> merge_relevant(const ScoredChunkSet& lexical,
                                             const ScoredChunkSet& semantic, long budget_tokens,
                                             chunk::ChunkStore& store, int chars_per_token) {
    std::vector<chunk::CodeChunk> out;
    long used = 0;
    for (const auto& hit : merge_union(lexical, semantic)) {
        auto entry = store.get(hit.chunk_id);
        if (!entry) continue;  // expired between search and merge
        long cost = estimate_tokens(entry->chunk.content, chars_per_token);
        if (used + cost > budget_tokens) continue;
        used += cost;
        out.push_back(std::move(entry->chunk));
    }
    return out;
}

}  // namespace deputy::retrieval
