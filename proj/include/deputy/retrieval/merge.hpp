#pragma once

#include <vector>

#include "deputy/chunk/chunk.hpp"
#include "deputy/chunk/store.hpp"
#include "deputy/retrieval/search.hpp"

namespace deputy::retrieval {

struct MergedHit {
    std::string chunk_id;
    double score = 0.0;  // max of the min-max normalized source scores
    bool in_lexical = false;
    bool in_semantic = false;
};

/// Exact set union of both result sets: each source is min-max normalized to
/// [0,1] (a constant set maps to 1), duplicates keep their max normalized
/// score, ordering is score-descending with chunk-id tie-break.
std::vector<MergedHit> merge_union(const ScoredChunkSet& a, const ScoredChunkSet& b);

/// chars/4 heuristic, provider-independent.
long estimate_tokens(std::string_view text, int chars_per_token = 4);

/// Union then greedy budget truncation: chunks are taken in merged order
/// while they fit the remaining token budget.
std::vector<chunk::CodeChunk> merge_relevant(const ScoredChunkSet& lexical,
                                             const ScoredChunkSet& semantic, long budget_tokens,
                                             chunk::ChunkStore& store,
                                             int chars_per_token = 4);

}  // namespace deputy::retrieval
