#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "deputy/chunk/store.hpp"
#include "deputy/retrieval/query.hpp"

namespace deputy::retrieval {

enum class SearchSource { lexical, semantic };

struct ScoredHit {
    std::string chunk_id;
    double score = 0.0;
};

/// Hits sorted by descending score (chunk-id breaks ties), no duplicates.
struct ScoredChunkSet {
    SearchSource source = SearchSource::lexical;
    std::vector<ScoredHit> hits;
};

/// Term-frequency–weighted identifier overlap: a chunk scores the total
/// number of occurrences of query subtokens among its own identifier
/// subtokens. Chunks lying entirely inside the diff's changed ranges are
/// excluded — they are the change, not its context.
ScoredChunkSet lexical_search(const RetrievalQuery& query, chunk::ChunkStore& store, int top_k);

class EmbedderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual int dim() const = 0;
    virtual std::vector<float> embed(const std::string& text) = 0;
};

/// Deterministic reference embedder: a bag of identifier subtokens hashed
/// into a fixed-width signed vector, L2-normalized. Identical text embeds to
/// an identical vector, so exact matches score cosine 1.
class HashingEmbedder final : public Embedder {
public:
    explicit HashingEmbedder(int dim = 256) : dim_(dim) {}
    int dim() const override { return dim_; }
    std::vector<float> embed(const std::string& text) override;

private:
    int dim_;
};

/// 0 when either vector is all-zero; snapped to exactly 1.0 within 1e-12.
double cosine_similarity(const std::vector<float>& a, const std::vector<float>& b);

/// Cosine ranking of chunk embeddings against the embedded query text.
/// Missing chunk embeddings are computed lazily and cached back into the
/// store. Embedder failures surface as EmbedderError for the caller to
/// degrade on.
ScoredChunkSet semantic_search(const RetrievalQuery& query, chunk::ChunkStore& store,
                               Embedder& embedder, int top_k, double min_similarity);

}  // namespace deputy::retrieval
