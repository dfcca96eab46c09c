#pragma once

#include <string>
#include <vector>

#include "deputy/vcs/diff.hpp"

namespace deputy::retrieval {

/// The PR diff reshaped as a search query: identifier subtokens drawn from
/// every hunk line (context included, so callers/callees named near the
/// change count), plus the changed-lines text for embedding.
struct RetrievalQuery {
    std::string repo_id;
    vcs::UnifiedDiff diff;
    std::vector<std::string> identifiers;  // lowercased subtokens, deduped, in order
    std::string query_text;                // concatenated changed lines
};

RetrievalQuery build_retrieval_query(const std::string& repo_id, const vcs::UnifiedDiff& diff);

/// Identifier subtokens of arbitrary text: identifiers split on case and
/// underscore boundaries, lowercased, deduplicated order-preserving.
std::vector<std::string> identifier_subtokens(const std::string& text);

/// As identifier_subtokens but keeping duplicates (term frequencies).
std::vector<std::string> identifier_subtokens_with_repeats(const std::string& text);

}  // namespace deputy::retrieval
