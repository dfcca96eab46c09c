#pragma once

#include <string>
#include <vector>

#include "deputy/vcs/clients.hpp"
#include "deputy/vcs/types.hpp"

namespace deputy::vcs {

struct KnowledgeResult {
    std::vector<KnowledgeDoc> docs;       // in order of appearance in the description
    std::vector<std::string> warnings;    // per-reference fetch problems, never fatal
};

/// Scans a PR description for ticket keys (KEY-123) and wiki page URLs and
/// fetches their contents. Unresolvable references become warnings.
KnowledgeResult resolve_knowledge_docs(const std::string& description, TrackerClient& tracker,
                                       WikiClient& wiki);

}  // namespace deputy::vcs
