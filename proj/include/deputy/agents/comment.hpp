#pragma once

#include <optional>
#include <string>

#include "deputy/agents/kind.hpp"

namespace deputy::agents {

/// One review comment in the inter-component schema: description, optional
/// corrective code, location, model confidence, and category bucket. The
/// agent attribution is set by the parser, never self-reported by the model.
struct ReviewComment {
    std::string description;
    std::optional<std::string> corrective_code;
    std::string file_path;
    long line_number = 0;  // new-file coordinates of the diff
    double confidence_score = 0.0;
    std::string bucket;
    AgentKind agent = AgentKind::Security;
};

}  // namespace deputy::agents
