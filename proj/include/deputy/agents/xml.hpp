#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "deputy/agents/comment.hpp"

namespace deputy::agents {

class XmlParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct XmlParseResult {
    std::vector<ReviewComment> comments;
    std::vector<std::string> warnings;
};

/// Extracts review comments from model output. Prose outside the <review>
/// element is ignored; a comment missing a mandatory field is skipped with a
/// warning while the rest are kept; confidence scores outside [0,1] are
/// clamped with a warning. Throws XmlParseError only when no <review> root
/// exists at all. The returned comments carry no agent attribution — the
/// caller sets it.
XmlParseResult parse_agent_xml(std::string_view text);

}  // namespace deputy::agents
