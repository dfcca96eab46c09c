#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace deputy::agents {

/// The six focused reviewer personas, in canonical order.
enum class AgentKind {
    Security,
    CodeCommunication,
    PerformanceOptimization,
    CodeMaintainability,
    Error,
    BusinessLogicValidation,
};

inline constexpr std::array<AgentKind, 6> kAllAgents = {
    AgentKind::Security,
    AgentKind::CodeCommunication,
    AgentKind::PerformanceOptimization,
    AgentKind::CodeMaintainability,
    AgentKind::Error,
    AgentKind::BusinessLogicValidation,
};

std::string_view agent_name(AgentKind kind);     // "security", "code-communication", ...
std::string_view agent_display(AgentKind kind);  // "Security", "Code Communication", ...
std::optional<AgentKind> agent_from_name(std::string_view name);

inline int agent_index(AgentKind kind) { return static_cast<int>(kind); }

enum class Pass { SinglePass, Reflection };

std::string_view pass_name(Pass pass);  // "single-pass" / "reflection"

}  // namespace deputy::agents
