#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace deputy::util {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

/// Splits on '\n'. The final element is the text after the last newline
/// (empty when the input ends with '\n').
std::vector<std::string> split_lines(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Extracts identifier-like tokens ([A-Za-z_][A-Za-z0-9_]*) in order of
/// appearance.
std::vector<std::string> extract_identifiers(std::string_view text);

/// Splits one identifier on underscore and camel-case boundaries and
/// lowercases the parts, e.g. "parseHTTPResponse_v2" -> {parse, http,
/// response, v2}.
std::vector<std::string> split_identifier(std::string_view ident);

}  // namespace deputy::util
