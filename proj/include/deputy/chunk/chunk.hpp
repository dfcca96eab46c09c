#pragma once

#include <optional>
#include <string>

namespace deputy::chunk {

enum class SymbolKind { Function, Method, Class, ModuleTopLevel, Other };

std::string_view symbol_kind_name(SymbolKind kind);

struct Span {
    long start_line = 1;  // 1-based, inclusive
    long end_line = 1;

    friend bool operator==(const Span&, const Span&) = default;
};

/// One semantically coherent source segment. content is the exact file slice
/// at span; chunk_id is derived from (repo, path, symbol, content) so
/// identical code re-chunks to the same id.
struct CodeChunk {
    std::string chunk_id;
    std::string repo_id;
    std::string file_path;
    Span span;
    SymbolKind kind = SymbolKind::Other;
    std::string symbol_name;
    std::string content;
    std::optional<std::string> enclosing_scope;

    std::string qualified_name() const {
        return enclosing_scope ? *enclosing_scope + "." + symbol_name : symbol_name;
    }
};

std::string make_chunk_id(const std::string& repo_id, const std::string& file_path,
                          const std::string& symbol_name, const std::string& content);

}  // namespace deputy::chunk
