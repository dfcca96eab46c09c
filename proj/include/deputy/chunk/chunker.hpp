#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "deputy/chunk/chunk.hpp"
#include "deputy/chunk/workspace.hpp"

namespace deputy::chunk {

struct ChunkerOptions {
    long max_chunk_lines = 400;  // oversize definitions split at this boundary
    std::set<std::string> languages = {"python"};
    std::size_t max_file_bytes = 1 << 20;
};

/// Span-level result of language-aware chunking, before content slicing.
struct RawChunk {
    Span span;
    SymbolKind kind = SymbolKind::Other;
    std::string symbol_name;
    std::optional<std::string> enclosing_scope;
};

class LanguageChunker {
public:
    virtual ~LanguageChunker() = default;
    virtual std::string language() const = 0;
    virtual bool handles_extension(const std::string& ext) const = 0;
    /// Returns definition-granularity spans; lines not covered are gaps.
    virtual std::vector<RawChunk> chunk(const std::string& source) const = 0;
};

/// Indentation-structure chunker for Python: top-level functions and classes
/// become chunks, methods become child chunks carrying the class name as
/// enclosing scope, leading comment lines attach to their definition.
class PythonChunker final : public LanguageChunker {
public:
    std::string language() const override { return "python"; }
    bool handles_extension(const std::string& ext) const override { return ext == ".py"; }
    std::vector<RawChunk> chunk(const std::string& source) const override;
};

struct ChunkerResult {
    std::vector<CodeChunk> chunks;
    std::vector<std::string> warnings;
};

/// Chunks one in-memory file. Oversize definitions are split at
/// max_chunk_lines with "#partN" name suffixes; a file whose language has no
/// registered chunker becomes a single whole-file chunk; a chunking failure
/// degrades the same way instead of aborting.
ChunkerResult chunk_file_content(const std::string& source, const std::string& file_path,
                                 const std::string& repo_id, const ChunkerOptions& options = {});

/// Walks the workspace tree (.git excluded) and chunks every text file,
/// deterministically ordered by path.
ChunkerResult semantic_chunk(const WorkspaceHandle& workspace, const std::string& repo_id,
                             const ChunkerOptions& options = {});

}  // namespace deputy::chunk
