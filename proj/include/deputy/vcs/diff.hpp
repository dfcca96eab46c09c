#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace deputy::vcs {

class DiffParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class LineKind { context, added, removed };

struct DiffLine {
    LineKind kind = LineKind::context;
    std::string text;  // marker stripped, no trailing newline
};

struct Hunk {
    long old_start = 0;
    long old_count = 0;
    long new_start = 0;
    long new_count = 0;
    std::string header;              // raw "@@ ... @@ ..." line
    std::vector<DiffLine> lines;     // tagged body lines
    std::vector<std::string> raw;    // verbatim body incl. "\ No newline..." markers
};

struct FileDiff {
    std::string path;      // repo-relative; new path, or old path for deletions
    std::string old_path;  // without a/ prefix, "/dev/null" for additions
    std::string new_path;  // without b/ prefix, "/dev/null" for deletions
    std::vector<std::string> header_lines;  // verbatim lines before the first hunk
    std::vector<Hunk> hunks;
    bool binary = false;
};

struct UnifiedDiff {
    std::vector<FileDiff> files;
    bool trailing_newline = true;

    bool empty() const { return files.empty(); }
};

/// Parses `git diff` style unified output. Hunk line counts are validated
/// against the tagged body lines.
UnifiedDiff parse_unified_diff(std::string_view text);

/// Re-serializes a parsed diff. Byte-exact for anything parse_unified_diff
/// accepted.
std::string serialize_diff(const UnifiedDiff& diff);

/// Total changed LOC = sum of added + removed lines.
long changed_loc(const UnifiedDiff& diff);

/// Hunk ranges of `file` in new-file coordinates as inclusive [start, end]
/// pairs (empty new-side hunks excluded).
std::vector<std::pair<long, long>> new_file_ranges(const FileDiff& file);

bool diff_touches_file(const UnifiedDiff& diff, std::string_view path);

/// True when `line` (new-file coordinates) appears in a hunk of `path`,
/// either as an added or a context line.
bool line_visible_in_new(const UnifiedDiff& diff, std::string_view path, long line);

/// True when [start,end] lies entirely inside the changed ranges of `path`.
/// Used to drop chunks that *are* the change from retrieval results.
bool span_within_changes(const UnifiedDiff& diff, std::string_view path, long start, long end);

/// Concatenated text of added + removed lines, in diff order.
std::string changed_lines_text(const UnifiedDiff& diff);

/// Concatenated text of every hunk body line (context included).
std::string hunk_lines_text(const UnifiedDiff& diff);

}  // namespace deputy::vcs
