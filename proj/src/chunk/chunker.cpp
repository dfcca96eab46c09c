#include "deputy/chunk/chunker.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "deputy/util/hash.hpp"

namespace deputy::chunk {

std::string_view symbol_kind_name(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Function: return "function";
        case SymbolKind::Method: return "method";
        case SymbolKind::Class: return "class";
        case SymbolKind::ModuleTopLevel: return "module-top-level";
        case SymbolKind::Other: return "other";
    }
    return "other";
}

std::string make_chunk_id(const std::string& repo_id, const std::string& file_path,
                          const std::string& symbol_name, const std::string& content) {
    std::string digest = util::sha256_hex(content);
    std::string id = util::sha256_hex(repo_id + "\x1f" + file_path + "\x1f" + symbol_name +
                                      "\x1f" + digest);
    return id.substr(0, 24);
}

namespace {

struct SourceLines {
    std::vector<std::string> lines;          // without newlines
    std::vector<std::size_t> line_offsets;   // byte offset of each line start
    std::size_t total_bytes = 0;

    long count() const { return static_cast<long>(lines.size()); }
};

SourceLines index_lines(const std::string& source) {
    SourceLines out;
    out.total_bytes = source.size();
    std::size_t pos = 0;
    while (pos < source.size()) {
        out.line_offsets.push_back(pos);
        auto nl = source.find('\n', pos);
        if (nl == std::string::npos) {
            out.lines.push_back(source.substr(pos));
            break;
        }
        out.lines.push_back(source.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return out;
}

// Slice covering lines [start,end] (1-based, inclusive), newlines included.
std::string slice(const std::string& source, const SourceLines& idx, long start, long end) {
    std::size_t from = idx.line_offsets[static_cast<std::size_t>(start - 1)];
    std::size_t to = (end >= idx.count()) ? source.size()
                                          : idx.line_offsets[static_cast<std::size_t>(end)];
    return source.substr(from, to - from);
}

int indent_of(const std::string& line) {
    int indent = 0;
    for (char c : line) {
        if (c == ' ') {
            ++indent;
        } else if (c == '\t') {
            indent += 8 - indent % 8;
        } else {
            break;
        }
    }
    return indent;
}

bool is_blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string_view after_indent(const std::string& line) {
    auto pos = line.find_first_not_of(" \t");
    return pos == std::string::npos ? std::string_view{} : std::string_view(line).substr(pos);
}

bool is_comment(const std::string& line) {
    auto body = after_indent(line);
    return !body.empty() && body.front() == '#';
}

bool is_decorator(const std::string& line) {
    auto body = after_indent(line);
    return !body.empty() && body.front() == '@';
}

enum class DefKeyword { none, function, klass };

DefKeyword def_keyword(const std::string& line) {
    auto body = after_indent(line);
    if (body.substr(0, 4) == "def " || body.substr(0, 10) == "async def ") {
        return DefKeyword::function;
    }
    if (body.substr(0, 6) == "class ") return DefKeyword::klass;
    return DefKeyword::none;
}

std::string def_name(const std::string& line) {
    auto body = after_indent(line);
    if (body.substr(0, 6) == "async ") body.remove_prefix(6);
    auto space = body.find(' ');
    if (space == std::string_view::npos) return "?";
    body.remove_prefix(space + 1);
    std::size_t end = 0;
    while (end < body.size() &&
           (std::isalnum(static_cast<unsigned char>(body[end])) || body[end] == '_')) {
        ++end;
    }
    return end == 0 ? "?" : std::string(body.substr(0, end));
}

// Marks lines that begin inside a triple-quoted string so indentation
// heuristics are not fooled by string contents.
std::vector<bool> lines_starting_in_string(const std::vector<std::string>& lines) {
    std::vector<bool> starts(lines.size(), false);
    enum class St { none, sq, dq, tsq, tdq } st = St::none;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        starts[li] = (st == St::tsq || st == St::tdq);
        const std::string& line = lines[li];
        std::size_t i = 0;
        while (i < line.size()) {
            char c = line[i];
            switch (st) {
                case St::none:
                    if (c == '#') {
                        i = line.size();
                    } else if (c == '\'') {
                        if (line.compare(i, 3, "'''") == 0) {
                            st = St::tsq;
                            i += 3;
                        } else {
                            st = St::sq;
                            ++i;
                        }
                    } else if (c == '"') {
                        if (line.compare(i, 3, "\"\"\"") == 0) {
                            st = St::tdq;
                            i += 3;
                        } else {
                            st = St::dq;
                            ++i;
                        }
                    } else {
                        ++i;
                    }
                    break;
                case St::sq:
                case St::dq:
                    if (c == '\\') {
                        i += 2;
                    } else if ((st == St::sq && c == '\'') || (st == St::dq && c == '"')) {
                        st = St::none;
                        ++i;
                    } else {
                        ++i;
                    }
                    break;
                case St::tsq:
                case St::tdq:
                    if (c == '\\') {
                        i += 2;
                    } else if ((st == St::tsq && line.compare(i, 3, "'''") == 0) ||
                               (st == St::tdq && line.compare(i, 3, "\"\"\"") == 0)) {
                        st = St::none;
                        i += 3;
                    } else {
                        ++i;
                    }
                    break;
            }
        }
        // single-quoted strings do not span lines
        if (st == St::sq || st == St::dq) st = St::none;
    }
    return starts;
}

struct PyScanner {
    const std::vector<std::string>& lines;
    std::vector<bool> in_string;
    long n;

    explicit PyScanner(const std::vector<std::string>& ls)
        : lines(ls), in_string(lines_starting_in_string(ls)), n(static_cast<long>(ls.size())) {}

    const std::string& at(long i) const { return lines[static_cast<std::size_t>(i)]; }
    bool in_str(long i) const { return in_string[static_cast<std::size_t>(i)]; }
    bool blank(long i) const { return !in_str(i) && is_blank(at(i)); }
    int indent(long i) const { return indent_of(at(i)); }
    bool comment(long i) const { return !in_str(i) && is_comment(at(i)); }
    bool decorator(long i) const { return !in_str(i) && is_decorator(at(i)); }
    DefKeyword keyword(long i) const { return in_str(i) ? DefKeyword::none : def_keyword(at(i)); }

    // End (inclusive, 0-based) of the suite started at header line `i`:
    // subsequent lines that are blank, string continuations, or indented
    // deeper than the header, trimmed of trailing blanks.
    long block_end(long i, int base_indent) const {
        long j = i + 1;
        while (j < n && (blank(j) || in_str(j) || indent(j) > base_indent)) ++j;
        long end = j - 1;
        while (end > i && blank(end)) --end;
        return end;
    }

    // Start of the contiguous comment/decorator lead directly above `i` at
    // the given indent.
    long lead_start(long i, int at_indent) const {
        long start = i;
        while (start > 0) {
            long p = start - 1;
            if (blank(p) || in_str(p)) break;
            if ((comment(p) || decorator(p)) && indent(p) == at_indent) {
                --start;
            } else {
                break;
            }
        }
        return start;
    }
};

// 0-based internal segment; converted to 1-based spans at the end.
struct Segment {
    long start;
    long end;
    SymbolKind kind;
    std::string name;
    std::optional<std::string> scope;
};

void scan_class_body(const PyScanner& s, long class_line, long class_end,
                     const std::string& class_name, long attach_start,
                     std::vector<Segment>& out) {
    // locate methods at the class body indent
    int body_indent = -1;
    for (long i = class_line + 1; i <= class_end; ++i) {
        if (!s.blank(i) && !s.in_str(i) && !s.comment(i)) {
            body_indent = s.indent(i);
            break;
        }
    }

    std::vector<std::pair<long, long>> methods;  // (attach_start, end)
    std::vector<std::string> method_names;
    if (body_indent > s.indent(class_line)) {
        long i = class_line + 1;
        while (i <= class_end) {
            if (!s.blank(i) && !s.in_str(i) && s.indent(i) == body_indent &&
                s.keyword(i) == DefKeyword::function) {
                long lead = s.lead_start(i, body_indent);
                long end = std::min(s.block_end(i, body_indent), class_end);
                methods.emplace_back(lead, end);
                method_names.push_back(def_name(s.at(i)));
                i = end + 1;
            } else {
                ++i;
            }
        }
    }

    // class shell: header (+ docstring/class-level lead-in) up to the first
    // method; code between or after methods stays in the gap
    long shell_end = methods.empty() ? class_end : methods.front().first - 1;
    while (shell_end > class_line && s.blank(shell_end)) --shell_end;
    out.push_back({attach_start, std::max(shell_end, class_line), SymbolKind::Class, class_name,
                   std::nullopt});

    for (std::size_t m = 0; m < methods.size(); ++m) {
        out.push_back({methods[m].first, methods[m].second, SymbolKind::Method, method_names[m],
                       class_name});
    }
}

std::vector<RawChunk> to_raw(const std::vector<Segment>& segments) {
    std::vector<RawChunk> out;
    out.reserve(segments.size());
    for (const auto& seg : segments) {
        RawChunk raw;
        raw.span = {seg.start + 1, seg.end + 1};
        raw.kind = seg.kind;
        raw.symbol_name = seg.name;
        raw.enclosing_scope = seg.scope;
        out.push_back(std::move(raw));
    }
    return out;
}

}  // namespace

std::vector<RawChunk> PythonChunker::chunk(const std::string& source) const {
    SourceLines idx = index_lines(source);
    PyScanner s(idx.lines);
    std::vector<Segment> segments;

    long top_level_runs = 0;
    long i = 0;
    while (i < s.n) {
        if (s.blank(i)) {
            ++i;
            continue;
        }
        int ind = s.indent(i);
        if (ind == 0 && !s.in_str(i) && (s.keyword(i) != DefKeyword::none || s.decorator(i))) {
            long header = i;
            while (header < s.n && s.decorator(header)) ++header;
            if (header < s.n && s.indent(header) == 0 &&
                s.keyword(header) != DefKeyword::none) {
                long lead = s.lead_start(i, 0);
                long end = s.block_end(header, 0);
                if (s.keyword(header) == DefKeyword::klass) {
                    scan_class_body(s, header, end, def_name(s.at(header)), lead, segments);
                } else {
                    segments.push_back({lead, end, SymbolKind::Function, def_name(s.at(header)),
                                        std::nullopt});
                }
                i = end + 1;
                continue;
            }
            // stray decorators fold into a top-level run below
        }
        if (ind == 0 && s.comment(i)) {
            // comment block leading into a definition attaches there instead
            long j = i;
            while (j < s.n && s.comment(j) && s.indent(j) == 0) ++j;
            if (j < s.n && s.indent(j) == 0 &&
                (s.keyword(j) != DefKeyword::none || s.decorator(j))) {
                i = j;
                continue;
            }
        }
        // module-level statement run: consume until a blank line or the next
        // top-level definition
        long start = i;
        long j = i;
        while (j < s.n && !s.blank(j)) {
            if (s.indent(j) == 0 && j > start && !s.in_str(j) &&
                (s.keyword(j) != DefKeyword::none || s.decorator(j))) {
                break;
            }
            ++j;
        }
        ++top_level_runs;
        std::string name = "(top-level)";
        if (top_level_runs > 1) name += "#" + std::to_string(top_level_runs);
        segments.push_back({start, j - 1, SymbolKind::ModuleTopLevel, name, std::nullopt});
        i = j;
    }

    // the lead of a definition can swallow lines already claimed by a
    // previous comment-run decision; keep segments disjoint and ordered
    std::sort(segments.begin(), segments.end(),
              [](const Segment& a, const Segment& b) { return a.start < b.start; });
    for (std::size_t k = 1; k < segments.size(); ++k) {
        if (segments[k].start <= segments[k - 1].end) {
            segments[k].start = segments[k - 1].end + 1;
        }
    }
    segments.erase(std::remove_if(segments.begin(), segments.end(),
                                  [](const Segment& seg) { return seg.start > seg.end; }),
                   segments.end());
    return to_raw(segments);
}

namespace {

const std::vector<std::shared_ptr<LanguageChunker>>& chunker_registry() {
    static const std::vector<std::shared_ptr<LanguageChunker>> registry = {
        std::make_shared<PythonChunker>(),
    };
    return registry;
}

std::string extension_of(const std::string& file_path) {
    auto dot = file_path.rfind('.');
    auto slash = file_path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return {};
    return file_path.substr(dot);
}

const LanguageChunker* chunker_for(const std::string& file_path, const ChunkerOptions& options) {
    std::string ext = extension_of(file_path);
    for (const auto& chunker : chunker_registry()) {
        if (options.languages.count(chunker->language()) && chunker->handles_extension(ext)) {
            return chunker.get();
        }
    }
    return nullptr;
}

std::string file_name_of(const std::string& file_path) {
    auto slash = file_path.rfind('/');
    return slash == std::string::npos ? file_path : file_path.substr(slash + 1);
}

std::vector<RawChunk> split_oversize(std::vector<RawChunk> raws, long max_lines) {
    std::vector<RawChunk> out;
    for (auto& raw : raws) {
        long size = raw.span.end_line - raw.span.start_line + 1;
        if (size <= max_lines) {
            out.push_back(std::move(raw));
            continue;
        }
        long part = 1;
        for (long start = raw.span.start_line; start <= raw.span.end_line;
             start += max_lines, ++part) {
            RawChunk piece = raw;
            piece.span.start_line = start;
            piece.span.end_line = std::min(start + max_lines - 1, raw.span.end_line);
            piece.symbol_name = raw.symbol_name + "#part" + std::to_string(part);
            out.push_back(std::move(piece));
        }
    }
    return out;
}

bool spans_are_valid(const std::vector<RawChunk>& raws, long line_count) {
    long prev_end = 0;
    for (const auto& raw : raws) {
        if (raw.span.start_line <= prev_end) return false;
        if (raw.span.start_line > raw.span.end_line) return false;
        if (raw.span.end_line > line_count) return false;
        prev_end = raw.span.end_line;
    }
    return true;
}

RawChunk whole_file_raw(const std::string& file_path, long line_count) {
    RawChunk raw;
    raw.span = {1, line_count};
    raw.kind = SymbolKind::Other;
    raw.symbol_name = file_name_of(file_path);
    return raw;
}

}  // namespace

ChunkerResult chunk_file_content(const std::string& source, const std::string& file_path,
                                 const std::string& repo_id, const ChunkerOptions& options) {
    ChunkerResult result;
    SourceLines idx = index_lines(source);
    if (idx.count() == 0) return result;

    std::vector<RawChunk> raws;
    const LanguageChunker* chunker = chunker_for(file_path, options);
    if (chunker != nullptr) {
        try {
            raws = chunker->chunk(source);
            if (!spans_are_valid(raws, idx.count())) {
                result.warnings.push_back(file_path + ": inconsistent chunk spans, degraded to whole-file chunk");
                raws = {whole_file_raw(file_path, idx.count())};
            }
        } catch (const std::exception& e) {
            result.warnings.push_back(file_path + ": chunking failed (" + e.what() +
                                      "), degraded to whole-file chunk");
            raws = {whole_file_raw(file_path, idx.count())};
        }
    } else {
        raws = {whole_file_raw(file_path, idx.count())};
    }

    raws = split_oversize(std::move(raws), options.max_chunk_lines);

    for (const auto& raw : raws) {
        CodeChunk chunk;
        chunk.repo_id = repo_id;
        chunk.file_path = file_path;
        chunk.span = raw.span;
        chunk.kind = raw.kind;
        chunk.symbol_name = raw.symbol_name;
        chunk.enclosing_scope = raw.enclosing_scope;
        chunk.content = slice(source, idx, raw.span.start_line, raw.span.end_line);
        chunk.chunk_id = make_chunk_id(repo_id, file_path, raw.symbol_name, chunk.content);
        result.chunks.push_back(std::move(chunk));
    }
    return result;
}

ChunkerResult semantic_chunk(const WorkspaceHandle& workspace, const std::string& repo_id,
                             const ChunkerOptions& options) {
    namespace fs = std::filesystem;
    const fs::path& root = workspace.root();

    std::vector<std::string> paths;
    for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
         ++it) {
        if (it->is_directory() && it->path().filename() == ".git") {
            it.disable_recursion_pending();
            continue;
        }
        if (!it->is_regular_file()) continue;
        paths.push_back(fs::relative(it->path(), root).generic_string());
    }
    std::sort(paths.begin(), paths.end());

    ChunkerResult result;
    for (const auto& rel : paths) {
        fs::path abs = root / rel;
        std::error_code ec;
        auto size = fs::file_size(abs, ec);
        if (ec || size > options.max_file_bytes) {
            result.warnings.push_back(rel + ": skipped (unreadable or too large)");
            continue;
        }
        std::ifstream in(abs, std::ios::binary);
        std::string source((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (source.find('\0') != std::string::npos) continue;  // binary

        ChunkerResult file_result = chunk_file_content(source, rel, repo_id, options);
        std::move(file_result.chunks.begin(), file_result.chunks.end(),
                  std::back_inserter(result.chunks));
        std::move(file_result.warnings.begin(), file_result.warnings.end(),
                  std::back_inserter(result.warnings));
    }
    return result;
}

}  // namespace deputy::chunk
