#include "deputy/vcs/diff.hpp"

#include <algorithm>
#include <charconv>

#include "deputy/util/strings.hpp"

namespace deputy::vcs {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

std::string strip_git_prefix(std::string_view path) {
    if (path == "/dev/null") return std::string(path);
    if (starts_with(path, "a/") || starts_with(path, "b/")) path.remove_prefix(2);
    return std::string(path);
}

// "--- a/some/path" or "+++ b/some/path", possibly followed by a tab + metadata.
std::string parse_marker_path(std::string_view line) {
    line.remove_prefix(4);
    auto tab = line.find('\t');
    if (tab != std::string_view::npos) line = line.substr(0, tab);
    return strip_git_prefix(line);
}

bool parse_long(std::string_view s, long& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

// "@@ -old[,cnt] +new[,cnt] @@ ..." -> four numbers. Counts default to 1.
bool parse_hunk_header(std::string_view line, Hunk& hunk) {
    if (!starts_with(line, "@@ -")) return false;
    auto rest = line.substr(4);
    auto plus = rest.find(" +");
    if (plus == std::string_view::npos) return false;
    auto old_part = rest.substr(0, plus);
    rest = rest.substr(plus + 2);
    auto end = rest.find(" @@");
    if (end == std::string_view::npos) return false;
    auto new_part = rest.substr(0, end);

    auto parse_range = [](std::string_view part, long& start, long& count) {
        auto comma = part.find(',');
        if (comma == std::string_view::npos) {
            count = 1;
            return parse_long(part, start);
        }
        return parse_long(part.substr(0, comma), start) &&
               parse_long(part.substr(comma + 1), count);
    };
    return parse_range(old_part, hunk.old_start, hunk.old_count) &&
           parse_range(new_part, hunk.new_start, hunk.new_count);
}

void validate_hunk(const Hunk& hunk) {
    long old_seen = 0;
    long new_seen = 0;
    for (const auto& line : hunk.lines) {
        switch (line.kind) {
            case LineKind::context:
                ++old_seen;
                ++new_seen;
                break;
            case LineKind::added:
                ++new_seen;
                break;
            case LineKind::removed:
                ++old_seen;
                break;
        }
    }
    if (old_seen != hunk.old_count || new_seen != hunk.new_count) {
        throw DiffParseError("hunk line counts do not match header: " + hunk.header);
    }
}

}  // namespace

UnifiedDiff parse_unified_diff(std::string_view text) {
    UnifiedDiff diff;
    if (text.empty()) return diff;
    diff.trailing_newline = text.back() == '\n';

    auto lines = util::split_lines(text);
    if (!lines.empty() && lines.back().empty() && diff.trailing_newline) lines.pop_back();

    FileDiff* file = nullptr;
    std::size_t i = 0;
    while (i < lines.size()) {
        const std::string& line = lines[i];
        if (starts_with(line, "diff ")) {
            diff.files.emplace_back();
            file = &diff.files.back();
            file->header_lines.push_back(line);
            ++i;
            continue;
        }
        if (file == nullptr) {
            // Tolerate prologue text (e.g. command banners) only if it never
            // looks like diff content.
            if (starts_with(line, "--- ") || starts_with(line, "@@ ")) {
                diff.files.emplace_back();
                file = &diff.files.back();
                continue;
            }
            throw DiffParseError("unexpected line before first file header: " + line);
        }
        if (starts_with(line, "@@ ")) {
            Hunk hunk;
            if (!parse_hunk_header(line, hunk)) {
                throw DiffParseError("malformed hunk header: " + line);
            }
            hunk.header = line;
            ++i;
            long old_rem = hunk.old_count;
            long new_rem = hunk.new_count;
            while (i < lines.size() && (old_rem > 0 || new_rem > 0)) {
                const std::string& body = lines[i];
                if (!body.empty() && body[0] == '\\') {
                    hunk.raw.push_back(body);  // "\ No newline at end of file"
                    ++i;
                    continue;
                }
                DiffLine dl;
                char marker = body.empty() ? ' ' : body[0];
                switch (marker) {
                    case '+':
                        dl.kind = LineKind::added;
                        --new_rem;
                        break;
                    case '-':
                        dl.kind = LineKind::removed;
                        --old_rem;
                        break;
                    case ' ':
                        dl.kind = LineKind::context;
                        --old_rem;
                        --new_rem;
                        break;
                    default:
                        throw DiffParseError("unexpected hunk body line: " + body);
                }
                dl.text = body.empty() ? std::string() : body.substr(1);
                hunk.lines.push_back(std::move(dl));
                hunk.raw.push_back(body);
                ++i;
            }
            // trailing no-newline marker after the last counted line
            while (i < lines.size() && !lines[i].empty() && lines[i][0] == '\\') {
                hunk.raw.push_back(lines[i]);
                ++i;
            }
            validate_hunk(hunk);
            file->hunks.push_back(std::move(hunk));
            continue;
        }
        if (!file->hunks.empty()) {
            if (starts_with(line, "--- ")) {
                // plain unified diff without "diff" separators
                diff.files.emplace_back();
                file = &diff.files.back();
                continue;
            }
            throw DiffParseError("unexpected line after hunks: " + line);
        }
        if (starts_with(line, "--- ")) {
            file->old_path = parse_marker_path(line);
        } else if (starts_with(line, "+++ ")) {
            file->new_path = parse_marker_path(line);
        } else if (starts_with(line, "Binary files ") || line == "GIT binary patch") {
            file->binary = true;
        }
        file->header_lines.push_back(line);
        ++i;
    }

    for (auto& f : diff.files) {
        f.path = (f.new_path.empty() || f.new_path == "/dev/null") ? f.old_path : f.new_path;
        if (f.path.empty() && !f.header_lines.empty()) {
            // fall back to "diff --git a/x b/y"
            const std::string& git_line = f.header_lines.front();
            auto b_pos = git_line.rfind(" b/");
            if (starts_with(git_line, "diff --git ") && b_pos != std::string::npos) {
                f.path = git_line.substr(b_pos + 3);
            }
        }
    }
    return diff;
}

std::string serialize_diff(const UnifiedDiff& diff) {
    std::vector<std::string> lines;
    for (const auto& file : diff.files) {
        for (const auto& h : file.header_lines) lines.push_back(h);
        for (const auto& hunk : file.hunks) {
            lines.push_back(hunk.header);
            for (const auto& raw : hunk.raw) lines.push_back(raw);
        }
    }
    if (lines.empty()) return {};
    std::string out = util::join(lines, "\n");
    if (diff.trailing_newline) out += '\n';
    return out;
}

long changed_loc(const UnifiedDiff& diff) {
    long total = 0;
    for (const auto& file : diff.files) {
        for (const auto& hunk : file.hunks) {
            for (const auto& line : hunk.lines) {
                if (line.kind != LineKind::context) ++total;
            }
        }
    }
    return total;
}

std::vector<std::pair<long, long>> new_file_ranges(const FileDiff& file) {
    std::vector<std::pair<long, long>> ranges;
    for (const auto& hunk : file.hunks) {
        if (hunk.new_count > 0) {
            ranges.emplace_back(hunk.new_start, hunk.new_start + hunk.new_count - 1);
        }
    }
    return ranges;
}

bool diff_touches_file(const UnifiedDiff& diff, std::string_view path) {
    return std::any_of(diff.files.begin(), diff.files.end(),
                       [&](const FileDiff& f) { return f.path == path; });
}

bool line_visible_in_new(const UnifiedDiff& diff, std::string_view path, long line) {
    for (const auto& file : diff.files) {
        if (file.path != path) continue;
        for (const auto& hunk : file.hunks) {
            long n = hunk.new_start;
            for (const auto& dl : hunk.lines) {
                if (dl.kind == LineKind::removed) continue;
                if (n == line) return true;
                ++n;
            }
        }
    }
    return false;
}

bool span_within_changes(const UnifiedDiff& diff, std::string_view path, long start, long end) {
    for (const auto& file : diff.files) {
        if (file.path != path) continue;
        auto ranges = new_file_ranges(file);
        // every line of [start,end] must fall inside some hunk range
        for (long line = start; line <= end; ++line) {
            bool covered = std::any_of(ranges.begin(), ranges.end(), [&](const auto& r) {
                return line >= r.first && line <= r.second;
            });
            if (!covered) return false;
        }
        return start <= end && !ranges.empty();
    }
    return false;
}

std::string changed_lines_text(const UnifiedDiff& diff) {
    std::vector<std::string> out;
    for (const auto& file : diff.files) {
        for (const auto& hunk : file.hunks) {
            for (const auto& line : hunk.lines) {
                if (line.kind != LineKind::context) out.push_back(line.text);
            }
        }
    }
    return util::join(out, "\n");
}

std::string hunk_lines_text(const UnifiedDiff& diff) {
    std::vector<std::string> out;
    for (const auto& file : diff.files) {
        for (const auto& hunk : file.hunks) {
            for (const auto& line : hunk.lines) out.push_back(line.text);
        }
    }
    return util::join(out, "\n");
}

}  // namespace deputy::vcs
