#include "deputy/agents/xml.hpp"

#include <cctype>
#include <charconv>
#include <optional>

#include "deputy/util/strings.hpp"

namespace deputy::agents {

namespace {

struct TagBlock {
    std::string_view inner;
    std::size_t end;  // offset just past the closing tag (or text end if unterminated)
    bool terminated = true;
};

// Locates <tag ...>inner</tag> starting at `from`. Attribute-tolerant,
// case-sensitive. Unterminated elements run to the end of the text.
std::optional<TagBlock> find_element(std::string_view text, std::string_view tag,
                                     std::size_t from = 0) {
    std::string open = "<" + std::string(tag);
    std::size_t pos = from;
    while (true) {
        pos = text.find(open, pos);
        if (pos == std::string_view::npos) return std::nullopt;
        std::size_t after = pos + open.size();
        if (after < text.size() && (text[after] == '>' || std::isspace(static_cast<unsigned char>(text[after])))) {
            break;
        }
        pos = after;  // e.g. "<reviewer" while looking for "<review"
    }
    std::size_t gt = text.find('>', pos);
    if (gt == std::string_view::npos) return std::nullopt;
    std::size_t inner_start = gt + 1;

    std::string close = "</" + std::string(tag) + ">";
    std::size_t close_pos = text.find(close, inner_start);
    if (close_pos == std::string_view::npos) {
        return TagBlock{text.substr(inner_start), text.size(), false};
    }
    return TagBlock{text.substr(inner_start, close_pos - inner_start), close_pos + close.size(),
                    true};
}

std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        if (raw[i] != '&') {
            out.push_back(raw[i++]);
            continue;
        }
        auto semi = raw.find(';', i);
        if (semi == std::string_view::npos || semi - i > 8) {
            out.push_back(raw[i++]);
            continue;
        }
        std::string_view entity = raw.substr(i + 1, semi - i - 1);
        if (entity == "lt") {
            out.push_back('<');
        } else if (entity == "gt") {
            out.push_back('>');
        } else if (entity == "amp") {
            out.push_back('&');
        } else if (entity == "quot") {
            out.push_back('"');
        } else if (entity == "apos") {
            out.push_back('\'');
        } else if (!entity.empty() && entity[0] == '#') {
            long code = 0;
            auto digits = entity.substr(1);
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), code);
            if (ec == std::errc() && ptr == digits.data() + digits.size() && code > 0 &&
                code < 128) {
                out.push_back(static_cast<char>(code));
            } else {
                out.append(raw.substr(i, semi - i + 1));
            }
        } else {
            out.append(raw.substr(i, semi - i + 1));
            i = semi + 1;
            continue;
        }
        i = semi + 1;
    }
    return out;
}

std::optional<std::string> field_of(std::string_view comment, std::string_view tag) {
    auto block = find_element(comment, tag);
    if (!block || !block->terminated) return std::nullopt;
    return util::trim(decode_entities(block->inner));
}

std::optional<long> parse_positive_long(const std::string& s) {
    if (s.empty()) return std::nullopt;
    long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || value <= 0) return std::nullopt;
    return value;
}

std::optional<double> parse_real(const std::string& s) {
    if (s.empty()) return std::nullopt;
    try {
        std::size_t used = 0;
        double value = std::stod(s, &used);
        if (used != s.size()) return std::nullopt;
        return value;
    } catch (...) {
        return std::nullopt;
    }
}

}  // namespace

XmlParseResult parse_agent_xml(std::string_view text) {
    auto review = find_element(text, "review");
    if (!review) throw XmlParseError("missing <review> root");

    XmlParseResult result;
    if (!review->terminated) {
        result.warnings.push_back("unterminated <review> element, parsing to end of text");
    }

    // <comments> wrapper is the schema, but tolerate comments directly under
    // the root
    std::string_view body = review->inner;
    if (auto comments = find_element(body, "comments")) {
        if (!comments->terminated) {
            result.warnings.push_back("unterminated <comments> element");
        }
        body = comments->inner;
    }

    std::size_t pos = 0;
    int ordinal = 0;
    while (true) {
        auto element = find_element(body, "comment", pos);
        if (!element) break;
        ++ordinal;
        if (!element->terminated) {
            result.warnings.push_back("comment " + std::to_string(ordinal) +
                                      ": unterminated <comment> element, skipped");
            break;
        }
        pos = element->end;
        std::string_view comment_xml = element->inner;

        auto describe = [&](const std::string& what) {
            result.warnings.push_back("comment " + std::to_string(ordinal) + ": " + what +
                                      ", skipped");
        };

        auto description = field_of(comment_xml, "description");
        auto file_path = field_of(comment_xml, "file_path");
        auto line_raw = field_of(comment_xml, "line_number");
        auto confidence_raw = field_of(comment_xml, "confidence_score");
        auto bucket = field_of(comment_xml, "bucket");

        if (!description || description->empty()) {
            describe("missing description");
            continue;
        }
        if (!file_path || file_path->empty()) {
            describe("missing file_path");
            continue;
        }
        if (!line_raw) {
            describe("missing line_number");
            continue;
        }
        if (!confidence_raw) {
            describe("missing confidence_score");
            continue;
        }
        if (!bucket || bucket->empty()) {
            describe("missing bucket");
            continue;
        }
        auto line_number = parse_positive_long(*line_raw);
        if (!line_number) {
            describe("line_number is not a positive integer (\"" + *line_raw + "\")");
            continue;
        }
        auto confidence = parse_real(*confidence_raw);
        if (!confidence) {
            describe("confidence_score is not a number (\"" + *confidence_raw + "\")");
            continue;
        }
        if (*confidence < 0.0 || *confidence > 1.0) {
            result.warnings.push_back("comment " + std::to_string(ordinal) +
                                      ": confidence_score " + *confidence_raw +
                                      " outside [0,1], clamped");
            *confidence = std::min(1.0, std::max(0.0, *confidence));
        }

        ReviewComment comment;
        comment.description = *description;
        comment.file_path = *file_path;
        comment.line_number = *line_number;
        comment.confidence_score = *confidence;
        comment.bucket = *bucket;
        if (auto corrective = field_of(comment_xml, "corrective_code");
            corrective && !corrective->empty()) {
            comment.corrective_code = *corrective;
        }
        result.comments.push_back(std::move(comment));
    }
    return result;
}

}  // namespace deputy::agents
