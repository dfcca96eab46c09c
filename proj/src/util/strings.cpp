#include "deputy/util/strings.hpp"

#include <cctype>

namespace deputy::util {

std::string trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto start = s.find_first_not_of(ws);
    if (start == std::string_view::npos) return {};
    auto end = s.find_last_not_of(ws);
    return std::string(s.substr(start, end - start + 1));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (true) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(pos));
            break;
        }
        lines.emplace_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::vector<std::string> extract_identifiers(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    auto is_start = [](unsigned char c) { return std::isalpha(c) || c == '_'; };
    auto is_cont = [](unsigned char c) { return std::isalnum(c) || c == '_'; };
    while (i < text.size()) {
        if (is_start(static_cast<unsigned char>(text[i]))) {
            std::size_t j = i + 1;
            while (j < text.size() && is_cont(static_cast<unsigned char>(text[j]))) ++j;
            out.emplace_back(text.substr(i, j - i));
            i = j;
        } else {
            ++i;
        }
    }
    return out;
}

std::vector<std::string> split_identifier(std::string_view ident) {
    std::vector<std::string> parts;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            parts.push_back(to_lower(cur));
            cur.clear();
        }
    };
    for (std::size_t i = 0; i < ident.size(); ++i) {
        char c = ident[i];
        if (c == '_') {
            flush();
            continue;
        }
        bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
        if (upper && !cur.empty()) {
            char prev = cur.back();
            bool prev_upper = std::isupper(static_cast<unsigned char>(prev)) != 0;
            bool next_lower =
                i + 1 < ident.size() && std::islower(static_cast<unsigned char>(ident[i + 1]));
            // aB -> a|B; HTTPServer -> HTTP|Server (split before last upper of a run)
            if (!prev_upper || next_lower) flush();
        }
        cur.push_back(c);
    }
    flush();
    return parts;
}

}  // namespace deputy::util
