#include "deputy/retrieval/query.hpp"

#include <set>

#include "deputy/util/strings.hpp"

namespace deputy::retrieval {

std::vector<std::string> identifier_subtokens_with_repeats(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& ident : util::extract_identifiers(text)) {
        for (auto& part : util::split_identifier(ident)) {
            out.push_back(std::move(part));
        }
    }
    return out;
}

std::vector<std::string> identifier_subtokens(const std::string& text) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (auto& token : identifier_subtokens_with_repeats(text)) {
        if (seen.insert(token).second) out.push_back(std::move(token));
    }
    return out;
}

RetrievalQuery build_retrieval_query(const std::string& repo_id, const vcs::UnifiedDiff& diff) {
    RetrievalQuery query;
    query.repo_id = repo_id;
    query.diff = diff;
    query.identifiers = identifier_subtokens(vcs::hunk_lines_text(diff));
    query.query_text = vcs::changed_lines_text(diff);
    return query;
}

}  // namespace deputy::retrieval
