#include "deputy/vcs/knowledge.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

namespace deputy::vcs {

namespace {

struct Reference {
    std::size_t position;
    DocSource source;
    std::string key;  // ticket key or page URL
};

// Uppercase project key followed by a number, e.g. PROJ-123.
const std::regex kTicketPattern(R"(\b([A-Z][A-Z0-9]+-[0-9]+)\b)");
// Absolute http(s) URLs; wiki pages are recognized by a /wiki/ path segment.
const std::regex kUrlPattern(R"((https?://[^\s<>()\[\]"']+))");

}  // namespace

KnowledgeResult resolve_knowledge_docs(const std::string& description, TrackerClient& tracker,
                                       WikiClient& wiki) {
    std::vector<Reference> refs;
    std::set<std::string> seen;

    for (auto it = std::sregex_iterator(description.begin(), description.end(), kTicketPattern);
         it != std::sregex_iterator(); ++it) {
        std::string key = (*it)[1].str();
        if (seen.insert("t:" + key).second) {
            refs.push_back({static_cast<std::size_t>(it->position(1)), DocSource::story, key});
        }
    }
    for (auto it = std::sregex_iterator(description.begin(), description.end(), kUrlPattern);
         it != std::sregex_iterator(); ++it) {
        std::string url = (*it)[1].str();
        while (!url.empty() && (url.back() == '.' || url.back() == ',')) url.pop_back();
        if (url.find("/wiki/") == std::string::npos) continue;
        if (seen.insert("w:" + url).second) {
            refs.push_back({static_cast<std::size_t>(it->position(1)), DocSource::approach, url});
        }
    }

    std::stable_sort(refs.begin(), refs.end(),
                     [](const Reference& a, const Reference& b) { return a.position < b.position; });

    KnowledgeResult result;
    for (const auto& ref : refs) {
        try {
            std::optional<KnowledgeDoc> doc = (ref.source == DocSource::story)
                                                  ? tracker.fetch_ticket(ref.key)
                                                  : wiki.fetch_page(ref.key);
            if (doc) {
                doc->source = ref.source;
                if (doc->external_key.empty()) doc->external_key = ref.key;
                result.docs.push_back(std::move(*doc));
            } else {
                result.warnings.push_back("reference not found: " + ref.key);
            }
        } catch (const std::exception& e) {
            result.warnings.push_back("failed to fetch " + ref.key + ": " + e.what());
        }
    }
    return result;
}

}  // namespace deputy::vcs
