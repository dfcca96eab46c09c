#include "deputy/blend/blending.hpp"

#include <algorithm>
#include <set>

namespace deputy::blend {

using agents::AgentKind;
using agents::ReviewComment;

std::vector<ReviewComment> confidence_filter(const std::vector<ReviewComment>& comments,
                                             const ThresholdMap& thresholds,
                                             double default_threshold,
                                             std::vector<std::string>* warnings) {
    std::vector<ReviewComment> kept;
    std::set<AgentKind> warned;
    for (const auto& comment : comments) {
        double threshold = default_threshold;
        auto it = thresholds.find(comment.agent);
        if (it != thresholds.end()) {
            threshold = it->second;
        } else if (warnings != nullptr && warned.insert(comment.agent).second) {
            warnings->push_back("no confidence threshold configured for agent '" +
                                std::string(agents::agent_name(comment.agent)) +
                                "', default applied");
        }
        if (comment.confidence_score >= threshold) kept.push_back(comment);
    }
    return kept;
}

namespace {

bool higher_confidence(const ReviewComment& a, const ReviewComment& b) {
    if (a.confidence_score != b.confidence_score) return a.confidence_score > b.confidence_score;
    return agents::agent_index(a.agent) < agents::agent_index(b.agent);
}

std::string deterministic_merge_text(const std::vector<const ReviewComment*>& group) {
    std::string out = std::to_string(group.size()) + " reviewers flagged this line:\n";
    for (const ReviewComment* member : group) {
        out += "- [" + std::string(agents::agent_name(member->agent)) + "] " +
               member->description + "\n";
    }
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

std::string model_merge_text(const std::vector<const ReviewComment*>& group,
                             llm::Gateway& gateway, const std::string& model_id) {
    llm::ModelRequest request;
    request.model_id = model_id;
    request.system_prompt =
        "Task: overlap-summary\n\nSeveral reviewers commented on the same line. Merge their "
        "comments into one concise comment that keeps every distinct point.";
    for (const ReviewComment* member : group) {
        request.user_prompt += "- [" + std::string(agents::agent_name(member->agent)) + "] " +
                               member->description + "\n";
    }
    return gateway.complete(request).text;
}

}  // namespace

std::vector<ReviewComment> overlap_summarize(const std::vector<ReviewComment>& comments,
                                             llm::Gateway* gateway,
                                             const std::string& model_id) {
    // group by (file, line), preserving first-appearance order of groups
    std::vector<std::pair<std::string, long>> order;
    std::map<std::pair<std::string, long>, std::vector<const ReviewComment*>> groups;
    for (const auto& comment : comments) {
        auto key = std::make_pair(comment.file_path, comment.line_number);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(&comment);
    }

    std::vector<ReviewComment> out;
    out.reserve(order.size());
    for (const auto& key : order) {
        const auto& group = groups[key];
        if (group.size() == 1) {
            out.push_back(*group.front());
            continue;
        }
        const ReviewComment* best = group.front();
        for (const ReviewComment* member : group) {
            if (higher_confidence(*member, *best)) best = member;
        }
        ReviewComment merged = *best;  // bucket, corrective code, agent, location
        if (gateway != nullptr) {
            try {
                merged.description = model_merge_text(group, *gateway, model_id);
            } catch (const std::exception&) {
                merged.description = deterministic_merge_text(group);
            }
        } else {
            merged.description = deterministic_merge_text(group);
        }
        out.push_back(std::move(merged));
    }
    return out;
}

std::vector<BlendingDimension> default_dimensions(const ThresholdMap& thresholds,
                                                  const BlendOptions& options) {
    std::vector<BlendingDimension> dims;

    BlendingDimension confidence;
    confidence.name = "confidence-filter";
    confidence.kind = BlendingDimension::Kind::filter;
    confidence.order = 10;
    double default_threshold = options.default_threshold;
    confidence.apply = [thresholds, default_threshold](const std::vector<ReviewComment>& in) {
        return confidence_filter(in, thresholds, default_threshold);
    };
    dims.push_back(std::move(confidence));

    BlendingDimension overlap;
    overlap.name = "overlap-summarize";
    overlap.kind = BlendingDimension::Kind::transform;
    overlap.order = 20;
    llm::Gateway* gateway = options.summarize_gateway;
    std::string model_id = options.model_id;
    overlap.apply = [gateway, model_id](const std::vector<ReviewComment>& in) {
        return overlap_summarize(in, gateway, model_id);
    };
    dims.push_back(std::move(overlap));

    return dims;
}

ReviewReport blend(const std::vector<agents::AgentResult>& results,
                   std::vector<BlendingDimension> dims, const ThresholdMap& thresholds,
                   const BlendOptions& options) {
    ReviewReport report;

    std::vector<ReviewComment> comments;
    for (const auto& result : results) {
        comments.insert(comments.end(), result.comments.begin(), result.comments.end());
    }
    // thresholds passed explicitly win over whatever the dimension closures
    // captured, so callers can blend with ad-hoc thresholds
    std::vector<std::string> warnings;
    for (auto& dim : dims) {
        if (dim.name == "confidence-filter") {
            double default_threshold = options.default_threshold;
            ThresholdMap map = thresholds;
            auto* sink = &warnings;
            dim.apply = [map, default_threshold, sink](const std::vector<ReviewComment>& in) {
                return confidence_filter(in, map, default_threshold, sink);
            };
        }
    }

    std::stable_sort(dims.begin(), dims.end(),
                     [](const BlendingDimension& a, const BlendingDimension& b) {
                         return a.order < b.order;
                     });
    for (const auto& dim : dims) {
        auto before = comments.size();
        comments = dim.apply(comments);
        report.dropped_by_dimension[dim.name] =
            static_cast<long>(before) - static_cast<long>(comments.size());
    }
    report.comments = std::move(comments);
    report.warnings = std::move(warnings);
    return report;
}

}  // namespace deputy::blend
