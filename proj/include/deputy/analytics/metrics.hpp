#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deputy/features/summary.hpp"

namespace deputy::analytics {

enum class SetLabel { control1, control2, test };

std::string_view set_label_name(SetLabel label);
std::optional<SetLabel> set_label_from_name(std::string_view name);

struct PrRecord {
    std::string repo_id;
    long pr_number = 0;
    long changed_loc = 1;
    double review_time_hours = 0.0;
    SetLabel label = SetLabel::control1;
};

/// Deterministic three-way experiment assignment: stable hash of
/// (repo, pr) mod 3. Uniform to within ±1% at n=30k.
SetLabel assign_set(const std::string& repo_id, long pr_number);

/// Mean review time (hours).
double avg_review_time(const std::vector<PrRecord>& records);

/// Mean of per-record time/LOC ratios — NOT total time over total LOC.
double avg_review_time_per_loc(const std::vector<PrRecord>& records);

/// Median over sorted times; even n averages the two middle values.
double median_review_time(const std::vector<PrRecord>& records);

/// Outlier trim on size rank (nearest-rank percentiles): ranked by
/// changed LOC, records at rank <= floor(0.10 n) and above rank
/// ceil(0.75 n) are dropped. Survivors keep their input order. Single
/// application only; a lone record survives.
std::vector<PrRecord> trim_outliers(const std::vector<PrRecord>& records);

/// Per-set PR counts keyed by repo, in label order (control1, control2, test).
std::map<std::string, std::array<long, 3>> count_by_repo_set(const std::vector<PrRecord>& records);

/// A repo is balanced iff every set has at least 10 PRs or all three counts
/// are equal.
bool repo_balanced(const std::array<long, 3>& counts);

/// Keeps only records of balanced repos.
std::vector<PrRecord> balance_filter(const std::vector<PrRecord>& records);

struct SetStats {
    long n = 0;
    double avg_loc = 0.0;
    double avg_review_hours = 0.0;
    double avg_review_hours_per_loc = 0.0;
    double median_review_hours = 0.0;
};

SetStats stats_for(const std::vector<PrRecord>& records);

/// Per (size-class, set) statistics; empty cells omitted.
std::map<features::SizeClass, std::map<SetLabel, SetStats>> bucket_report(
    const std::vector<PrRecord>& records);

/// (test - control) / control * 100.
double delta_percent(double test_value, double control_value);

/// Pearson correlation of changed LOC vs review hours; 0 for degenerate
/// inputs.
double pearson_loc_vs_time(const std::vector<PrRecord>& records);

// --- ingestion + report ------------------------------------------------------

struct LoadResult {
    std::vector<PrRecord> records;
    std::vector<std::string> warnings;
};

/// One record per line:
///   repo-id,pr-number,changed-loc,review-time-hours,set-label,ready-at,approved-at
/// Review time falls back to approved-at minus ready-at (ISO-8601 UTC) when
/// the hours field is empty; an empty set-label falls back to assign_set.
/// '#' lines are comments.
LoadResult load_records(std::istream& in);

struct AnalyticsReport {
    std::map<SetLabel, SetStats> per_set;
    std::map<SetLabel, double> correlation;
    std::map<features::SizeClass, std::map<SetLabel, SetStats>> buckets;
    long input_records = 0;
    long after_trim = 0;
    long after_balance = 0;
};

/// trim -> balance -> stats, in that documented order.
AnalyticsReport build_report(const std::vector<PrRecord>& records);

std::string render_report_text(const AnalyticsReport& report);
std::string render_report_json(const AnalyticsReport& report);

}  // namespace deputy::analytics
