#include "deputy/analytics/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "deputy/util/hash.hpp"
#include "deputy/util/strings.hpp"

namespace deputy::analytics {

std::string_view set_label_name(SetLabel label) {
    switch (label) {
        case SetLabel::control1: return "control-1";
        case SetLabel::control2: return "control-2";
        case SetLabel::test: return "test";
    }
    return "?";
}

std::optional<SetLabel> set_label_from_name(std::string_view name) {
    if (name == "control-1" || name == "cs1") return SetLabel::control1;
    if (name == "control-2" || name == "cs2") return SetLabel::control2;
    if (name == "test" || name == "ts") return SetLabel::test;
    return std::nullopt;
}

SetLabel assign_set(const std::string& repo_id, long pr_number) {
    std::uint64_t h = util::stable_hash64(repo_id + "\x1f" + std::to_string(pr_number));
    switch (h % 3) {
        case 0: return SetLabel::control1;
        case 1: return SetLabel::control2;
        default: return SetLabel::test;
    }
}

double avg_review_time(const std::vector<PrRecord>& records) {
    if (records.empty()) throw std::invalid_argument("avg_review_time: empty input");
    double sum = 0.0;
    for (const auto& r : records) sum += r.review_time_hours;
    return sum / static_cast<double>(records.size());
}

double avg_review_time_per_loc(const std::vector<PrRecord>& records) {
    if (records.empty()) throw std::invalid_argument("avg_review_time_per_loc: empty input");
    double sum = 0.0;
    for (const auto& r : records) {
        if (r.changed_loc <= 0) {
            throw std::invalid_argument("avg_review_time_per_loc: record with zero LOC");
        }
        sum += r.review_time_hours / static_cast<double>(r.changed_loc);
    }
    return sum / static_cast<double>(records.size());
}

double median_review_time(const std::vector<PrRecord>& records) {
    if (records.empty()) throw std::invalid_argument("median_review_time: empty input");
    std::vector<double> times;
    times.reserve(records.size());
    for (const auto& r : records) times.push_back(r.review_time_hours);
    std::sort(times.begin(), times.end());
    std::size_t n = times.size();
    if (n % 2 == 1) return times[(n + 1) / 2 - 1];
    return (times[n / 2 - 1] + times[n / 2]) / 2.0;
}

std::vector<PrRecord> trim_outliers(const std::vector<PrRecord>& records) {
    if (records.empty()) return {};
    auto n = static_cast<long>(records.size());

    // rank by changed LOC via a stable index sort; survivors in input order
    std::vector<std::size_t> index(records.size());
    std::iota(index.begin(), index.end(), 0);
    std::stable_sort(index.begin(), index.end(), [&](std::size_t a, std::size_t b) {
        return records[a].changed_loc < records[b].changed_loc;
    });

    long lower_cut = static_cast<long>(std::floor(0.10 * static_cast<double>(n)));
    long upper_cut = static_cast<long>(std::ceil(0.75 * static_cast<double>(n)));

    std::vector<bool> keep(records.size(), false);
    for (long rank = 1; rank <= n; ++rank) {
        if (rank > lower_cut && rank <= upper_cut) keep[index[static_cast<std::size_t>(rank - 1)]] = true;
    }
    std::vector<PrRecord> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (keep[i]) out.push_back(records[i]);
    }
    return out;
}

std::map<std::string, std::array<long, 3>> count_by_repo_set(
    const std::vector<PrRecord>& records) {
    std::map<std::string, std::array<long, 3>> counts;
    for (const auto& r : records) {
        auto [it, inserted] = counts.try_emplace(r.repo_id, std::array<long, 3>{0, 0, 0});
        ++it->second[static_cast<std::size_t>(r.label)];
    }
    return counts;
}

bool repo_balanced(const std::array<long, 3>& counts) {
    long min_count = std::min({counts[0], counts[1], counts[2]});
    bool all_equal = counts[0] == counts[1] && counts[1] == counts[2];
    return min_count >= 10 || all_equal;
}

std::vector<PrRecord> balance_filter(const std::vector<PrRecord>& records) {
    auto counts = count_by_repo_set(records);
    std::vector<PrRecord> out;
    for (const auto& r : records) {
        if (repo_balanced(counts.at(r.repo_id))) out.push_back(r);
    }
    return out;
}

SetStats stats_for(const std::vector<PrRecord>& records) {
    SetStats stats;
    stats.n = static_cast<long>(records.size());
    if (records.empty()) return stats;
    double loc_sum = 0.0;
    for (const auto& r : records) loc_sum += static_cast<double>(r.changed_loc);
    stats.avg_loc = loc_sum / static_cast<double>(records.size());
    stats.avg_review_hours = avg_review_time(records);
    stats.avg_review_hours_per_loc = avg_review_time_per_loc(records);
    stats.median_review_hours = median_review_time(records);
    return stats;
}

std::map<features::SizeClass, std::map<SetLabel, SetStats>> bucket_report(
    const std::vector<PrRecord>& records) {
    std::map<features::SizeClass, std::map<SetLabel, std::vector<PrRecord>>> grouped;
    for (const auto& r : records) {
        grouped[features::size_class_for_loc(r.changed_loc)][r.label].push_back(r);
    }
    std::map<features::SizeClass, std::map<SetLabel, SetStats>> out;
    for (const auto& [size, by_label] : grouped) {
        for (const auto& [label, group] : by_label) {
            out[size][label] = stats_for(group);
        }
    }
    return out;
}

double delta_percent(double test_value, double control_value) {
    return (test_value - control_value) / control_value * 100.0;
}

double pearson_loc_vs_time(const std::vector<PrRecord>& records) {
    auto n = static_cast<double>(records.size());
    if (records.size() < 2) return 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& r : records) {
        sx += static_cast<double>(r.changed_loc);
        sy += r.review_time_hours;
    }
    double mx = sx / n;
    double my = sy / n;
    double cov = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    for (const auto& r : records) {
        double dx = static_cast<double>(r.changed_loc) - mx;
        double dy = r.review_time_hours - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if (vx == 0.0 || vy == 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

namespace {

std::optional<std::time_t> parse_iso_utc(const std::string& text) {
    std::tm tm{};
    int y = 0;
    int mo = 0;
    int d = 0;
    int h = 0;
    int mi = 0;
    int s = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &s) != 6) {
        return std::nullopt;
    }
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = s;
    return timegm(&tm);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

LoadResult load_records(std::istream& in) {
    LoadResult result;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = util::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        auto fields = split_csv(trimmed);
        auto warn = [&](const std::string& what) {
            result.warnings.push_back("line " + std::to_string(line_no) + ": " + what);
        };
        if (fields.size() < 5) {
            warn("expected at least 5 fields");
            continue;
        }
        PrRecord record;
        record.repo_id = util::trim(fields[0]);
        try {
            record.pr_number = std::stol(util::trim(fields[1]));
            record.changed_loc = std::stol(util::trim(fields[2]));
        } catch (...) {
            warn("bad pr-number or changed-loc");
            continue;
        }
        if (record.changed_loc < 1) {
            warn("changed-loc must be >= 1");
            continue;
        }
        std::string hours_field = util::trim(fields[3]);
        if (!hours_field.empty()) {
            try {
                record.review_time_hours = std::stod(hours_field);
            } catch (...) {
                warn("bad review-time-hours");
                continue;
            }
        } else if (fields.size() >= 7) {
            auto ready = parse_iso_utc(util::trim(fields[5]));
            auto approved = parse_iso_utc(util::trim(fields[6]));
            if (!ready || !approved || *approved < *ready) {
                warn("missing hours and unusable timestamps");
                continue;
            }
            record.review_time_hours =
                static_cast<double>(*approved - *ready) / 3600.0;
        } else {
            warn("missing review-time-hours and timestamps");
            continue;
        }
        if (record.review_time_hours < 0 || !std::isfinite(record.review_time_hours)) {
            warn("review-time-hours must be finite and non-negative");
            continue;
        }
        std::string label_field = util::trim(fields[4]);
        if (label_field.empty()) {
            record.label = assign_set(record.repo_id, record.pr_number);
        } else if (auto label = set_label_from_name(label_field)) {
            record.label = *label;
        } else {
            warn("unknown set-label '" + label_field + "'");
            continue;
        }
        result.records.push_back(std::move(record));
    }
    return result;
}

AnalyticsReport build_report(const std::vector<PrRecord>& records) {
    AnalyticsReport report;
    report.input_records = static_cast<long>(records.size());
    auto trimmed = trim_outliers(records);
    report.after_trim = static_cast<long>(trimmed.size());
    auto balanced = balance_filter(trimmed);
    report.after_balance = static_cast<long>(balanced.size());

    std::map<SetLabel, std::vector<PrRecord>> by_label;
    for (const auto& r : balanced) by_label[r.label].push_back(r);
    for (const auto& [label, group] : by_label) {
        report.per_set[label] = stats_for(group);
        report.correlation[label] = pearson_loc_vs_time(group);
    }
    report.buckets = bucket_report(balanced);
    return report;
}

namespace {

std::string fixed(double value, int precision = 2) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << value;
    return out.str();
}

const std::array<SetLabel, 3> kLabels = {SetLabel::control1, SetLabel::control2, SetLabel::test};

}  // namespace

std::string render_report_text(const AnalyticsReport& report) {
    std::ostringstream out;
    out << "records: input " << report.input_records << ", after trim " << report.after_trim
        << ", after balance " << report.after_balance << "\n\n";

    out << std::left << std::setw(12) << "set" << std::right << std::setw(8) << "n"
        << std::setw(12) << "avg-loc" << std::setw(14) << "avg-hours" << std::setw(16)
        << "avg-hrs/loc" << std::setw(14) << "median-hrs" << std::setw(12) << "corr" << "\n";
    for (SetLabel label : kLabels) {
        auto it = report.per_set.find(label);
        if (it == report.per_set.end()) continue;
        const SetStats& s = it->second;
        out << std::left << std::setw(12) << set_label_name(label) << std::right << std::setw(8)
            << s.n << std::setw(12) << fixed(s.avg_loc) << std::setw(14)
            << fixed(s.avg_review_hours) << std::setw(16) << fixed(s.avg_review_hours_per_loc)
            << std::setw(14) << fixed(s.median_review_hours) << std::setw(12)
            << fixed(report.correlation.count(label) ? report.correlation.at(label) : 0.0, 3)
            << "\n";
    }

    auto cs1 = report.per_set.find(SetLabel::control1);
    auto cs2 = report.per_set.find(SetLabel::control2);
    auto ts = report.per_set.find(SetLabel::test);
    if (ts != report.per_set.end()) {
        auto delta_row = [&](const char* name, const SetStats& control) {
            out << std::left << std::setw(12) << name << std::right << std::setw(8) << "-"
                << std::setw(12) << "-" << std::setw(14)
                << fixed(delta_percent(ts->second.avg_review_hours, control.avg_review_hours))
                << std::setw(16)
                << fixed(delta_percent(ts->second.avg_review_hours_per_loc,
                                       control.avg_review_hours_per_loc))
                << std::setw(14)
                << fixed(delta_percent(ts->second.median_review_hours,
                                       control.median_review_hours))
                << std::setw(12) << "-" << "\n";
        };
        if (cs1 != report.per_set.end()) delta_row("ts-vs-cs1 %", cs1->second);
        if (cs2 != report.per_set.end()) delta_row("ts-vs-cs2 %", cs2->second);
    }

    if (!report.buckets.empty()) {
        out << "\n" << std::left << std::setw(12) << "bucket";
        for (SetLabel label : kLabels) out << std::right << std::setw(12) << set_label_name(label);
        out << std::right << std::setw(14) << "ts-cs1 %" << std::setw(14) << "ts-cs2 %"
            << std::setw(10) << "n" << "\n";
        for (const auto& [size, by_label] : report.buckets) {
            out << std::left << std::setw(12) << features::size_class_name(size);
            long total = 0;
            std::array<std::optional<double>, 3> avg;
            for (std::size_t i = 0; i < kLabels.size(); ++i) {
                auto it = by_label.find(kLabels[i]);
                if (it != by_label.end()) {
                    avg[i] = it->second.avg_review_hours;
                    total += it->second.n;
                    out << std::right << std::setw(12) << fixed(*avg[i]);
                } else {
                    out << std::right << std::setw(12) << "-";
                }
            }
            auto delta_or_dash = [&](std::optional<double> control) {
                if (avg[2] && control && *control != 0.0) {
                    return fixed(delta_percent(*avg[2], *control));
                }
                return std::string("-");
            };
            out << std::right << std::setw(14) << delta_or_dash(avg[0]) << std::setw(14)
                << delta_or_dash(avg[1]) << std::setw(10) << total << "\n";
        }
    }
    return out.str();
}

std::string render_report_json(const AnalyticsReport& report) {
    nlohmann::json root;
    root["records"] = {{"input", report.input_records},
                       {"after_trim", report.after_trim},
                       {"after_balance", report.after_balance}};
    for (SetLabel label : kLabels) {
        auto it = report.per_set.find(label);
        if (it == report.per_set.end()) continue;
        const SetStats& s = it->second;
        nlohmann::json entry = {
            {"n", s.n},
            {"avg_loc", s.avg_loc},
            {"avg_review_hours", s.avg_review_hours},
            {"avg_review_hours_per_loc", s.avg_review_hours_per_loc},
            {"median_review_hours", s.median_review_hours},
        };
        if (report.correlation.count(label)) {
            entry["correlation_loc_vs_hours"] = report.correlation.at(label);
        }
        root["sets"][std::string(set_label_name(label))] = entry;
    }
    for (const auto& [size, by_label] : report.buckets) {
        nlohmann::json bucket;
        for (const auto& [label, s] : by_label) {
            bucket[std::string(set_label_name(label))] = {
                {"n", s.n},
                {"avg_review_hours", s.avg_review_hours},
            };
        }
        root["buckets"][std::string(features::size_class_name(size))] = bucket;
    }
    return root.dump(2);
}

}  // namespace deputy::analytics
