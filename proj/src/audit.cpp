#include "reident/audit.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ostream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "reident/csv.hpp"
#include "reident/privacy.hpp"

namespace reident {
namespace {

std::string percent(std::size_t part, std::size_t whole) {
    double value = whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", value);
    return buf;
}

}  // namespace

AuditReport run_audit(std::span<const ExternalRecord> externals, const MatchIndex& index,
                      const PublicRecordsTable& public_records, const AuditConfig& config) {
    std::unordered_map<std::string_view, const HospitalRecord*> by_id;
    by_id.reserve(index.records().size());
    for (const auto& rec : index.records()) by_id.emplace(rec.record_id, &rec);

    std::vector<CaseResult> cases(externals.size());
    auto run_case = [&](std::size_t i) {
        const ExternalRecord& raw = externals[i];
        CaseResult result;
        result.ext_id = raw.ext_id;
        EnrichResult enriched = enrich(raw, public_records);
        result.enrichment = enriched.status;
        result.outcome = index.match_with_relaxation(enriched.record, config.match);
        if (result.outcome.classification == MatchClass::Unique) {
            const HospitalRecord* rec = by_id.at(result.outcome.candidate_ids.front());
            result.sensitive = is_sensitive(*rec, config.sensitive_prefixes);
        }
        cases[i] = std::move(result);
    };

    int threads = std::max(1, config.threads);
    if (threads == 1 || externals.size() < 2) {
        for (std::size_t i = 0; i < externals.size(); ++i) run_case(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < externals.size(); i = next.fetch_add(1))
                run_case(i);
        };
        std::vector<std::thread> pool;
        std::size_t spawn = std::min(static_cast<std::size_t>(threads), externals.size());
        pool.reserve(spawn);
        for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::sort(cases.begin(), cases.end(),
              [](const CaseResult& a, const CaseResult& b) { return a.ext_id < b.ext_id; });

    AuditReport report;
    report.cases = std::move(cases);
    report.total = report.cases.size();
    for (const auto& c : report.cases) {
        switch (c.outcome.classification) {
            case MatchClass::Unique:
                ++report.unique;
                ++report.unique_by_level[c.outcome.relaxation_level];
                ++report.unique_by_dropped[c.outcome.dropped.to_string()];
                if (c.sensitive) ++report.sensitive_unique;
                break;
            case MatchClass::Ambiguous: ++report.ambiguous; break;
            case MatchClass::NoMatch: ++report.no_match; break;
            case MatchClass::Conflict: ++report.conflict; break;
        }
    }
    return report;
}

void write_case_table(std::ostream& out, const AuditReport& report) {
    write_csv_row(out, {"ext_id", "classification", "relaxation_level", "dropped_fields",
                        "matched_record_id", "candidate_count", "sensitive_flag"});
    for (const auto& c : report.cases) {
        const std::string* unique_id = c.outcome.unique_id();
        write_csv_row(out, {c.ext_id, match_class_name(c.outcome.classification),
                            std::to_string(c.outcome.relaxation_level),
                            c.outcome.dropped.to_string(), unique_id ? *unique_id : "",
                            std::to_string(c.outcome.candidate_count()),
                            c.sensitive ? "1" : "0"});
    }
}

void write_summary(std::ostream& out, const AuditReport& report) {
    out << "externals audited: " << report.total << '\n';
    out << "unique matches:    " << report.unique << " (" << percent(report.unique, report.total)
        << ")\n";
    for (const auto& [level, count] : report.unique_by_level)
        out << "  at relaxation level " << level << ": " << count << '\n';
    for (const auto& [dropped, count] : report.unique_by_dropped)
        out << "  dropped " << dropped << ": " << count << '\n';
    out << "ambiguous:         " << report.ambiguous << " ("
        << percent(report.ambiguous, report.total) << ")\n";
    out << "no match:          " << report.no_match << " ("
        << percent(report.no_match, report.total) << ")\n";
    out << "conflicts:         " << report.conflict << " ("
        << percent(report.conflict, report.total) << ")\n";
    out << "sensitive unique:  " << report.sensitive_unique << '\n';
}

void write_json_report(std::ostream& out, const AuditReport& report) {
    nlohmann::json summary;
    summary["total"] = report.total;
    summary["unique"] = report.unique;
    summary["ambiguous"] = report.ambiguous;
    summary["no_match"] = report.no_match;
    summary["conflict"] = report.conflict;
    summary["sensitive_unique"] = report.sensitive_unique;
    summary["unique_fraction"] = report.unique_fraction();
    nlohmann::json by_level = nlohmann::json::object();
    for (const auto& [level, count] : report.unique_by_level)
        by_level[std::to_string(level)] = count;
    summary["unique_by_level"] = std::move(by_level);
    nlohmann::json by_dropped = nlohmann::json::object();
    for (const auto& [dropped, count] : report.unique_by_dropped) by_dropped[dropped] = count;
    summary["unique_by_dropped"] = std::move(by_dropped);

    nlohmann::json cases = nlohmann::json::array();
    for (const auto& c : report.cases) {
        nlohmann::json entry;
        entry["ext_id"] = c.ext_id;
        entry["enrichment"] = enrichment_status_name(c.enrichment);
        entry["classification"] = match_class_name(c.outcome.classification);
        entry["relaxation_level"] = c.outcome.relaxation_level;
        entry["dropped_fields"] = c.outcome.dropped.to_string();
        entry["candidates"] = c.outcome.candidate_ids;
        entry["sensitive"] = c.sensitive;
        cases.push_back(std::move(entry));
    }

    nlohmann::json doc;
    doc["summary"] = std::move(summary);
    doc["cases"] = std::move(cases);
    out << doc.dump(2) << '\n';
}

}  // namespace reident
