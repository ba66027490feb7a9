#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "reident/matcher.hpp"
#include "reident/model.hpp"

namespace reident {

struct AuditConfig {
    MatchConfig match;
    std::vector<std::string> sensitive_prefixes;
    int threads = 1;
};

struct CaseResult {
    std::string ext_id;
    EnrichmentStatus enrichment = EnrichmentStatus::NameMissing;
    MatchOutcome outcome;
    bool sensitive = false;  // unique match whose record carries a flagged diagnosis
};

struct AuditReport {
    std::vector<CaseResult> cases;  // sorted by ext_id

    std::size_t total = 0;
    std::size_t unique = 0;
    std::size_t ambiguous = 0;
    std::size_t no_match = 0;
    std::size_t conflict = 0;
    std::size_t sensitive_unique = 0;
    std::map<int, std::size_t> unique_by_level;
    std::map<std::string, std::size_t> unique_by_dropped;

    double unique_fraction() const {
        return total == 0 ? 0.0 : static_cast<double>(unique) / static_cast<double>(total);
    }
};

/// Full pipeline over one external dataset: public-records enrichment, then
/// relaxation matching per case. Case order and tallies are independent of
/// thread count.
AuditReport run_audit(std::span<const ExternalRecord> externals, const MatchIndex& index,
                      const PublicRecordsTable& public_records, const AuditConfig& config);

/// CSV with one row per audited case.
void write_case_table(std::ostream& out, const AuditReport& report);

/// Human-readable tallies with fixed-precision percentages.
void write_summary(std::ostream& out, const AuditReport& report);

/// Machine-readable report; stable key order and formatting.
void write_json_report(std::ostream& out, const AuditReport& report);

}  // namespace reident
