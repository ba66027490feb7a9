#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reident/matcher.hpp"
#include "reident/model.hpp"
#include "reident/privacy.hpp"

namespace reident {

/// Unrecoverable input problem: malformed header, duplicate ids, broken CSV
/// structure. Row-level value problems are reported, not thrown.
class ParseFatal : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RowError {
    std::size_t record;  // 1-based CSV record number (header is record 1)
    std::string reason;
};

struct ParseReport {
    std::size_t rows_seen = 0;  // data rows, excluding the header
    std::size_t rows_kept = 0;
    std::vector<RowError> errors;
    bool clean() const { return errors.empty(); }
};

/// Optional header renaming: file column name -> canonical field name.
/// Canonical names always map to themselves unless redirected; columns that
/// resolve to no canonical field are ignored.
using ColumnMap = std::map<std::string, std::string>;

struct HospitalParseResult {
    std::vector<HospitalRecord> records;
    ParseReport report;
};

struct ExternalParseResult {
    std::vector<ExternalRecord> records;
    ParseReport report;
};

struct PublicRecordsParseResult {
    PublicRecordsTable table;
    ParseReport report;
};

HospitalParseResult parse_hospital_dataset(std::istream& in, const ColumnMap& columns = {});
ExternalParseResult parse_external_dataset(std::istream& in, const ColumnMap& columns = {});
PublicRecordsParseResult parse_public_records(std::istream& in, const ColumnMap& columns = {});

CodeDictionary parse_code_dictionary(std::istream& in);
HospitalGroups parse_group_aliases(std::istream& in);
IncidentMap parse_incident_map(std::istream& in);
ZipPopulationTable parse_population_table(std::istream& in);

/// One prefix per line; blank lines and '#' comments ignored.
std::vector<std::string> parse_sensitive_prefixes(std::istream& in);

// Canonical serializers. Output is byte-stable: parsing it back and
// re-serializing reproduces the identical file.
void write_hospital_dataset(std::ostream& out, std::span<const HospitalRecord> records);
void write_external_dataset(std::ostream& out, std::span<const ExternalRecord> records);
void write_public_records(std::ostream& out, const PublicRecordsTable& table);
void write_population_table(std::ostream& out, const ZipPopulationTable& pop);

/// "71708.47" from cents; always two decimals.
std::string format_cents(std::int64_t cents);
/// Strict money parse, at most two decimals; throws std::invalid_argument.
std::int64_t parse_cents(std::string_view text);

}  // namespace reident
