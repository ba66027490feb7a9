#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "reident/model.hpp"
#include "reident/temporal.hpp"

namespace reident {

// The six matchable fields. Enumerator order is the canonical suppression
// order used by the relaxation search.
enum class Field : std::uint8_t {
    Zip = 0,
    Age,
    Hospital,
    AdmitWindow,
    Diagnosis,
    Gender,
};

inline constexpr std::array<Field, 6> kFieldOrder = {Field::Zip,         Field::Age,
                                                     Field::Hospital,    Field::AdmitWindow,
                                                     Field::Diagnosis,   Field::Gender};

const char* field_name(Field f);
std::optional<Field> field_from_name(std::string_view name);

/// Small set over the six canonical fields.
class FieldSet {
  public:
    constexpr FieldSet() = default;
    constexpr explicit FieldSet(std::initializer_list<Field> fields) {
        for (Field f : fields) insert(f);
    }

    static constexpr FieldSet all() {
        FieldSet s;
        s.bits_ = 0x3f;
        return s;
    }
    /// The suppression set reported in practice: zip, age, hospital.
    static constexpr FieldSet default_droppable() {
        return FieldSet{Field::Zip, Field::Age, Field::Hospital};
    }

    constexpr bool contains(Field f) const { return bits_ & bit(f); }
    constexpr void insert(Field f) { bits_ |= bit(f); }
    constexpr void erase(Field f) { bits_ &= static_cast<std::uint8_t>(~bit(f)); }
    constexpr FieldSet without(Field f) const {
        FieldSet s = *this;
        s.erase(f);
        return s;
    }
    constexpr FieldSet without_all(const FieldSet& other) const {
        FieldSet s = *this;
        s.bits_ &= static_cast<std::uint8_t>(~other.bits_);
        return s;
    }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const {
        int n = 0;
        for (Field f : kFieldOrder) n += contains(f);
        return n;
    }
    constexpr bool subset_of(const FieldSet& other) const {
        return (bits_ & ~other.bits_) == 0;
    }

    /// Members in canonical order.
    std::vector<Field> fields() const;

    /// "age;hospital" style, canonical order; "-" for the empty set.
    std::string to_string() const;
    static std::optional<FieldSet> from_string(std::string_view text);

    friend constexpr bool operator==(const FieldSet&, const FieldSet&) = default;

  private:
    static constexpr std::uint8_t bit(Field f) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(f));
    }
    std::uint8_t bits_ = 0;
};

enum class Verdict : std::uint8_t { Pass, Fail, Absent };
const char* verdict_name(Verdict v);

struct PublicRecordRow {
    std::string name;
    Date dob{};
    std::vector<std::string> zip_history;
    std::optional<int> age_hint;
};

struct PublicRecordsTable {
    std::vector<PublicRecordRow> rows;
};

enum class EnrichmentStatus : std::uint8_t {
    Applied,      // exactly one consistent row; dob and ZIP history merged in
    NoCandidate,  // no row survived the name/age filter
    Ambiguous,    // several rows survived; record left untouched
    NameMissing,  // external record has no name to look up
};
const char* enrichment_status_name(EnrichmentStatus s);

struct EnrichResult {
    ExternalRecord record;
    EnrichmentStatus status;
};

/// Public-records lookup: match on normalized name, filter by age
/// consistency (dob-derived age at the incident date within one year of the
/// reported age), and merge dob plus ZIP history when exactly one row
/// survives.
EnrichResult enrich(const ExternalRecord& ext, const PublicRecordsTable& table);

struct MatchConfig {
    FieldSet droppable = FieldSet::default_droppable();
    int max_drop = 2;  // 0..2
    int slack_days = 0;
};

/// Admission window for a record, honoring year-only generalized months.
AdmitWindow admission_window(const HospitalRecord& rec, int slack_days = 0);

/// Per-field verdicts for one external/record pair. Fields missing on the
/// external side are Absent; a generalized record's suppressed ZIP is also
/// Absent (unknowable rather than mismatched).
std::map<Field, Verdict> evaluate_predicates(const ExternalRecord& ext, const HospitalRecord& rec,
                                             int slack_days = 0);

/// Linear-scan exact matcher: record ids (sorted) of every record whose
/// verdicts over `use` contain no Fail and at least one Pass-or-Fail-capable
/// field (all-Absent records are excluded as vacuous).
std::vector<std::string> match_exact(const ExternalRecord& ext,
                                     std::span<const HospitalRecord> dataset, const FieldSet& use,
                                     int slack_days = 0);

enum class MatchClass : std::uint8_t { Unique, Ambiguous, NoMatch, Conflict };
const char* match_class_name(MatchClass c);

struct MatchOutcome {
    MatchClass classification = MatchClass::NoMatch;
    int relaxation_level = 0;  // always equals dropped.size()
    FieldSet dropped;
    FieldSet fields_used;
    std::vector<std::string> candidate_ids;  // sorted; all survivors for Ambiguous,
                                             // the disagreeing singletons for Conflict

    std::size_t candidate_count() const { return candidate_ids.size(); }
    const std::string* unique_id() const {
        return classification == MatchClass::Unique ? &candidate_ids.front() : nullptr;
    }
};

struct RelaxationStep {
    int level = 0;
    FieldSet dropped;
    std::size_t candidates = 0;
};

using RelaxationTrace = std::vector<RelaxationStep>;

/// Exact-unique matching with systematic suppression. Level 0 uses every
/// available field; a multi-record result there is terminal ambiguity.
/// Relaxation proceeds only from empty results, dropping one then two
/// droppable fields; all singleton configurations at a level must agree on
/// one record, otherwise the outcome is Conflict.
MatchOutcome match_with_relaxation(const ExternalRecord& ext,
                                   std::span<const HospitalRecord> dataset,
                                   const MatchConfig& config, RelaxationTrace* trace = nullptr);

/// Blocked inverted index over ZIP, hospital, discharge month and
/// 3-character diagnosis prefixes; queries seed from the most selective
/// available dimension, intersect further dimensions only while that pays,
/// and re-check the full predicate, so results are exactly what the linear
/// scan returns. Immutable once built.
class MatchIndex {
  public:
    explicit MatchIndex(std::vector<HospitalRecord> records);

    const std::vector<HospitalRecord>& records() const { return records_; }

    std::vector<std::string> match_exact(const ExternalRecord& ext, const FieldSet& use,
                                         int slack_days = 0) const;

    MatchOutcome match_with_relaxation(const ExternalRecord& ext, const MatchConfig& config,
                                       RelaxationTrace* trace = nullptr) const;

  private:
    std::vector<std::uint32_t> candidates(const ExternalRecord& ext, const FieldSet& use,
                                          int slack_days, bool& scanned_all) const;

    std::vector<HospitalRecord> records_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> by_zip_;       // raw 5-digit
    std::unordered_map<std::string, std::vector<std::uint32_t>> by_zip3_;      // generalized
    std::vector<std::uint32_t> zip_suppressed_;                                // "00000" rows
    std::unordered_map<std::string, std::vector<std::uint32_t>> by_hospital_;
    std::unordered_map<std::int32_t, std::vector<std::uint32_t>> by_discharge_;  // year*16+month
    std::unordered_map<std::string, std::vector<std::uint32_t>> by_prefix_;
    int max_los_ = 0;
};

}  // namespace reident
