#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reident/temporal.hpp"

namespace reident {

enum class Gender : char { Male = 'M', Female = 'F', Unknown = 'U' };

char gender_char(Gender g);
std::optional<Gender> parse_gender(std::string_view token);

/// Lowercase, trim, collapse interior whitespace runs to single spaces.
std::string normalize_text(std::string_view s);

// ICD9 diagnosis codes: 3-5 characters, first one of digit/E/V, rest digits.
// Stored uppercase so prefix comparison is a plain memcmp.
bool valid_icd9(std::string_view code);
bool valid_icd9_prefix3(std::string_view prefix);  // exactly three characters

struct Icd9Code {
    std::string text;  // canonical uppercase form

    static std::optional<Icd9Code> make(std::string_view raw);
    friend bool operator==(const Icd9Code&, const Icd9Code&) = default;
    friend auto operator<=>(const Icd9Code&, const Icd9Code&) = default;
};

/// True when prefix is the leftmost part of code (case-insensitive).
/// Longer codes specialize shorter ones, so any prefix of length >= 3
/// names a family that the full code belongs to.
bool icd9_prefix_match(const Icd9Code& code, std::string_view prefix);
bool icd9_prefix_match(std::string_view code, std::string_view prefix);

// Hospital codes: digits plus an optional trailing unit letter ("162",
// "137a"). Unit-lettered codes are distinct hospitals for matching.
bool valid_hospital_code(std::string_view code);
std::string canonical_hospital_code(std::string_view code);  // lowercases the unit letter

bool valid_zip5(std::string_view zip);

/// One de-identified hospitalization row, matching-relevant fields only.
struct HospitalRecord {
    std::string record_id;
    std::string hospital;
    std::string admit_type;
    int length_of_stay = 0;
    int discharge_year = 0;
    int discharge_month = 0;  // 1..12; 0 means year-only (generalized)
    int age_years = 0;
    int age_months = 0;  // invariant: age_months / 12 == age_years
    Gender gender = Gender::Unknown;
    std::string zip;  // 5 digits; generalized forms keep the width
    std::vector<Icd9Code> diagnoses;  // non-empty
    std::vector<std::string> procedures;
    std::vector<std::string> payers;
    std::optional<std::int64_t> charges_cents;

    bool generalized() const { return discharge_month == 0; }
};

/// One structured external-knowledge subject. Blank fields are absent and
/// never used for comparison.
struct ExternalRecord {
    std::string ext_id;
    std::optional<std::string> name;
    std::optional<Gender> gender;  // external sources report M/F only
    std::optional<int> age_years;
    std::optional<Date> incident_date;
    std::vector<std::string> zip_candidates;       // sorted, unique
    std::vector<std::string> hospital_candidates;  // sorted, unique
    std::vector<std::string> diagnosis_prefixes;   // 3-char families, sorted, unique
    std::optional<Date> dob;
    std::string source;
};

/// Code -> description dictionary with a normalized reverse image.
class CodeDictionary {
  public:
    /// Throws std::invalid_argument on duplicate code.
    void insert(std::string code, std::string description);

    std::optional<std::string> description(const std::string& code) const;
    /// All codes whose description normalizes to the given text.
    std::set<std::string> codes_for_description(std::string_view text) const;
    const std::map<std::string, std::string>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

  private:
    std::map<std::string, std::string> entries_;
    std::map<std::string, std::set<std::string>> reverse_;  // normalized description -> codes
};

using IncidentMap = std::map<std::string, std::set<std::string>>;

/// Built-in incident vocabulary: motor vehicle accidents and assaults.
IncidentMap default_incident_map();

/// The diagnosis-family prefixes observed across incident reports; used as
/// the default drawing pool for synthetic corpora and for mapping-file
/// validation.
const std::vector<std::string>& observed_prefixes();

/// Unknown incident types yield the empty set, which downstream matching
/// treats as "no diagnosis predicate".
std::set<std::string> incident_to_prefixes(const std::string& incident_type,
                                           const IncidentMap& mapping);

// Regional alias -> member hospital codes (e.g. a metro-area alias naming a
// dozen facilities). Keys are stored normalized.
using HospitalGroups = std::map<std::string, std::set<std::string>>;

/// Resolve a hospital name to candidate codes: exact dictionary description
/// first, then group aliases, else empty.
std::set<std::string> resolve_hospital(std::string_view name, const CodeDictionary& dictionary,
                                       const HospitalGroups& groups);

}  // namespace reident
