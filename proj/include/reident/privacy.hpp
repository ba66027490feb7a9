#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reident/model.hpp"

namespace reident {

/// ZIP3 population lookup used by the Safe Harbor ZIP rule. Unknown
/// prefixes count as population zero, which forces full suppression.
class ZipPopulationTable {
  public:
    void set(const std::string& zip3, std::int64_t population);
    std::int64_t population(std::string_view zip3) const;
    std::size_t size() const { return pop_.size(); }
    const std::map<std::string, std::int64_t>& entries() const { return pop_; }

  private:
    std::map<std::string, std::int64_t> pop_;
};

/// A ZIP3 may be retained only when its population strictly exceeds this.
inline constexpr std::int64_t kSafeHarborPopulationThreshold = 20000;

/// Safe Harbor generalization: ZIP kept to three digits (or fully
/// suppressed to "00000" for low-population prefixes), discharge month
/// coarsened to year only, age coarsened to whole years. Idempotent.
HospitalRecord safe_harbor(const HospitalRecord& rec, const ZipPopulationTable& pop);
std::vector<HospitalRecord> safe_harbor(std::span<const HospitalRecord> dataset,
                                        const ZipPopulationTable& pop);

/// Quasi-identifier selectors for equivalence-class statistics. Hospital
/// records carry no real date of birth, so `Dob` is the finest derivable
/// birth grain: year = discharge_year - age_years, month folded back from
/// age_months (0 when the discharge month has been erased). Its year
/// component always equals `BirthYear`, which keeps generalization
/// comparisons between the two well-ordered.
enum class QuasiId : std::uint8_t {
    Dob,
    BirthYear,  // discharge_year - age_years
    Gender,
    Zip,
    Zip3,
    AgeYears,
    AgeMonths,
    DischargeMonth,
};

const char* quasi_id_name(QuasiId q);
std::optional<QuasiId> quasi_id_from_name(std::string_view name);
std::vector<std::string> quasi_id_names();

/// Key of `rec` under the chosen quasi-identifiers, usable as a map key.
std::string quasi_key(const HospitalRecord& rec, std::span<const QuasiId> quasis);

/// hist[k] = number of records living in equivalence classes of size k.
/// Sum of values is the dataset size and every value is divisible by its key.
std::map<std::size_t, std::size_t> k_anonymity_histogram(std::span<const HospitalRecord> dataset,
                                                         std::span<const QuasiId> quasis);

/// Fraction of records alone in their equivalence class; 0 for an empty set.
double uniqueness_fraction(const std::map<std::size_t, std::size_t>& histogram);

/// Built-in sensitive diagnosis families (substance abuse and similar);
/// callers normally load their own list.
std::vector<std::string> default_sensitive_prefixes();

/// True when any diagnosis on the record starts with one of the prefixes
/// (hierarchical match; prefixes are 3+ characters).
bool is_sensitive(const HospitalRecord& rec, std::span<const std::string> prefixes);

}  // namespace reident
