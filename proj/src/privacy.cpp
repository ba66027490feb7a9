#include "reident/privacy.hpp"

#include <unordered_map>

namespace reident {

void ZipPopulationTable::set(const std::string& zip3, std::int64_t population) {
    pop_[zip3] = population;
}

std::int64_t ZipPopulationTable::population(std::string_view zip3) const {
    auto it = pop_.find(std::string(zip3));
    return it == pop_.end() ? 0 : it->second;
}

HospitalRecord safe_harbor(const HospitalRecord& rec, const ZipPopulationTable& pop) {
    HospitalRecord out = rec;
    std::string zip3 = rec.zip.substr(0, 3);
    out.zip = pop.population(zip3) > kSafeHarborPopulationThreshold ? zip3 + "00" : "00000";
    out.discharge_month = 0;  // year-only granularity
    out.age_months = rec.age_years * 12;
    return out;
}

std::vector<HospitalRecord> safe_harbor(std::span<const HospitalRecord> dataset,
                                        const ZipPopulationTable& pop) {
    std::vector<HospitalRecord> out;
    out.reserve(dataset.size());
    for (const auto& rec : dataset) out.push_back(safe_harbor(rec, pop));
    return out;
}

const char* quasi_id_name(QuasiId q) {
    switch (q) {
        case QuasiId::Dob: return "dob";
        case QuasiId::BirthYear: return "birth_year";
        case QuasiId::Gender: return "gender";
        case QuasiId::Zip: return "zip";
        case QuasiId::Zip3: return "zip3";
        case QuasiId::AgeYears: return "age_years";
        case QuasiId::AgeMonths: return "age_months";
        case QuasiId::DischargeMonth: return "discharge_month";
    }
    return "?";
}

std::optional<QuasiId> quasi_id_from_name(std::string_view name) {
    for (QuasiId q : {QuasiId::Dob, QuasiId::BirthYear, QuasiId::Gender, QuasiId::Zip,
                      QuasiId::Zip3, QuasiId::AgeYears, QuasiId::AgeMonths,
                      QuasiId::DischargeMonth})
        if (name == quasi_id_name(q)) return q;
    return std::nullopt;
}

std::vector<std::string> quasi_id_names() {
    return {"dob",       "birth_year", "gender",         "zip",
            "zip3",      "age_years",  "age_months",     "discharge_month"};
}

std::string quasi_key(const HospitalRecord& rec, std::span<const QuasiId> quasis) {
    std::string key;
    for (QuasiId q : quasis) {
        switch (q) {
            case QuasiId::Dob: {
                int year = rec.discharge_year - rec.age_years;
                int month = 0;
                if (!rec.generalized()) {
                    // fold the sub-year month offset back from the discharge month
                    int offset = rec.age_months % 12;
                    month = (rec.discharge_month - 1 - offset % 12 + 12) % 12 + 1;
                }
                key += std::to_string(year);
                key += '-';
                key += std::to_string(month);
                break;
            }
            case QuasiId::BirthYear:
                key += std::to_string(rec.discharge_year - rec.age_years);
                break;
            case QuasiId::Gender: key += gender_char(rec.gender); break;
            case QuasiId::Zip: key += rec.zip; break;
            case QuasiId::Zip3: key += rec.zip.substr(0, 3); break;
            case QuasiId::AgeYears: key += std::to_string(rec.age_years); break;
            case QuasiId::AgeMonths: key += std::to_string(rec.age_months); break;
            case QuasiId::DischargeMonth: key += std::to_string(rec.discharge_month); break;
        }
        key += '|';
    }
    return key;
}

std::map<std::size_t, std::size_t> k_anonymity_histogram(std::span<const HospitalRecord> dataset,
                                                         std::span<const QuasiId> quasis) {
    std::unordered_map<std::string, std::size_t> classes;
    for (const auto& rec : dataset) ++classes[quasi_key(rec, quasis)];
    std::map<std::size_t, std::size_t> hist;
    for (const auto& [key, size] : classes) hist[size] += size;  // records, not classes
    return hist;
}

double uniqueness_fraction(const std::map<std::size_t, std::size_t>& histogram) {
    std::size_t total = 0;
    for (const auto& [k, records] : histogram) total += records;
    if (total == 0) return 0.0;
    auto it = histogram.find(1);
    std::size_t unique = it == histogram.end() ? 0 : it->second;
    return static_cast<double>(unique) / static_cast<double>(total);
}

std::vector<std::string> default_sensitive_prefixes() {
    // Substance abuse and sexually transmitted infection families; most
    // deployments load a curated list instead.
    return {"090", "091", "092", "093", "094", "095", "096", "097", "098", "099",
            "291", "292", "303", "304", "305"};
}

bool is_sensitive(const HospitalRecord& rec, std::span<const std::string> prefixes) {
    for (const auto& prefix : prefixes)
        for (const auto& code : rec.diagnoses)
            if (icd9_prefix_match(code, prefix)) return true;
    return false;
}

}  // namespace reident
