#include "reident/matcher.hpp"

#include <algorithm>
#include <cstdlib>

#include "match_detail.hpp"

namespace reident {

const char* field_name(Field f) {
    switch (f) {
        case Field::Zip: return "zip";
        case Field::Age: return "age";
        case Field::Hospital: return "hospital";
        case Field::AdmitWindow: return "admit_window";
        case Field::Diagnosis: return "diagnosis";
        case Field::Gender: return "gender";
    }
    return "?";
}

std::optional<Field> field_from_name(std::string_view name) {
    for (Field f : kFieldOrder)
        if (name == field_name(f)) return f;
    return std::nullopt;
}

std::vector<Field> FieldSet::fields() const {
    std::vector<Field> out;
    for (Field f : kFieldOrder)
        if (contains(f)) out.push_back(f);
    return out;
}

std::string FieldSet::to_string() const {
    if (empty()) return "-";
    std::string out;
    for (Field f : kFieldOrder) {
        if (!contains(f)) continue;
        if (!out.empty()) out += ';';
        out += field_name(f);
    }
    return out;
}

std::optional<FieldSet> FieldSet::from_string(std::string_view text) {
    FieldSet set;
    if (text.empty() || text == "-") return set;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t next = text.find(';', pos);
        std::string_view token = text.substr(pos, next == std::string_view::npos ? next : next - pos);
        auto field = field_from_name(token);
        if (!field) return std::nullopt;
        set.insert(*field);
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return set;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Absent: return "absent";
    }
    return "?";
}

const char* match_class_name(MatchClass c) {
    switch (c) {
        case MatchClass::Unique: return "unique";
        case MatchClass::Ambiguous: return "ambiguous";
        case MatchClass::NoMatch: return "no_match";
        case MatchClass::Conflict: return "conflict";
    }
    return "?";
}

const char* enrichment_status_name(EnrichmentStatus s) {
    switch (s) {
        case EnrichmentStatus::Applied: return "applied";
        case EnrichmentStatus::NoCandidate: return "no_candidate";
        case EnrichmentStatus::Ambiguous: return "ambiguous";
        case EnrichmentStatus::NameMissing: return "name_missing";
    }
    return "?";
}

EnrichResult enrich(const ExternalRecord& ext, const PublicRecordsTable& table) {
    if (!ext.name) return {ext, EnrichmentStatus::NameMissing};
    std::string wanted = normalize_text(*ext.name);

    auto consistent = [&](const PublicRecordRow& row) {
        if (ext.incident_date) {
            if (row.dob > *ext.incident_date) return false;
            if (ext.age_years) {
                int at_incident = age_years_at(row.dob, *ext.incident_date);
                return std::abs(at_incident - *ext.age_years) <= 1;
            }
            return true;
        }
        if (ext.age_years && row.age_hint) return std::abs(*row.age_hint - *ext.age_years) <= 1;
        return true;
    };

    const PublicRecordRow* found = nullptr;
    for (const auto& row : table.rows) {
        if (normalize_text(row.name) != wanted || !consistent(row)) continue;
        if (found) return {ext, EnrichmentStatus::Ambiguous};
        found = &row;
    }
    if (!found) return {ext, EnrichmentStatus::NoCandidate};

    ExternalRecord merged = ext;
    if (!merged.dob) merged.dob = found->dob;
    merged.zip_candidates.insert(merged.zip_candidates.end(), found->zip_history.begin(),
                                 found->zip_history.end());
    std::sort(merged.zip_candidates.begin(), merged.zip_candidates.end());
    merged.zip_candidates.erase(
        std::unique(merged.zip_candidates.begin(), merged.zip_candidates.end()),
        merged.zip_candidates.end());
    return {std::move(merged), EnrichmentStatus::Applied};
}

AdmitWindow admission_window(const HospitalRecord& rec, int slack_days) {
    AdmitWindow window = rec.generalized()
                             ? year_admit_window(rec.discharge_year, rec.length_of_stay)
                             : admit_window(rec.discharge_year, rec.discharge_month,
                                            rec.length_of_stay);
    return slack_days > 0 ? window.widened(slack_days) : window;
}

namespace detail {
namespace {

Verdict zip_verdict(const ExternalRecord& ext, const HospitalRecord& rec) {
    if (ext.zip_candidates.empty()) return Verdict::Absent;
    if (rec.generalized()) {
        // Fully suppressed ZIPs carry no information either way.
        if (rec.zip == "00000") return Verdict::Absent;
        std::string_view zip3 = std::string_view(rec.zip).substr(0, 3);
        for (const auto& candidate : ext.zip_candidates)
            if (std::string_view(candidate).substr(0, 3) == zip3) return Verdict::Pass;
        return Verdict::Fail;
    }
    for (const auto& candidate : ext.zip_candidates)
        if (candidate == rec.zip) return Verdict::Pass;
    return Verdict::Fail;
}

Verdict age_verdict(const ExternalRecord& ext, const HospitalRecord& rec, int slack_days) {
    if (ext.dob) {
        AdmitWindow window = admission_window(rec, slack_days);
        if (*ext.dob > window.end) return Verdict::Fail;  // born after the stay
        int max_months = age_months_at(*ext.dob, window.end);
        int min_months = *ext.dob > window.begin ? 0 : age_months_at(*ext.dob, window.begin);
        if (rec.generalized())
            return rec.age_years >= min_months / 12 && rec.age_years <= max_months / 12
                       ? Verdict::Pass
                       : Verdict::Fail;
        return rec.age_months >= min_months && rec.age_months <= max_months ? Verdict::Pass
                                                                            : Verdict::Fail;
    }
    if (ext.age_years) return rec.age_years == *ext.age_years ? Verdict::Pass : Verdict::Fail;
    return Verdict::Absent;
}

Verdict diagnosis_verdict(const ExternalRecord& ext, const HospitalRecord& rec) {
    if (ext.diagnosis_prefixes.empty()) return Verdict::Absent;
    for (const auto& prefix : ext.diagnosis_prefixes)
        for (const auto& code : rec.diagnoses)
            if (icd9_prefix_match(code, prefix)) return Verdict::Pass;
    return Verdict::Fail;
}

}  // namespace

Verdict field_verdict(Field field, const ExternalRecord& ext, const HospitalRecord& rec,
                      int slack_days) {
    switch (field) {
        case Field::Gender:
            if (!ext.gender || rec.gender == Gender::Unknown) return Verdict::Absent;
            return *ext.gender == rec.gender ? Verdict::Pass : Verdict::Fail;
        case Field::Zip:
            return zip_verdict(ext, rec);
        case Field::Age:
            return age_verdict(ext, rec, slack_days);
        case Field::Hospital: {
            if (ext.hospital_candidates.empty()) return Verdict::Absent;
            bool hit = std::binary_search(ext.hospital_candidates.begin(),
                                          ext.hospital_candidates.end(), rec.hospital);
            return hit ? Verdict::Pass : Verdict::Fail;
        }
        case Field::AdmitWindow: {
            if (!ext.incident_date) return Verdict::Absent;
            return in_window(*ext.incident_date, admission_window(rec, slack_days))
                       ? Verdict::Pass
                       : Verdict::Fail;
        }
        case Field::Diagnosis:
            return diagnosis_verdict(ext, rec);
    }
    return Verdict::Absent;
}

bool accepts(const ExternalRecord& ext, const HospitalRecord& rec, const FieldSet& use,
             int slack_days) {
    bool compared_any = false;
    for (Field f : kFieldOrder) {
        if (!use.contains(f)) continue;
        switch (field_verdict(f, ext, rec, slack_days)) {
            case Verdict::Fail: return false;
            case Verdict::Pass: compared_any = true; break;
            case Verdict::Absent: break;
        }
    }
    // A record that no field could speak to is not a match of any kind.
    return compared_any;
}

}  // namespace detail

std::map<Field, Verdict> evaluate_predicates(const ExternalRecord& ext, const HospitalRecord& rec,
                                             int slack_days) {
    std::map<Field, Verdict> verdicts;
    for (Field f : kFieldOrder) verdicts[f] = detail::field_verdict(f, ext, rec, slack_days);
    return verdicts;
}

std::vector<std::string> match_exact(const ExternalRecord& ext,
                                     std::span<const HospitalRecord> dataset, const FieldSet& use,
                                     int slack_days) {
    std::vector<std::string> ids;
    for (const auto& rec : dataset)
        if (detail::accepts(ext, rec, use, slack_days)) ids.push_back(rec.record_id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

MatchOutcome match_with_relaxation(const ExternalRecord& ext,
                                   std::span<const HospitalRecord> dataset,
                                   const MatchConfig& config, RelaxationTrace* trace) {
    auto query = [&](const FieldSet& use) {
        return match_exact(ext, dataset, use, config.slack_days);
    };
    return detail::relax_impl(config, query, trace);
}

}  // namespace reident
