#include <algorithm>
#include <chrono>

#include "match_detail.hpp"
#include "reident/matcher.hpp"
#include "reident/temporal.hpp"

namespace reident {
namespace {

constexpr std::int32_t discharge_key(int year, int month) {
    return static_cast<std::int32_t>(year) * 16 + month;
}

Date shifted(Date d, int days) {
    return Date{std::chrono::sys_days(d) + std::chrono::days(days)};
}

// Sorted-unique union of several sorted posting lists.
std::vector<std::uint32_t> merge_lists(const std::vector<const std::vector<std::uint32_t>*>& lists) {
    std::vector<std::uint32_t> out;
    std::size_t total = 0;
    for (const auto* l : lists) total += l->size();
    out.reserve(total);
    for (const auto* l : lists) out.insert(out.end(), l->begin(), l->end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

MatchIndex::MatchIndex(std::vector<HospitalRecord> records) : records_(std::move(records)) {
    for (std::uint32_t i = 0; i < records_.size(); ++i) {
        const HospitalRecord& rec = records_[i];
        if (rec.generalized()) {
            if (rec.zip == "00000")
                zip_suppressed_.push_back(i);
            else
                by_zip3_[rec.zip.substr(0, 3)].push_back(i);
        } else {
            by_zip_[rec.zip].push_back(i);
        }
        by_hospital_[rec.hospital].push_back(i);
        by_discharge_[discharge_key(rec.discharge_year, rec.discharge_month)].push_back(i);
        std::string last_prefix;
        for (const auto& code : rec.diagnoses) {
            std::string prefix = code.text.substr(0, 3);
            if (prefix == last_prefix) continue;  // cheap dedupe for repeated families
            last_prefix = prefix;
            auto& list = by_prefix_[prefix];
            if (list.empty() || list.back() != i) list.push_back(i);
        }
        max_los_ = std::max(max_los_, rec.length_of_stay);
    }
}

std::vector<std::uint32_t> MatchIndex::candidates(const ExternalRecord& ext, const FieldSet& use,
                                                  int slack_days, bool& scanned_all) const {
    // Per-dimension posting lists. Each dimension's union is a superset of
    // every record that can pass that field's predicate, so blocking on any
    // single one is sound; the residual check applies the full predicate.
    // Only the most selective dimension is materialized: building and
    // intersecting the wide ones (a discharge-month band can hold a quarter
    // of the corpus) costs more than letting the residual check reject.
    std::vector<std::vector<const std::vector<std::uint32_t>*>> dimensions;

    if (use.contains(Field::Zip) && !ext.zip_candidates.empty()) {
        std::vector<const std::vector<std::uint32_t>*> lists;
        // Records with fully suppressed ZIPs stay in play: suppression means
        // "unknown", not "different".
        lists.push_back(&zip_suppressed_);
        std::string last_zip3;
        for (const auto& zip : ext.zip_candidates) {
            if (auto it = by_zip_.find(zip); it != by_zip_.end()) lists.push_back(&it->second);
            std::string zip3 = zip.substr(0, 3);
            if (zip3 == last_zip3) continue;  // candidates are sorted, prefixes repeat
            last_zip3 = zip3;
            if (auto it = by_zip3_.find(zip3); it != by_zip3_.end()) lists.push_back(&it->second);
        }
        dimensions.push_back(std::move(lists));
    }

    if (use.contains(Field::Hospital) && !ext.hospital_candidates.empty()) {
        std::vector<const std::vector<std::uint32_t>*> lists;
        for (const auto& h : ext.hospital_candidates)
            if (auto it = by_hospital_.find(h); it != by_hospital_.end()) lists.push_back(&it->second);
        dimensions.push_back(std::move(lists));
    }

    if (use.contains(Field::AdmitWindow) && ext.incident_date) {
        // A stay of length L discharged in month (y, m) admits this incident
        // only if the incident falls within L (+/- slack) days of that month,
        // so only a narrow band of discharge months can possibly qualify.
        std::vector<const std::vector<std::uint32_t>*> lists;
        YearMonth lo = month_of(shifted(*ext.incident_date, -slack_days));
        YearMonth hi = month_of(shifted(*ext.incident_date, max_los_ + slack_days));
        for (YearMonth ym = lo; ym <= hi;) {
            if (auto it = by_discharge_.find(discharge_key(ym.year, ym.month));
                it != by_discharge_.end())
                lists.push_back(&it->second);
            if (++ym.month > 12) {
                ym.month = 1;
                ++ym.year;
            }
        }
        for (int year = lo.year; year <= hi.year; ++year)
            if (auto it = by_discharge_.find(discharge_key(year, 0)); it != by_discharge_.end())
                lists.push_back(&it->second);
        dimensions.push_back(std::move(lists));
    }

    if (use.contains(Field::Diagnosis) && !ext.diagnosis_prefixes.empty()) {
        std::vector<const std::vector<std::uint32_t>*> lists;
        for (const auto& prefix : ext.diagnosis_prefixes)
            if (auto it = by_prefix_.find(prefix); it != by_prefix_.end()) lists.push_back(&it->second);
        dimensions.push_back(std::move(lists));
    }

    if (dimensions.empty()) {
        scanned_all = true;
        return {};
    }
    scanned_all = false;

    auto total_size = [](const std::vector<const std::vector<std::uint32_t>*>& lists) {
        std::size_t n = 0;
        for (const auto* l : lists) n += l->size();
        return n;
    };
    std::sort(dimensions.begin(), dimensions.end(),
              [&](const auto& a, const auto& b) { return total_size(a) < total_size(b); });

    // Seed with the most selective dimension, then keep intersecting while
    // the pool is still wide and the next dimension is cheap enough to
    // materialize relative to what it can remove. Past that point the
    // residual check rejects leftovers faster than set algebra would.
    constexpr std::size_t kNarrowEnough = 256;
    constexpr std::size_t kCostFactor = 16;
    std::vector<std::uint32_t> result = merge_lists(dimensions.front());
    for (std::size_t i = 1; i < dimensions.size(); ++i) {
        if (result.size() <= kNarrowEnough) break;
        if (total_size(dimensions[i]) > kCostFactor * result.size()) break;  // ascending sizes
        std::vector<std::uint32_t> other = merge_lists(dimensions[i]);
        std::vector<std::uint32_t> next;
        next.reserve(std::min(result.size(), other.size()));
        std::set_intersection(result.begin(), result.end(), other.begin(), other.end(),
                              std::back_inserter(next));
        result.swap(next);
    }
    return result;
}

std::vector<std::string> MatchIndex::match_exact(const ExternalRecord& ext, const FieldSet& use,
                                                 int slack_days) const {
    std::vector<std::string> ids;
    bool scanned_all = false;
    std::vector<std::uint32_t> pool = candidates(ext, use, slack_days, scanned_all);
    if (scanned_all) {
        // Nothing to block on; fall back to checking every record.
        for (const auto& rec : records_)
            if (detail::accepts(ext, rec, use, slack_days)) ids.push_back(rec.record_id);
    } else {
        // Residual check: blocking only narrows the pool, the real predicate
        // decides. This keeps index results identical to the linear scan.
        for (std::uint32_t i : pool)
            if (detail::accepts(ext, records_[i], use, slack_days))
                ids.push_back(records_[i].record_id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

MatchOutcome MatchIndex::match_with_relaxation(const ExternalRecord& ext,
                                               const MatchConfig& config,
                                               RelaxationTrace* trace) const {
    auto query = [&](const FieldSet& use) { return match_exact(ext, use, config.slack_days); };
    return detail::relax_impl(config, query, trace);
}

}  // namespace reident
