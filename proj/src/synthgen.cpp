#include "reident/synthgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "reident/parse.hpp"
#include "reident/rng.hpp"
#include "reident/temporal.hpp"

namespace reident {
namespace {

// Value ranges are partitioned so that planted cases cannot collide with
// background noise or with each other:
//   ZIPs       97xxx unique plants | 95xxx ambiguous groups | 96000
//              reserved (on no record, so probes using it fail everywhere);
//              background pools must stay outside 95000-97999
//   hospitals  500-999 plant isolators and the reserved 900; background
//              pools must stay outside that range
//   ages       0-89 background | 95+ plant isolators (distinct years each) |
//              180+ perturbation values (on no record)
constexpr int kUniqueZipBase = 97000;
constexpr int kAmbiguousZipBase = 95000;
constexpr const char* kReservedZip = "96000";
constexpr int kReservedZipLow = 95000;
constexpr int kReservedZipHigh = 97999;
constexpr int kIsolatorHospitalBase = 500;
constexpr int kReservedHospitalLow = 500;
constexpr int kReservedHospitalHigh = 999;
constexpr const char* kReservedHospital = "900";
constexpr int kBackgroundAgeMax = 89;
constexpr int kIsolatorAgeBase = 95;
constexpr int kIsolatorAgeMax = 179;
constexpr int kPerturbationAgeBase = 180;

constexpr std::uint64_t kDrawScale = 1ull << 32;

std::string zip5(int n) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%05d", n);
    return buf;
}

const FieldSet kDropCycle[] = {
    FieldSet{},
    FieldSet{},
    FieldSet{Field::Zip},
    FieldSet{Field::Age},
    FieldSet{Field::Hospital},
    FieldSet{Field::Age, Field::Hospital},
};
constexpr std::size_t kDropCycleSize = std::size(kDropCycle);

std::size_t age_isolators_needed(std::size_t n_planted_unique) {
    std::size_t n = 0;
    for (std::size_t k = 0; k < n_planted_unique; ++k) {
        const FieldSet& drop = kDropCycle[k % kDropCycleSize];
        if (drop.contains(Field::Zip) && !drop.contains(Field::Age)) ++n;
    }
    return n;
}

int leading_digits(const std::string& code) {
    int value = 0;
    for (char c : code) {
        if (c < '0' || c > '9') break;
        value = value * 10 + (c - '0');
        if (value > 99999) break;
    }
    return value;
}

void validate(const SynthConfig& c) {
    auto fail = [](const std::string& why) { throw std::invalid_argument("synth config: " + why); };
    std::size_t planted = c.n_planted_unique + c.n_planted_ambiguous + c.n_planted_nomatch;
    if (planted > c.n_externals)
        fail("planted cases (" + std::to_string(planted) + ") exceed n_externals (" +
             std::to_string(c.n_externals) + ")");
    if (c.n_planted_sensitive > c.n_planted_unique)
        fail("n_planted_sensitive exceeds n_planted_unique");
    std::size_t clone_records = 0;
    for (std::size_t j = 0; j < c.n_planted_ambiguous; ++j) clone_records += 2 + j % 2;
    std::size_t planted_records = c.n_planted_unique + clone_records;
    if (planted_records > c.n_hospital_records)
        fail("planted cases need " + std::to_string(planted_records) +
             " hospital records, only " + std::to_string(c.n_hospital_records) + " requested");
    if (c.zip_pool.empty()) fail("zip_pool must not be empty");
    for (const auto& zip : c.zip_pool) {
        if (!valid_zip5(zip)) fail("zip_pool entry '" + zip + "' is not a 5-digit ZIP");
        int v = leading_digits(zip);
        if (v >= kReservedZipLow && v <= kReservedZipHigh)
            fail("zip_pool entry '" + zip + "' lies in the 95000-97999 band reserved for planted cases");
    }
    if (c.hospital_pool.empty()) fail("hospital_pool must not be empty");
    for (const auto& code : c.hospital_pool) {
        if (!valid_hospital_code(code)) fail("hospital_pool entry '" + code + "' is not a valid code");
        int v = leading_digits(code);
        if (v >= kReservedHospitalLow && v <= kReservedHospitalHigh)
            fail("hospital_pool entry '" + code + "' lies in the 500-999 band reserved for planted cases");
    }
    if (c.incident_mix.empty()) fail("incident_mix must not be empty");
    for (const auto& [type, weight] : c.incident_mix)
        if (!(weight > 0)) fail("incident_mix weight for '" + type + "' must be positive");
    if (!(c.sensitive_rate >= 0.0 && c.sensitive_rate <= 1.0))
        fail("sensitive_rate must be within [0, 1]");
    if (c.n_planted_unique > 999) fail("at most 999 planted unique cases");
    if (c.n_planted_ambiguous > 999) fail("at most 999 planted ambiguous groups");
    if (c.year < 1800 || c.year > 9900) fail("year must be in [1800, 9900]");
    std::size_t isolators = age_isolators_needed(c.n_planted_unique);
    if (kIsolatorAgeBase + static_cast<int>(isolators) > kIsolatorAgeMax)
        fail("too many planted unique cases needing an age isolator (" +
             std::to_string(isolators) + ")");
}

/// Integer-threshold draw over the incident mix; deterministic because the
/// map iterates in key order.
class IncidentPicker {
  public:
    explicit IncidentPicker(const std::map<std::string, double>& mix) {
        double total = 0;
        for (const auto& [type, weight] : mix) total += weight;
        std::uint64_t acc = 0;
        for (const auto& [type, weight] : mix) {
            acc += static_cast<std::uint64_t>(std::llround(weight / total * kDrawScale));
            thresholds_.emplace_back(acc, type);
        }
        thresholds_.back().first = kDrawScale;  // absorb rounding drift
    }

    const std::string& pick(Rng& rng) const {
        std::uint64_t v = rng.below(kDrawScale);
        for (const auto& [threshold, type] : thresholds_)
            if (v < threshold) return type;
        return thresholds_.back().second;
    }

  private:
    std::vector<std::pair<std::uint64_t, std::string>> thresholds_;
};

struct Pools {
    std::vector<std::string> benign;     // 3-char families with no incident
                                         // or sensitive meaning here
    std::vector<std::string> sensitive;  // sensitive families
    std::vector<std::string> payers = {"1", "2", "6", "601", "625", "626"};
    IncidentMap incidents = default_incident_map();
};

Pools make_pools() {
    Pools pools;
    std::set<std::string> incident_families;
    for (const auto& [type, families] : pools.incidents)
        incident_families.insert(families.begin(), families.end());
    for (const auto& family : observed_prefixes())
        if (!incident_families.count(family)) pools.benign.push_back(family);
    pools.sensitive = default_sensitive_prefixes();
    return pools;
}

std::string make_code(Rng& rng, const std::string& family) {
    std::string code = family;
    for (std::uint64_t extra = rng.below(3); extra > 0 && code.size() < 5; --extra)
        code += static_cast<char>('0' + rng.below(10));
    return code;
}

std::vector<Icd9Code> make_diagnoses(Rng& rng, const Pools& pools, const std::string& first_family,
                                     bool sensitive) {
    std::vector<Icd9Code> codes;
    codes.push_back(*Icd9Code::make(make_code(rng, first_family)));
    if (sensitive) codes.push_back(*Icd9Code::make(make_code(rng, rng.pick(pools.sensitive))));
    for (std::uint64_t extra = rng.below(3); extra > 0; --extra)
        codes.push_back(*Icd9Code::make(make_code(rng, rng.pick(pools.benign))));
    return codes;
}

void fill_visit_noise(Rng& rng, const Pools& pools, HospitalRecord& rec) {
    rec.admit_type = std::to_string(1 + rng.below(4));
    for (std::uint64_t n = rng.below(3); n > 0; --n)
        rec.procedures.push_back(std::to_string(1000 + rng.below(9000)));
    rec.payers.push_back(rng.pick(pools.payers));
    if (rng.chance(1, 3)) rec.payers.push_back(rng.pick(pools.payers));
    if (rng.chance(9, 10))
        rec.charges_cents = 50000 + static_cast<std::int64_t>(rng.below(200000000));
}

HospitalRecord background_record(Rng& rng, const SynthConfig& c, const Pools& pools,
                                 const IncidentPicker& picker, std::uint64_t sensitive_threshold) {
    HospitalRecord rec;
    rec.hospital = rng.pick(c.hospital_pool);
    rec.length_of_stay = static_cast<int>(rng.below(30));
    rec.discharge_year = c.year;
    rec.discharge_month = static_cast<int>(1 + rng.below(12));
    rec.age_years = static_cast<int>(rng.below(kBackgroundAgeMax + 1));
    rec.age_months = rec.age_years * 12 + static_cast<int>(rng.below(12));
    rec.gender = rng.chance(1, 100) ? Gender::Unknown
                                    : (rng.chance(1, 2) ? Gender::Male : Gender::Female);
    rec.zip = rng.pick(c.zip_pool);

    const std::string& incident_type = picker.pick(rng);
    std::string first_family;
    auto it = pools.incidents.find(incident_type);
    if (it != pools.incidents.end()) {
        std::vector<std::string> families(it->second.begin(), it->second.end());
        first_family = rng.pick(families);
    } else {
        first_family = rng.pick(pools.benign);
    }
    bool sensitive = rng.below(kDrawScale) < sensitive_threshold;
    rec.diagnoses = make_diagnoses(rng, pools, first_family, sensitive);
    fill_visit_noise(rng, pools, rec);
    return rec;
}

/// Random admission day consistent with the record's discharge month and
/// length of stay; using it as the incident date makes the window pass.
Date admission_day(Rng& rng, const HospitalRecord& rec) {
    AdmitWindow window = admit_window(rec.discharge_year, rec.discharge_month, rec.length_of_stay);
    std::uint64_t offset = rng.below(static_cast<std::uint64_t>(window.width_days()));
    return Date{std::chrono::sys_days(window.begin) + std::chrono::days(offset)};
}

std::string make_name(Rng& rng, std::size_t tag) {
    static const std::vector<std::string> firsts = {"Alex",  "Jordan", "Casey",  "Riley",
                                                    "Morgan", "Quinn",  "Avery",  "Drew"};
    static const std::vector<std::string> lasts = {"Hansen",   "Ortiz", "Lee",   "Nakamura",
                                                   "Okafor",   "Silva", "Novak", "Reyes"};
    return rng.pick(firsts) + " " + rng.pick(lasts) + " " + std::to_string(tag);
}

}  // namespace

std::vector<std::string> default_zip_pool(std::size_t n) {
    std::vector<std::string> pool;
    pool.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pool.push_back(zip5(98000 + static_cast<int>(i % 1999)));
    return pool;
}

std::vector<std::string> default_hospital_pool(std::size_t n) {
    std::vector<std::string> pool;
    pool.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pool.push_back(std::to_string(100 + i % 400));
    return pool;
}

std::map<std::string, double> default_incident_mix() {
    return {{"motor_vehicle", 0.008}, {"assault", 0.002}, {"other", 0.990}};
}

SynthConfig SynthConfig::defaults() {
    SynthConfig config;
    config.zip_pool = default_zip_pool(80);
    config.hospital_pool = default_hospital_pool(25);
    config.incident_mix = default_incident_mix();
    return config;
}

const char* expectation_name(Expectation e) {
    switch (e) {
        case Expectation::Unique: return "unique";
        case Expectation::Ambiguous: return "ambiguous";
        case Expectation::NoMatch: return "no_match";
        case Expectation::Unconstrained: return "unconstrained";
    }
    return "?";
}

SynthCorpus generate(const SynthConfig& raw_config) {
    validate(raw_config);
    SynthConfig config = raw_config;  // emit canonical code forms so the
                                      // corpus round-trips byte-identically
    for (auto& code : config.hospital_pool) code = canonical_hospital_code(code);
    Rng rng(config.seed);
    Pools pools = make_pools();
    IncidentPicker picker(config.incident_mix);
    auto sensitive_threshold =
        static_cast<std::uint64_t>(std::llround(config.sensitive_rate * kDrawScale));
    SynthCorpus corpus;
    corpus.manifest.seed = config.seed;

    struct PendingExternal {
        ExternalRecord record;
        ManifestEntry entry;       // ext_id filled in after shuffling
        std::size_t target = 0;    // creation index of the target record
        bool has_target = false;
    };
    std::vector<HospitalRecord> records;  // record_id assigned after shuffling
    std::vector<PendingExternal> externals;

    std::size_t clone_records = 0;
    for (std::size_t j = 0; j < config.n_planted_ambiguous; ++j) clone_records += 2 + j % 2;
    std::size_t n_background =
        config.n_hospital_records - config.n_planted_unique - clone_records;

    for (std::size_t i = 0; i < n_background; ++i)
        records.push_back(background_record(rng, config, pools, picker, sensitive_threshold));

    // --- planted unique cases ---------------------------------------------
    int age_isolator_next = kIsolatorAgeBase;
    for (std::size_t k = 0; k < config.n_planted_unique; ++k) {
        const FieldSet& drop = kDropCycle[k % kDropCycleSize];
        // First retained field of (zip, age, hospital) gets a value unique to
        // this record across the whole dataset; with the dropped fields out of
        // play it pins the candidate set to exactly this record.
        Field isolator = Field::Zip;
        for (Field f : {Field::Zip, Field::Age, Field::Hospital})
            if (!drop.contains(f)) {
                isolator = f;
                break;
            }

        HospitalRecord rec = background_record(rng, config, pools, picker, 0);
        if (rec.gender == Gender::Unknown) rec.gender = Gender::Male;
        bool sensitive = k < config.n_planted_sensitive;
        rec.diagnoses = make_diagnoses(rng, pools, rng.pick(pools.benign), sensitive);
        if (isolator == Field::Zip)
            rec.zip = zip5(kUniqueZipBase + static_cast<int>(k));
        else if (isolator == Field::Age) {
            rec.age_years = age_isolator_next++;
            rec.age_months = rec.age_years * 12 + static_cast<int>(rng.below(12));
        } else {
            rec.hospital = std::to_string(kIsolatorHospitalBase + static_cast<int>(k));
        }

        ExternalRecord ext;
        ext.gender = rec.gender;
        ext.incident_date = admission_day(rng, rec);
        ext.diagnosis_prefixes = {rec.diagnoses.front().text.substr(0, 3)};
        ext.source = "planted";
        // Dropped fields get values that appear on no hospital record at all,
        // so any probe still using them comes back empty.
        ext.zip_candidates = {drop.contains(Field::Zip) ? kReservedZip : rec.zip};
        if (drop.contains(Field::Age))
            ext.age_years = kPerturbationAgeBase + static_cast<int>(k % 6);
        else
            ext.age_years = rec.age_years;
        ext.hospital_candidates = {drop.contains(Field::Hospital) ? kReservedHospital
                                                                  : rec.hospital};

        PendingExternal pending;
        pending.record = std::move(ext);
        pending.entry.expected = Expectation::Unique;
        pending.entry.planted_drop = drop;
        pending.entry.expected_level = drop.size();
        pending.entry.expected_count = 1;
        pending.entry.sensitive = sensitive;
        pending.target = records.size();
        pending.has_target = true;
        externals.push_back(std::move(pending));
        records.push_back(std::move(rec));
    }

    // --- planted ambiguous groups -----------------------------------------
    for (std::size_t j = 0; j < config.n_planted_ambiguous; ++j) {
        std::size_t group = 2 + j % 2;
        HospitalRecord base = background_record(rng, config, pools, picker, 0);
        if (base.gender == Gender::Unknown) base.gender = Gender::Female;
        base.zip = zip5(kAmbiguousZipBase + static_cast<int>(j));
        base.diagnoses = make_diagnoses(rng, pools, rng.pick(pools.benign), false);

        ExternalRecord ext;
        ext.gender = base.gender;
        ext.age_years = base.age_years;
        ext.incident_date = admission_day(rng, base);
        ext.zip_candidates = {base.zip};
        ext.hospital_candidates = {base.hospital};
        ext.diagnosis_prefixes = {base.diagnoses.front().text.substr(0, 3)};
        ext.source = "planted";

        for (std::size_t g = 0; g < group; ++g) {
            HospitalRecord clone = base;
            clone.procedures.clear();
            clone.payers.clear();
            fill_visit_noise(rng, pools, clone);  // cosmetic fields may differ
            records.push_back(std::move(clone));
        }

        PendingExternal pending;
        pending.record = std::move(ext);
        pending.entry.expected = Expectation::Ambiguous;
        pending.entry.expected_count = group;
        externals.push_back(std::move(pending));
    }

    // --- planted no-match cases -------------------------------------------
    for (std::size_t k = 0; k < config.n_planted_nomatch; ++k) {
        ExternalRecord ext;
        ext.gender = rng.chance(1, 2) ? Gender::Male : Gender::Female;
        // Three years past the dataset: no admission window can reach it.
        ext.incident_date = make_date(config.year + 3, 1, 15);
        ext.zip_candidates = {kReservedZip};
        ext.diagnosis_prefixes = {rng.pick(pools.benign)};
        ext.source = "planted";

        PendingExternal pending;
        pending.record = std::move(ext);
        pending.entry.expected = Expectation::NoMatch;
        pending.entry.expected_count = 0;
        externals.push_back(std::move(pending));
    }

    // --- unconstrained externals ------------------------------------------
    std::size_t planted = externals.size();
    for (std::size_t k = planted; k < config.n_externals; ++k) {
        ExternalRecord ext;
        if (rng.chance(9, 10)) ext.gender = rng.chance(1, 2) ? Gender::Male : Gender::Female;
        int age = 1 + static_cast<int>(rng.below(kBackgroundAgeMax));
        if (rng.chance(4, 5)) ext.age_years = age;
        if (rng.chance(9, 10))
            ext.incident_date = make_date(config.year, static_cast<int>(1 + rng.below(12)),
                                          static_cast<int>(1 + rng.below(28)));
        for (std::uint64_t n = 1 + rng.below(3); n > 0; --n)
            ext.zip_candidates.push_back(rng.pick(config.zip_pool));
        if (rng.chance(1, 2))
            for (std::uint64_t n = 1 + rng.below(2); n > 0; --n)
                ext.hospital_candidates.push_back(rng.pick(config.hospital_pool));
        if (rng.chance(4, 5))
            for (std::uint64_t n = 1 + rng.below(2); n > 0; --n)
                ext.diagnosis_prefixes.push_back(rng.pick(pools.benign));
        ext.source = "synthetic";

        if (rng.chance(1, 4)) {
            ext.name = make_name(rng, k);
            PublicRecordRow row;
            row.name = *ext.name;
            row.dob = make_date(config.year - age, static_cast<int>(1 + rng.below(12)),
                                static_cast<int>(1 + rng.below(28)));
            for (std::uint64_t n = rng.below(3); n > 0; --n)
                row.zip_history.push_back(rng.pick(config.zip_pool));
            std::sort(row.zip_history.begin(), row.zip_history.end());
            row.zip_history.erase(std::unique(row.zip_history.begin(), row.zip_history.end()),
                                  row.zip_history.end());
            if (rng.chance(1, 2)) row.age_hint = age;
            corpus.public_records.rows.push_back(std::move(row));
        }

        auto dedupe = [](std::vector<std::string>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        dedupe(ext.zip_candidates);
        dedupe(ext.hospital_candidates);
        dedupe(ext.diagnosis_prefixes);

        PendingExternal pending;
        pending.record = std::move(ext);
        pending.entry.expected = Expectation::Unconstrained;
        externals.push_back(std::move(pending));
    }

    // Decoy rows exercise the no-candidate path of enrichment.
    for (std::size_t n = 0; n < 3 && n < config.n_externals; ++n) {
        PublicRecordRow row;
        row.name = "Sample Decoy " + std::to_string(n);
        row.dob = make_date(config.year - 40 - static_cast<int>(n), 6, 1);
        row.zip_history.push_back(rng.pick(config.zip_pool));
        corpus.public_records.rows.push_back(std::move(row));
    }

    // --- id assignment ----------------------------------------------------
    // Shuffle by permutation so planted records are not clustered at the end,
    // then hand out ids by final position and translate plant targets.
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<std::string> id_of_creation(records.size());
    corpus.hospital.reserve(records.size());
    char buf[24];
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        std::snprintf(buf, sizeof buf, "H%06zu", pos + 1);
        id_of_creation[order[pos]] = buf;
        corpus.hospital.push_back(std::move(records[order[pos]]));
        corpus.hospital.back().record_id = buf;
    }

    rng.shuffle(externals);
    for (std::size_t pos = 0; pos < externals.size(); ++pos) {
        std::snprintf(buf, sizeof buf, "E%06zu", pos + 1);
        externals[pos].record.ext_id = buf;
        externals[pos].entry.ext_id = buf;
        if (externals[pos].has_target)
            externals[pos].entry.record_id = id_of_creation[externals[pos].target];
        corpus.externals.push_back(std::move(externals[pos].record));
        corpus.manifest.entries.push_back(std::move(externals[pos].entry));
    }
    std::sort(corpus.manifest.entries.begin(), corpus.manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.ext_id < b.ext_id; });

    // --- population table -------------------------------------------------
    std::set<std::string> zip3s;
    for (const auto& rec : corpus.hospital) zip3s.insert(rec.zip.substr(0, 3));
    for (const auto& zip3 : zip3s) {
        std::int64_t population = rng.chance(1, 3)
                                      ? static_cast<std::int64_t>(rng.below(20001))
                                      : 20001 + static_cast<std::int64_t>(rng.below(1000000));
        corpus.population.set(zip3, population);
    }
    return corpus;
}

void write_manifest(std::ostream& out, const GroundTruthManifest& manifest) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : manifest.entries) {
        nlohmann::json entry;
        entry["ext_id"] = e.ext_id;
        entry["expected"] = expectation_name(e.expected);
        entry["record_id"] = e.record_id;
        entry["planted_drop"] = e.planted_drop.to_string();
        entry["expected_level"] = e.expected_level;
        entry["expected_count"] = e.expected_count;
        entry["sensitive"] = e.sensitive;
        entries.push_back(std::move(entry));
    }
    nlohmann::json doc;
    doc["seed"] = manifest.seed;
    doc["entries"] = std::move(entries);
    out << doc.dump(2) << '\n';
}

GroundTruthManifest read_manifest(std::istream& in) {
    nlohmann::json doc = nlohmann::json::parse(in);
    GroundTruthManifest manifest;
    manifest.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& entry : doc.at("entries")) {
        ManifestEntry e;
        e.ext_id = entry.at("ext_id").get<std::string>();
        std::string expected = entry.at("expected").get<std::string>();
        bool known = false;
        for (Expectation x : {Expectation::Unique, Expectation::Ambiguous, Expectation::NoMatch,
                              Expectation::Unconstrained})
            if (expected == expectation_name(x)) {
                e.expected = x;
                known = true;
            }
        if (!known) throw std::runtime_error("manifest: unknown expectation '" + expected + "'");
        e.record_id = entry.at("record_id").get<std::string>();
        auto drop = FieldSet::from_string(entry.at("planted_drop").get<std::string>());
        if (!drop) throw std::runtime_error("manifest: bad planted_drop");
        e.planted_drop = *drop;
        e.expected_level = entry.at("expected_level").get<int>();
        e.expected_count = entry.at("expected_count").get<std::size_t>();
        e.sensitive = entry.at("sensitive").get<bool>();
        manifest.entries.push_back(std::move(e));
    }
    return manifest;
}

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* file) {
        std::ofstream out(dir / file, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / file).string());
        return out;
    };
    {
        auto out = open("hospital.csv");
        write_hospital_dataset(out, corpus.hospital);
    }
    {
        auto out = open("externals.csv");
        write_external_dataset(out, corpus.externals);
    }
    {
        auto out = open("public_records.csv");
        write_public_records(out, corpus.public_records);
    }
    {
        auto out = open("population.csv");
        write_population_table(out, corpus.population);
    }
    {
        auto out = open("manifest.json");
        write_manifest(out, corpus.manifest);
    }
}

}  // namespace reident
