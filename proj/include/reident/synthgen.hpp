#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "reident/matcher.hpp"
#include "reident/model.hpp"
#include "reident/privacy.hpp"

namespace reident {

/// Knobs for the seeded corpus generator. The planted_* counts carve that
/// many externals out of n_externals and pair them with constructed
/// hospital records whose audit outcome is known by construction; the rest
/// are random noise.
struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t n_hospital_records = 1000;
    std::size_t n_externals = 50;
    std::size_t n_planted_unique = 12;
    std::size_t n_planted_ambiguous = 4;
    std::size_t n_planted_nomatch = 4;
    /// How many planted-unique targets carry a sensitive diagnosis.
    std::size_t n_planted_sensitive = 0;
    std::vector<std::string> zip_pool;       // background ZIPs (5 digits)
    std::vector<std::string> hospital_pool;  // background hospital codes
    /// incident type -> relative weight; drives the first diagnosis family
    /// of background records (known types via the incident mapping, any
    /// other key draws a benign family).
    std::map<std::string, double> incident_mix;
    double sensitive_rate = 0.03;  // share of background records with a
                                   // sensitive diagnosis
    int year = 2011;

    static SynthConfig defaults();
};

std::vector<std::string> default_zip_pool(std::size_t n);
std::vector<std::string> default_hospital_pool(std::size_t n);
std::map<std::string, double> default_incident_mix();

enum class Expectation : std::uint8_t { Unique, Ambiguous, NoMatch, Unconstrained };
const char* expectation_name(Expectation e);

struct ManifestEntry {
    std::string ext_id;
    Expectation expected = Expectation::Unconstrained;
    std::string record_id;       // target record for planted unique cases
    FieldSet planted_drop;       // suppression set the unique case needs
    int expected_level = 0;
    std::size_t expected_count = 0;  // candidate count: 1 unique, group size
                                     // for ambiguous, 0 for no-match
    bool sensitive = false;          // target carries a planted sensitive code
};

struct GroundTruthManifest {
    std::uint64_t seed = 0;
    std::vector<ManifestEntry> entries;  // one per external, sorted by ext_id
};

void write_manifest(std::ostream& out, const GroundTruthManifest& manifest);
GroundTruthManifest read_manifest(std::istream& in);

struct SynthCorpus {
    std::vector<HospitalRecord> hospital;
    std::vector<ExternalRecord> externals;
    PublicRecordsTable public_records;
    ZipPopulationTable population;
    GroundTruthManifest manifest;
};

/// Deterministic: the same config yields the same corpus on every platform.
/// Throws std::invalid_argument when the requested sizes cannot honor the
/// planting guarantees.
SynthCorpus generate(const SynthConfig& config);

/// Writes hospital.csv, externals.csv, public_records.csv, population.csv
/// and manifest.json into `dir` (created if missing).
void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

}  // namespace reident
