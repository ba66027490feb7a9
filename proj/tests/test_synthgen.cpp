#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "reident/audit.hpp"
#include "reident/parse.hpp"
#include "reident/privacy.hpp"
#include "reident/synthgen.hpp"

using namespace reident;
namespace fs = std::filesystem;

namespace {

SynthConfig small_config(std::uint64_t seed = 20111018) {
    SynthConfig c = SynthConfig::defaults();
    c.seed = seed;
    c.n_hospital_records = 400;
    c.n_externals = 30;
    c.n_planted_unique = 8;
    c.n_planted_ambiguous = 3;
    c.n_planted_nomatch = 3;
    c.n_planted_sensitive = 2;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AuditReport audit_corpus(const SynthCorpus& corpus) {
    AuditConfig config;
    config.sensitive_prefixes = default_sensitive_prefixes();
    MatchIndex index(corpus.hospital);
    return run_audit(corpus.externals, index, corpus.public_records, config);
}

const CaseResult& case_for(const AuditReport& report, const std::string& ext_id) {
    auto it = std::lower_bound(report.cases.begin(), report.cases.end(), ext_id,
                               [](const CaseResult& c, const std::string& id) { return c.ext_id < id; });
    REQUIRE(it != report.cases.end());
    REQUIRE(it->ext_id == ext_id);
    return *it;
}

/// Every planted manifest entry must be reproduced by the audit, including
/// relaxation level, suppressed field set and sensitivity flag.
void check_fidelity(const SynthCorpus& corpus, const AuditReport& report) {
    for (const auto& entry : corpus.manifest.entries) {
        const CaseResult& result = case_for(report, entry.ext_id);
        CAPTURE(entry.ext_id);
        switch (entry.expected) {
            case Expectation::Unique: {
                REQUIRE(result.outcome.classification == MatchClass::Unique);
                REQUIRE(result.outcome.unique_id() != nullptr);
                CHECK(*result.outcome.unique_id() == entry.record_id);
                CHECK(result.outcome.relaxation_level == entry.expected_level);
                CHECK(result.outcome.dropped == entry.planted_drop);
                CHECK(result.outcome.candidate_count() == 1);
                CHECK(result.sensitive == entry.sensitive);
                break;
            }
            case Expectation::Ambiguous:
                CHECK(result.outcome.classification == MatchClass::Ambiguous);
                CHECK(result.outcome.candidate_count() == entry.expected_count);
                CHECK(result.outcome.relaxation_level == 0);
                CHECK(result.outcome.dropped == FieldSet{});
                break;
            case Expectation::NoMatch:
                CHECK(result.outcome.classification == MatchClass::NoMatch);
                CHECK(result.outcome.candidate_count() == 0);
                break;
            case Expectation::Unconstrained: break;  // anything goes
        }
    }
}

std::string rejection(const SynthConfig& c) {
    try {
        generate(c);
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("generated corpus honors the configured sizes") {
    SynthConfig config = small_config();
    SynthCorpus corpus = generate(config);

    CHECK(corpus.hospital.size() == config.n_hospital_records);
    CHECK(corpus.externals.size() == config.n_externals);
    REQUIRE(corpus.manifest.entries.size() == config.n_externals);
    CHECK(corpus.manifest.seed == config.seed);

    std::map<Expectation, std::size_t> counts;
    for (const auto& e : corpus.manifest.entries) ++counts[e.expected];
    CHECK(counts[Expectation::Unique] == config.n_planted_unique);
    CHECK(counts[Expectation::Ambiguous] == config.n_planted_ambiguous);
    CHECK(counts[Expectation::NoMatch] == config.n_planted_nomatch);
    CHECK(counts[Expectation::Unconstrained] ==
          config.n_externals - config.n_planted_unique - config.n_planted_ambiguous -
              config.n_planted_nomatch);

    // manifest sorted by ext_id, one entry per external
    CHECK(std::is_sorted(corpus.manifest.entries.begin(), corpus.manifest.entries.end(),
                         [](const ManifestEntry& a, const ManifestEntry& b) {
                             return a.ext_id < b.ext_id;
                         }));
    std::set<std::string> ext_ids;
    for (const auto& e : corpus.externals) ext_ids.insert(e.ext_id);
    CHECK(ext_ids.size() == corpus.externals.size());
    for (const auto& entry : corpus.manifest.entries) CHECK(ext_ids.count(entry.ext_id) == 1);

    // record ids unique; every planted-unique target exists
    std::set<std::string> record_ids;
    for (const auto& r : corpus.hospital) record_ids.insert(r.record_id);
    CHECK(record_ids.size() == corpus.hospital.size());
    std::vector<std::size_t> ambiguous_sizes;
    std::size_t sensitive_entries = 0;
    for (const auto& entry : corpus.manifest.entries) {
        if (entry.expected == Expectation::Unique) {
            CHECK(record_ids.count(entry.record_id) == 1);
            CHECK(entry.expected_count == 1);
            CHECK(entry.expected_level == static_cast<int>(entry.planted_drop.size()));
            if (entry.sensitive) ++sensitive_entries;
        } else {
            CHECK(!entry.sensitive);
        }
        if (entry.expected == Expectation::Ambiguous) ambiguous_sizes.push_back(entry.expected_count);
    }
    CHECK(sensitive_entries == config.n_planted_sensitive);
    // clone groups alternate between two and three records
    std::sort(ambiguous_sizes.begin(), ambiguous_sizes.end());
    CHECK(ambiguous_sizes == std::vector<std::size_t>{2, 2, 3});
}

TEST_CASE("the same seed reproduces the corpus bit for bit") {
    SynthCorpus a = generate(small_config());
    SynthCorpus b = generate(small_config());

    auto serialize = [](const SynthCorpus& c) {
        std::ostringstream out;
        write_hospital_dataset(out, c.hospital);
        write_external_dataset(out, c.externals);
        write_public_records(out, c.public_records);
        write_population_table(out, c.population);
        write_manifest(out, c.manifest);
        return out.str();
    };
    CHECK(serialize(a) == serialize(b));

    SynthConfig other = small_config(20111019);
    CHECK(serialize(generate(other)) != serialize(a));
}

TEST_CASE("written corpora are byte-identical across runs") {
    fs::path dir_a = fs::temp_directory_path() / "reident_synth_run_a";
    fs::path dir_b = fs::temp_directory_path() / "reident_synth_run_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    write_corpus(generate(small_config()), dir_a);
    write_corpus(generate(small_config()), dir_b);

    for (const char* file : {"hospital.csv", "externals.csv", "public_records.csv",
                             "population.csv", "manifest.json"}) {
        CAPTURE(file);
        std::string bytes_a = slurp(dir_a / file);
        CHECK(!bytes_a.empty());
        CHECK(bytes_a == slurp(dir_b / file));
    }
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("the corpus round-trips through the parsers with no row errors") {
    fs::path dir = fs::temp_directory_path() / "reident_synth_roundtrip";
    fs::remove_all(dir);
    SynthCorpus corpus = generate(small_config());
    write_corpus(corpus, dir);

    {
        std::ifstream in(dir / "hospital.csv", std::ios::binary);
        auto parsed = parse_hospital_dataset(in);
        CHECK(parsed.report.clean());
        CHECK(parsed.records.size() == corpus.hospital.size());
        // writer stability: re-serializing the parse reproduces the file
        std::ostringstream out;
        write_hospital_dataset(out, parsed.records);
        CHECK(out.str() == slurp(dir / "hospital.csv"));
    }
    {
        std::ifstream in(dir / "externals.csv", std::ios::binary);
        auto parsed = parse_external_dataset(in);
        CHECK(parsed.report.clean());
        CHECK(parsed.records.size() == corpus.externals.size());
        std::ostringstream out;
        write_external_dataset(out, parsed.records);
        CHECK(out.str() == slurp(dir / "externals.csv"));
    }
    {
        std::ifstream in(dir / "public_records.csv", std::ios::binary);
        auto parsed = parse_public_records(in);
        CHECK(parsed.report.clean());
        CHECK(parsed.table.rows.size() == corpus.public_records.rows.size());
    }
    {
        std::ifstream in(dir / "population.csv", std::ios::binary);
        ZipPopulationTable pop = parse_population_table(in);
        CHECK(pop.entries() == corpus.population.entries());
    }
    {
        std::ifstream in(dir / "manifest.json", std::ios::binary);
        GroundTruthManifest manifest = read_manifest(in);
        CHECK(manifest.seed == corpus.manifest.seed);
        REQUIRE(manifest.entries.size() == corpus.manifest.entries.size());
        for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
            const ManifestEntry& got = manifest.entries[i];
            const ManifestEntry& want = corpus.manifest.entries[i];
            CAPTURE(want.ext_id);
            CHECK(got.ext_id == want.ext_id);
            CHECK(got.expected == want.expected);
            CHECK(got.record_id == want.record_id);
            CHECK(got.planted_drop == want.planted_drop);
            CHECK(got.expected_level == want.expected_level);
            CHECK(got.expected_count == want.expected_count);
            CHECK(got.sensitive == want.sensitive);
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("every hospital zip3 has a population entry") {
    SynthCorpus corpus = generate(small_config());
    std::set<std::string> zip3s;
    for (const auto& r : corpus.hospital) zip3s.insert(r.zip.substr(0, 3));
    CHECK(corpus.population.size() == zip3s.size());
    for (const auto& zip3 : zip3s) {
        CAPTURE(zip3);
        CHECK(corpus.population.entries().count(zip3) == 1);
    }
}

TEST_CASE("the audit reproduces every planted expectation") {
    SynthCorpus corpus = generate(small_config());
    AuditReport report = audit_corpus(corpus);
    CHECK(report.total == corpus.externals.size());
    CHECK(std::is_sorted(report.cases.begin(), report.cases.end(),
                         [](const CaseResult& a, const CaseResult& b) { return a.ext_id < b.ext_id; }));
    check_fidelity(corpus, report);
}

TEST_CASE("a fully planted corpus reproduces the manifest tallies exactly") {
    SynthConfig config = SynthConfig::defaults();
    config.seed = 40;
    config.n_hospital_records = 2000;
    config.n_externals = 75;
    config.n_planted_unique = 40;
    config.n_planted_ambiguous = 10;
    config.n_planted_nomatch = 25;
    config.n_planted_sensitive = 5;

    SynthCorpus corpus = generate(config);
    AuditReport report = audit_corpus(corpus);

    CHECK(report.total == 75);
    CHECK(report.unique == 40);
    CHECK(report.ambiguous == 10);
    CHECK(report.no_match == 25);
    CHECK(report.conflict == 0);
    CHECK(report.sensitive_unique == 5);

    // The generator cycles through suppression patterns {}, {}, {zip},
    // {age}, {hospital}, {age;hospital}: 40 cases = 6 full cycles + 4.
    std::map<int, std::size_t> by_level = {{0, 14}, {1, 20}, {2, 6}};
    CHECK(report.unique_by_level == by_level);
    std::map<std::string, std::size_t> by_dropped = {
        {"-", 14}, {"age", 7}, {"age;hospital", 6}, {"hospital", 6}, {"zip", 7}};
    CHECK(report.unique_by_dropped == by_dropped);

    check_fidelity(corpus, report);
}

TEST_CASE("impossible configurations are rejected with a reason") {
    SynthConfig base = small_config();

    SynthConfig c = base;
    c.n_externals = 10;  // planted cases alone need 14
    CHECK(rejection(c).find("exceed n_externals") != std::string::npos);

    c = base;
    c.n_planted_sensitive = c.n_planted_unique + 1;
    CHECK(rejection(c).find("n_planted_sensitive") != std::string::npos);

    c = base;
    c.n_hospital_records = 10;
    CHECK(rejection(c).find("hospital records") != std::string::npos);

    c = base;
    c.zip_pool.clear();
    CHECK(rejection(c).find("zip_pool") != std::string::npos);

    c = base;
    c.zip_pool.push_back("96500");  // inside the reserved band
    CHECK(rejection(c).find("reserved") != std::string::npos);

    c = base;
    c.zip_pool.push_back("1234");
    CHECK(rejection(c).find("5-digit") != std::string::npos);

    c = base;
    c.hospital_pool.clear();
    CHECK(rejection(c).find("hospital_pool") != std::string::npos);

    c = base;
    c.hospital_pool.push_back("750");  // reserved for plant isolators
    CHECK(rejection(c).find("reserved") != std::string::npos);

    c = base;
    c.incident_mix.clear();
    CHECK(rejection(c).find("incident_mix") != std::string::npos);

    c = base;
    c.incident_mix["assault"] = 0.0;
    CHECK(rejection(c).find("positive") != std::string::npos);

    c = base;
    c.sensitive_rate = 1.5;
    CHECK(rejection(c).find("sensitive_rate") != std::string::npos);

    c = base;
    c.year = 1600;
    CHECK(rejection(c).find("year") != std::string::npos);

    CHECK(rejection(base).empty());  // the baseline itself is feasible
}

TEST_CASE("background draws follow the configured rates") {
    SynthConfig config = SynthConfig::defaults();
    config.seed = 7;
    config.n_hospital_records = 100000;
    config.n_externals = 0;
    config.n_planted_unique = 0;
    config.n_planted_ambiguous = 0;
    config.n_planted_nomatch = 0;

    SynthCorpus corpus = generate(config);
    REQUIRE(corpus.hospital.size() == 100000);

    std::size_t motor_vehicle = 0, assault = 0, flagged = 0, unknown_gender = 0;
    auto sensitive_prefixes = default_sensitive_prefixes();
    for (const auto& r : corpus.hospital) {
        std::string family = r.diagnoses.front().text.substr(0, 3);
        if (family == "E81" || family == "E82") ++motor_vehicle;
        if (family == "E96") ++assault;
        if (is_sensitive(r, sensitive_prefixes)) ++flagged;
        if (r.gender == Gender::Unknown) ++unknown_gender;
    }

    // Fixed seed makes these deterministic; bounds are mean +- 3 sigma of
    // the corresponding binomial, so the draw logic cannot drift silently.
    CHECK(motor_vehicle >= 715);   // p = 0.008
    CHECK(motor_vehicle <= 885);
    CHECK(assault >= 157);         // p = 0.002
    CHECK(assault <= 243);
    CHECK(flagged >= 2838);        // p = 0.03
    CHECK(flagged <= 3162);
    CHECK(unknown_gender >= 906);  // p = 0.01
    CHECK(unknown_gender <= 1094);
}

TEST_CASE("manifest serialization round-trips through json") {
    SynthCorpus corpus = generate(small_config());
    std::ostringstream out;
    write_manifest(out, corpus.manifest);
    std::string text = out.str();

    // spot-check the document shape without relying on formatting details
    CHECK(text.find("\"seed\"") != std::string::npos);
    CHECK(text.find("\"entries\"") != std::string::npos);
    CHECK(text.find("\"planted_drop\"") != std::string::npos);
    CHECK(text.find("\"unconstrained\"") != std::string::npos);

    std::istringstream in(text);
    GroundTruthManifest back = read_manifest(in);
    CHECK(back.seed == corpus.manifest.seed);
    REQUIRE(back.entries.size() == corpus.manifest.entries.size());
    for (std::size_t i = 0; i < back.entries.size(); ++i) {
        CHECK(back.entries[i].ext_id == corpus.manifest.entries[i].ext_id);
        CHECK(back.entries[i].expected == corpus.manifest.entries[i].expected);
        CHECK(back.entries[i].planted_drop == corpus.manifest.entries[i].planted_drop);
    }

    std::istringstream junk(R"({"seed": 1, "entries": [{"ext_id": "E1", "expected": "sideways",
        "record_id": "", "planted_drop": "-", "expected_level": 0, "expected_count": 0,
        "sensitive": false}]})");
    CHECK_THROWS_AS(read_manifest(junk), std::runtime_error);
}

TEST_CASE("expectation names are stable") {
    CHECK(std::string(expectation_name(Expectation::Unique)) == "unique");
    CHECK(std::string(expectation_name(Expectation::Ambiguous)) == "ambiguous");
    CHECK(std::string(expectation_name(Expectation::NoMatch)) == "no_match");
    CHECK(std::string(expectation_name(Expectation::Unconstrained)) == "unconstrained");
}
