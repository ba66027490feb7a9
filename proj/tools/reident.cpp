// reident: batch re-identification risk auditing over de-identified
// hospitalization data. One binary, six subcommands: ingest, audit,
// transform, stats, synth, match.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "reident/audit.hpp"
#include "reident/csv.hpp"
#include "reident/matcher.hpp"
#include "reident/model.hpp"
#include "reident/parse.hpp"
#include "reident/privacy.hpp"
#include "reident/synthgen.hpp"
#include "reident/temporal.hpp"

namespace {

using namespace reident;

/// Bad flag combinations and values; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw UsageError(what);
}

// ---------------------------------------------------------------------------
// Declarative config file: a flat JSON object whose keys are long option
// names. Values fill in options the command line left untouched, so explicit
// flags always win.

class ConfigFile {
  public:
    void load(const std::string& path) {
        auto in = open_input(path);
        nlohmann::json doc = nlohmann::json::parse(in);
        if (!doc.is_object()) throw std::runtime_error(path + ": config must be a JSON object");
        values_ = std::move(doc);
    }

    void apply(const CLI::App& cmd, const std::string& key,
               const std::function<void(const nlohmann::json&)>& set) const {
        if (!values_.contains(key)) return;
        const CLI::Option* opt = cmd.get_option_no_throw("--" + key);
        if (opt != nullptr && opt->count() > 0) return;  // flag given: flags win
        set(values_.at(key));
    }

    template <class T>
    void merge(const CLI::App& cmd, const std::string& key, T& target) const {
        apply(cmd, key, [&](const nlohmann::json& v) { target = v.get<T>(); });
    }

  private:
    nlohmann::json values_ = nlohmann::json::object();
};

// ---------------------------------------------------------------------------
// Shared option bundles

struct MatchFlags {
    std::string droppable = FieldSet::default_droppable().to_string();
    int max_drop = 2;
    int slack_days = 0;

    void attach(CLI::App& cmd) {
        cmd.add_option("--droppable", droppable,
                       "fields the relaxation search may suppress, ';'-separated");
        cmd.add_option("--max-drop", max_drop, "relaxation depth: 0, 1 or 2")
            ->check(CLI::Range(0, 2));
        cmd.add_option("--slack-days", slack_days, "widen admission windows by this many days")
            ->check(CLI::NonNegativeNumber);
    }

    void merge(const ConfigFile& config, const CLI::App& cmd) {
        config.merge(cmd, "droppable", droppable);
        config.merge(cmd, "max-drop", max_drop);
        config.merge(cmd, "slack-days", slack_days);
    }

    MatchConfig resolve() const {
        auto fields = FieldSet::from_string(droppable);
        if (!fields) throw UsageError("--droppable: unknown field in '" + droppable + "'");
        if (max_drop < 0 || max_drop > 2) throw UsageError("--max-drop must be 0, 1 or 2");
        if (slack_days < 0) throw UsageError("--slack-days must be non-negative");
        MatchConfig mc;
        mc.droppable = *fields;
        mc.max_drop = max_drop;
        mc.slack_days = slack_days;
        return mc;
    }
};

std::vector<std::string> load_sensitive(const std::string& path) {
    if (path.empty()) return default_sensitive_prefixes();
    auto in = open_input(path);
    return parse_sensitive_prefixes(in);
}

void warn_row_errors(const std::string& file, const ParseReport& report) {
    if (report.clean()) return;
    std::cerr << "warning: " << file << ": skipped " << report.errors.size()
              << " malformed row(s)\n";
}

std::vector<HospitalRecord> load_hospital(const std::string& path) {
    auto in = open_input(path);
    auto result = parse_hospital_dataset(in);
    warn_row_errors(path, result.report);
    return std::move(result.records);
}

std::vector<ExternalRecord> load_externals(const std::string& path) {
    auto in = open_input(path);
    auto result = parse_external_dataset(in);
    warn_row_errors(path, result.report);
    return std::move(result.records);
}

PublicRecordsTable load_public_records(const std::string& path) {
    if (path.empty()) return {};
    auto in = open_input(path);
    auto result = parse_public_records(in);
    warn_row_errors(path, result.report);
    return std::move(result.table);
}

// ---------------------------------------------------------------------------
// ingest

void echo_hospital(const HospitalRecord& r) {
    std::vector<std::string> dx;
    for (const auto& code : r.diagnoses) dx.push_back(code.text);
    std::cout << "  " << r.record_id << " hospital=" << r.hospital
              << " admit_type=" << r.admit_type << " los=" << r.length_of_stay
              << " discharge=" << r.discharge_year << '-' << r.discharge_month << " age="
              << r.age_years << "y/" << r.age_months << "m gender=" << gender_char(r.gender)
              << " zip=" << r.zip << " dx=" << join_multi(dx)
              << " procedures=" << join_multi(r.procedures) << " payers=" << join_multi(r.payers)
              << " charges=" << (r.charges_cents ? format_cents(*r.charges_cents) : "-") << '\n';
}

void echo_external(const ExternalRecord& r) {
    std::cout << "  " << r.ext_id << " name=" << r.name.value_or("-")
              << " gender=" << (r.gender ? std::string(1, gender_char(*r.gender)) : "-")
              << " age=" << (r.age_years ? std::to_string(*r.age_years) : "-")
              << " incident=" << (r.incident_date ? format_date(*r.incident_date) : "-")
              << " zips=" << join_multi(r.zip_candidates)
              << " hospitals=" << join_multi(r.hospital_candidates)
              << " prefixes=" << join_multi(r.diagnosis_prefixes)
              << " dob=" << (r.dob ? format_date(*r.dob) : "-") << " source=" << r.source << '\n';
}

struct IngestCmd {
    std::string hospital, externals, public_records, dictionary, groups, incidents, population,
        sensitive;
    bool verbose = false;

    int run() {
        bool any = false;
        std::size_t row_errors = 0;
        auto report_file = [&](const std::string& path, const ParseReport& report) {
            std::cout << path << ": " << report.rows_kept << " of " << report.rows_seen
                      << " rows ingested, " << report.errors.size() << " error(s)\n";
            for (const auto& err : report.errors)
                std::cout << path << " record " << err.record << ": " << err.reason << '\n';
            row_errors += report.errors.size();
        };

        if (!hospital.empty()) {
            any = true;
            auto in = open_input(hospital);
            auto result = parse_hospital_dataset(in);
            report_file(hospital, result.report);
            if (verbose)
                for (const auto& rec : result.records) echo_hospital(rec);
        }
        if (!externals.empty()) {
            any = true;
            auto in = open_input(externals);
            auto result = parse_external_dataset(in);
            report_file(externals, result.report);
            if (verbose)
                for (const auto& rec : result.records) echo_external(rec);
        }
        if (!public_records.empty()) {
            any = true;
            auto in = open_input(public_records);
            auto result = parse_public_records(in);
            report_file(public_records, result.report);
        }
        auto whole_file = [&](const std::string& path, auto parse, const char* what) {
            if (path.empty()) return std::size_t{0};
            any = true;
            auto in = open_input(path);
            auto parsed = parse(in);
            std::cout << path << ": " << parsed << ' ' << what << '\n';
            return parsed;
        };
        whole_file(dictionary, [](std::istream& in) { return parse_code_dictionary(in).size(); },
                   "dictionary entries");
        whole_file(groups, [](std::istream& in) { return parse_group_aliases(in).size(); },
                   "group aliases");
        whole_file(incidents, [](std::istream& in) { return parse_incident_map(in).size(); },
                   "incident mappings");
        whole_file(population, [](std::istream& in) { return parse_population_table(in).size(); },
                   "population prefixes");
        whole_file(sensitive, [](std::istream& in) { return parse_sensitive_prefixes(in).size(); },
                   "sensitive prefixes");

        require(any, "ingest: no input files given");
        if (row_errors > 0) {
            std::cout << "total row errors: " << row_errors << '\n';
            return 1;
        }
        std::cout << "0 errors\n";
        return 0;
    }
};

// ---------------------------------------------------------------------------
// audit

struct AuditCmd {
    std::string hospital, externals, public_records, sensitive, out_dir = "audit-out";
    std::string format = "table";
    MatchFlags match;
    int threads = 1;

    int run() {
        require(!hospital.empty(), "audit: --hospital is required");
        require(!externals.empty(), "audit: --externals is required");
        require(format == "table" || format == "machine",
                "audit: --format must be 'table' or 'machine'");

        AuditConfig config;
        config.match = match.resolve();
        config.sensitive_prefixes = load_sensitive(sensitive);
        config.threads = threads;

        MatchIndex index(load_hospital(hospital));
        auto exts = load_externals(externals);
        PublicRecordsTable table = load_public_records(public_records);

        AuditReport report = run_audit(exts, index, table, config);

        {
            auto out = open_output(std::filesystem::path(out_dir) / "cases.csv");
            write_case_table(out, report);
        }
        {
            auto out = open_output(std::filesystem::path(out_dir) / "summary.txt");
            write_summary(out, report);
        }
        {
            auto out = open_output(std::filesystem::path(out_dir) / "report.json");
            write_json_report(out, report);
        }
        if (format == "machine")
            write_json_report(std::cout, report);
        else
            write_summary(std::cout, report);
        return 0;
    }
};

// ---------------------------------------------------------------------------
// transform

struct TransformCmd {
    std::string hospital, population, out_file;

    int run() {
        require(!hospital.empty(), "transform: --hospital is required");
        require(!population.empty(), "transform: --population is required");
        require(!out_file.empty(), "transform: --out is required");

        auto records = load_hospital(hospital);
        ZipPopulationTable pop;
        {
            auto in = open_input(population);
            pop = parse_population_table(in);
        }
        auto generalized = safe_harbor(records, pop);
        auto out = open_output(out_file);
        write_hospital_dataset(out, generalized);
        std::cout << "wrote " << generalized.size() << " generalized records to " << out_file
                  << '\n';
        return 0;
    }
};

// ---------------------------------------------------------------------------
// stats

struct StatsCmd {
    std::string hospital, qi, format = "table";

    int run() {
        require(!hospital.empty(), "stats: --hospital is required");
        require(!qi.empty(), "stats: --qi is required");
        require(format == "table" || format == "machine",
                "stats: --format must be 'table' or 'machine'");

        std::vector<QuasiId> quasis;
        std::stringstream tokens(qi);
        std::string token;
        while (std::getline(tokens, token, ';')) {
            auto q = quasi_id_from_name(token);
            if (!q) {
                std::string valid;
                for (const auto& name : quasi_id_names()) {
                    if (!valid.empty()) valid += ", ";
                    valid += name;
                }
                throw UsageError("stats: unknown quasi-identifier '" + token +
                                 "'; valid fields: " + valid);
            }
            if (std::find(quasis.begin(), quasis.end(), *q) == quasis.end()) quasis.push_back(*q);
        }
        require(!quasis.empty(), "stats: --qi lists no fields");

        auto records = load_hospital(hospital);
        if (records.empty()) std::cerr << "warning: empty dataset, uniqueness defined as 0\n";
        auto hist = k_anonymity_histogram(records, quasis);
        double fraction = uniqueness_fraction(hist);

        if (format == "machine") {
            nlohmann::json histogram = nlohmann::json::object();
            for (const auto& [k, count] : hist) histogram[std::to_string(k)] = count;
            nlohmann::json doc;
            doc["histogram"] = std::move(histogram);
            doc["records"] = records.size();
            doc["uniqueness_fraction"] = fraction;
            std::cout << doc.dump(2) << '\n';
        } else {
            std::cout << "records: " << records.size() << '\n';
            for (const auto& [k, count] : hist)
                std::cout << "class size " << k << ": " << count << " record(s)\n";
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f", fraction);
            std::cout << "uniqueness fraction: " << buf << '\n';
        }
        return 0;
    }
};

// ---------------------------------------------------------------------------
// synth

struct SynthCmd {
    std::string out_dir;
    std::uint64_t seed = 1;
    std::size_t records = 1000, externals = 50;
    std::size_t planted_unique = 12, planted_ambiguous = 4, planted_nomatch = 4,
                planted_sensitive = 0;
    double sensitive_rate = 0.03;
    int year = 2011;
    std::size_t zip_pool = 80, hospital_pool = 25;

    int run() {
        require(!out_dir.empty(), "synth: --out is required");
        SynthConfig config;
        config.seed = seed;
        config.n_hospital_records = records;
        config.n_externals = externals;
        config.n_planted_unique = planted_unique;
        config.n_planted_ambiguous = planted_ambiguous;
        config.n_planted_nomatch = planted_nomatch;
        config.n_planted_sensitive = planted_sensitive;
        config.sensitive_rate = sensitive_rate;
        config.year = year;
        config.zip_pool = default_zip_pool(zip_pool);
        config.hospital_pool = default_hospital_pool(hospital_pool);
        config.incident_mix = default_incident_mix();

        SynthCorpus corpus = generate(config);
        write_corpus(corpus, out_dir);
        std::cout << "wrote " << corpus.hospital.size() << " hospital records and "
                  << corpus.externals.size() << " externals to " << out_dir << '\n';
        return 0;
    }
};

// ---------------------------------------------------------------------------
// match (single-case debug)

struct MatchCmd {
    std::string hospital, externals, public_records, ext_id, record_id;
    MatchFlags match;

    int run() {
        require(!hospital.empty(), "match: --hospital is required");
        require(!externals.empty(), "match: --externals is required");
        require(!ext_id.empty(), "match: --ext-id is required");

        MatchConfig config = match.resolve();
        auto records = load_hospital(hospital);
        auto exts = load_externals(externals);
        PublicRecordsTable table = load_public_records(public_records);

        const ExternalRecord* ext = nullptr;
        for (const auto& e : exts)
            if (e.ext_id == ext_id) ext = &e;
        if (!ext) throw std::runtime_error("match: ext_id '" + ext_id + "' not found");

        EnrichResult enriched = enrich(*ext, table);
        std::cout << "external " << ext_id << " (enrichment: "
                  << enrichment_status_name(enriched.status) << ")\n";

        auto print_verdicts = [&](const HospitalRecord& rec) {
            std::cout << "  vs record " << rec.record_id << ":\n";
            for (const auto& [field, verdict] :
                 evaluate_predicates(enriched.record, rec, config.slack_days))
                std::cout << "    " << field_name(field) << ": " << verdict_name(verdict) << '\n';
        };

        if (!record_id.empty()) {
            for (const auto& rec : records)
                if (rec.record_id == record_id) {
                    print_verdicts(rec);
                    return 0;
                }
            throw std::runtime_error("match: record_id '" + record_id + "' not found");
        }

        RelaxationTrace trace;
        MatchOutcome outcome = match_with_relaxation(enriched.record, records, config, &trace);
        for (const auto& step : trace)
            std::cout << "  level " << step.level << " drop " << step.dropped.to_string() << ": "
                      << step.candidates << " candidate(s)\n";
        std::cout << "classification: " << match_class_name(outcome.classification) << " at level "
                  << outcome.relaxation_level << ", dropped " << outcome.dropped.to_string()
                  << ", " << outcome.candidate_count() << " candidate(s)\n";
        std::size_t shown = 0;
        for (const auto& id : outcome.candidate_ids) {
            if (++shown > 5) {
                std::cout << "  ... " << outcome.candidate_ids.size() - 5 << " more\n";
                break;
            }
            for (const auto& rec : records)
                if (rec.record_id == id) print_verdicts(rec);
        }
        return 0;
    }
};

int run(int argc, char** argv) {
    CLI::App app{"deterministic re-identification risk audit for de-identified "
                 "hospitalization data"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON config file; keys are long option names, command-line flags win "
                   "(default: $REIDENT_CONFIG)");

    IngestCmd ingest;
    CLI::App* c_ingest = app.add_subcommand("ingest", "parse and validate input files");
    c_ingest->fallthrough();  // lets --config appear after the subcommand
    c_ingest->add_option("--hospital", ingest.hospital, "hospital dataset CSV");
    c_ingest->add_option("--externals", ingest.externals, "external records CSV");
    c_ingest->add_option("--public-records", ingest.public_records, "public records CSV");
    c_ingest->add_option("--dictionary", ingest.dictionary, "code dictionary CSV");
    c_ingest->add_option("--groups", ingest.groups, "hospital group alias CSV");
    c_ingest->add_option("--incidents", ingest.incidents, "incident-type mapping CSV");
    c_ingest->add_option("--population", ingest.population, "ZIP3 population CSV");
    c_ingest->add_option("--sensitive", ingest.sensitive, "sensitive prefix list");
    c_ingest->add_flag("--verbose", ingest.verbose, "echo each parsed record");

    AuditCmd audit;
    CLI::App* c_audit = app.add_subcommand("audit", "run the full matching audit");
    c_audit->fallthrough();
    c_audit->add_option("--hospital", audit.hospital, "hospital dataset CSV");
    c_audit->add_option("--externals", audit.externals, "external records CSV");
    c_audit->add_option("--public-records", audit.public_records, "public records CSV");
    c_audit->add_option("--sensitive", audit.sensitive,
                        "sensitive prefix list (built-in default)");
    c_audit->add_option("--out", audit.out_dir, "output directory");
    c_audit->add_option("--format", audit.format, "stdout format: table or machine");
    c_audit->add_option("--threads", audit.threads, "worker threads for the audit loop")
        ->check(CLI::PositiveNumber);
    audit.match.attach(*c_audit);

    TransformCmd transform;
    CLI::App* c_transform =
        app.add_subcommand("transform", "apply Safe Harbor generalization to a dataset");
    c_transform->fallthrough();
    c_transform->add_option("--hospital", transform.hospital, "hospital dataset CSV");
    c_transform->add_option("--population", transform.population, "ZIP3 population CSV");
    c_transform->add_option("--out", transform.out_file, "output CSV path");

    StatsCmd stats;
    CLI::App* c_stats = app.add_subcommand("stats", "k-anonymity statistics");
    c_stats->fallthrough();
    c_stats->add_option("--hospital", stats.hospital, "hospital dataset CSV");
    c_stats->add_option("--qi", stats.qi, "quasi-identifier fields, ';'-separated");
    c_stats->add_option("--format", stats.format, "stdout format: table or machine");

    SynthCmd synth;
    CLI::App* c_synth = app.add_subcommand("synth", "generate a synthetic corpus");
    c_synth->fallthrough();
    c_synth->add_option("--out", synth.out_dir, "output directory");
    c_synth->add_option("--seed", synth.seed, "generator seed");
    c_synth->add_option("--records", synth.records, "hospital record count");
    c_synth->add_option("--externals", synth.externals, "external record count");
    c_synth->add_option("--planted-unique", synth.planted_unique, "planted unique cases");
    c_synth->add_option("--planted-ambiguous", synth.planted_ambiguous,
                        "planted ambiguous groups");
    c_synth->add_option("--planted-nomatch", synth.planted_nomatch, "planted no-match cases");
    c_synth->add_option("--planted-sensitive", synth.planted_sensitive,
                        "planted unique targets carrying a sensitive code");
    c_synth->add_option("--sensitive-rate", synth.sensitive_rate,
                        "background sensitive-diagnosis rate");
    c_synth->add_option("--year", synth.year, "discharge year");
    c_synth->add_option("--zip-pool", synth.zip_pool, "background ZIP pool size");
    c_synth->add_option("--hospital-pool", synth.hospital_pool, "background hospital pool size");

    MatchCmd match;
    CLI::App* c_match = app.add_subcommand("match", "debug one external case");
    c_match->fallthrough();
    c_match->add_option("--hospital", match.hospital, "hospital dataset CSV");
    c_match->add_option("--externals", match.externals, "external records CSV");
    c_match->add_option("--public-records", match.public_records, "public records CSV");
    c_match->add_option("--ext-id", match.ext_id, "external id to debug");
    c_match->add_option("--record", match.record_id, "limit to verdicts against one record id");
    match.match.attach(*c_match);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help text or the parse diagnostic
        return code == 0 ? 0 : 2;
    }

    ConfigFile config;
    if (config_path.empty())
        if (const char* env = std::getenv("REIDENT_CONFIG")) config_path = env;
    if (!config_path.empty()) config.load(config_path);

    if (c_ingest->parsed()) {
        config.merge(*c_ingest, "hospital", ingest.hospital);
        config.merge(*c_ingest, "externals", ingest.externals);
        config.merge(*c_ingest, "public-records", ingest.public_records);
        config.merge(*c_ingest, "dictionary", ingest.dictionary);
        config.merge(*c_ingest, "groups", ingest.groups);
        config.merge(*c_ingest, "incidents", ingest.incidents);
        config.merge(*c_ingest, "population", ingest.population);
        config.merge(*c_ingest, "sensitive", ingest.sensitive);
        return ingest.run();
    }
    if (c_audit->parsed()) {
        config.merge(*c_audit, "hospital", audit.hospital);
        config.merge(*c_audit, "externals", audit.externals);
        config.merge(*c_audit, "public-records", audit.public_records);
        config.merge(*c_audit, "sensitive", audit.sensitive);
        config.merge(*c_audit, "out", audit.out_dir);
        config.merge(*c_audit, "format", audit.format);
        config.merge(*c_audit, "threads", audit.threads);
        audit.match.merge(config, *c_audit);
        return audit.run();
    }
    if (c_transform->parsed()) {
        config.merge(*c_transform, "hospital", transform.hospital);
        config.merge(*c_transform, "population", transform.population);
        config.merge(*c_transform, "out", transform.out_file);
        return transform.run();
    }
    if (c_stats->parsed()) {
        config.merge(*c_stats, "hospital", stats.hospital);
        config.merge(*c_stats, "qi", stats.qi);
        config.merge(*c_stats, "format", stats.format);
        return stats.run();
    }
    if (c_synth->parsed()) {
        config.merge(*c_synth, "out", synth.out_dir);
        config.merge(*c_synth, "seed", synth.seed);
        config.merge(*c_synth, "records", synth.records);
        config.merge(*c_synth, "externals", synth.externals);
        config.merge(*c_synth, "planted-unique", synth.planted_unique);
        config.merge(*c_synth, "planted-ambiguous", synth.planted_ambiguous);
        config.merge(*c_synth, "planted-nomatch", synth.planted_nomatch);
        config.merge(*c_synth, "planted-sensitive", synth.planted_sensitive);
        config.merge(*c_synth, "sensitive-rate", synth.sensitive_rate);
        config.merge(*c_synth, "year", synth.year);
        config.merge(*c_synth, "zip-pool", synth.zip_pool);
        config.merge(*c_synth, "hospital-pool", synth.hospital_pool);
        return synth.run();
    }
    if (c_match->parsed()) {
        config.merge(*c_match, "hospital", match.hospital);
        config.merge(*c_match, "externals", match.externals);
        config.merge(*c_match, "public-records", match.public_records);
        match.match.merge(config, *c_match);
        return match.run();
    }
    throw UsageError("no subcommand given");
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
