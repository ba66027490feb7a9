#include "reident/parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "reident/csv.hpp"
#include "reident/temporal.hpp"

namespace reident {
namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::optional<long long> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

/// Resolved header: canonical field name -> column position.
struct Layout {
    std::map<std::string, std::size_t> index;
    std::size_t width = 0;

    std::string cell(const std::vector<std::string>& row, const std::string& field) const {
        auto it = index.find(field);
        if (it == index.end()) return {};
        return trim(row[it->second]);
    }
    bool has(const std::string& field) const { return index.count(field) != 0; }
};

Layout resolve_layout(const std::vector<std::string>& header, const ColumnMap& columns,
                      std::span<const char* const> canonical,
                      std::span<const char* const> required) {
    std::set<std::string> known(canonical.begin(), canonical.end());
    for (const auto& [from, to] : columns) {
        if (!known.count(to))
            throw ParseFatal("column map: '" + from + "' targets unknown field '" + to + "'");
    }
    Layout layout;
    layout.width = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string name = trim(header[i]);
        auto mapped = columns.find(name);
        std::string field = mapped != columns.end() ? mapped->second : name;
        if (!known.count(field)) continue;  // unrecognized columns pass through unused
        if (layout.index.count(field))
            throw ParseFatal("column '" + name + "': field '" + field + "' already mapped");
        layout.index[field] = i;
    }
    for (const char* field : required) {
        if (!layout.has(field)) throw ParseFatal(std::string("missing required column '") + field + "'");
    }
    return layout;
}

CsvTable read_table(std::istream& in, const char* what) {
    CsvTable table = read_csv(in);
    if (table.header.empty()) throw ParseFatal(std::string(what) + ": empty input");
    return table;
}

/// Collects the problems of one data row; a row with any problem is dropped.
struct RowCheck {
    std::vector<std::string> problems;

    void fail(std::string reason) { problems.push_back(std::move(reason)); }
    bool ok() const { return problems.empty(); }
    std::string joined() const {
        std::string out;
        for (const auto& p : problems) {
            if (!out.empty()) out += "; ";
            out += p;
        }
        return out;
    }
};

std::optional<int> check_int(RowCheck& check, const std::string& cell, const char* field,
                             long long lo, long long hi) {
    auto value = parse_int(cell);
    if (!value || *value < lo || *value > hi) {
        check.fail(std::string(field) + ": expected integer in [" + std::to_string(lo) + ", " +
                   std::to_string(hi) + "], got '" + cell + "'");
        return std::nullopt;
    }
    return static_cast<int>(*value);
}

std::optional<Date> check_date(RowCheck& check, const std::string& cell, const char* field) {
    auto date = parse_date(cell);
    if (!date) check.fail(std::string(field) + ": expected YYYY-MM-DD, got '" + cell + "'");
    return date;
}

constexpr const char* kHospitalColumns[] = {
    "record_id", "hospital",  "admit_type", "length_of_stay", "discharge_year",
    "discharge_month", "age_years", "age_months", "gender", "zip",
    "diagnoses", "procedures", "payers", "charges"};
constexpr const char* kHospitalRequired[] = {
    "record_id", "hospital", "length_of_stay", "discharge_year", "discharge_month",
    "age_years", "age_months", "gender", "zip", "diagnoses"};

constexpr const char* kExternalColumns[] = {
    "ext_id", "name", "gender", "age_years", "incident_date",
    "zip_candidates", "hospital_candidates", "diagnosis_prefixes", "dob", "source"};
constexpr const char* kExternalRequired[] = {"ext_id"};

constexpr const char* kPublicColumns[] = {"name", "dob", "zip_history", "age_hint"};
constexpr const char* kPublicRequired[] = {"name", "dob"};

}  // namespace

HospitalParseResult parse_hospital_dataset(std::istream& in, const ColumnMap& columns) {
    CsvTable table = read_table(in, "hospital dataset");
    Layout layout = resolve_layout(table.header, columns, kHospitalColumns, kHospitalRequired);

    HospitalParseResult result;
    std::set<std::string> seen_ids;
    std::size_t record_no = 1;
    for (const auto& row : table.rows) {
        ++record_no;
        ++result.report.rows_seen;
        if (row.size() != layout.width) {
            result.report.errors.push_back(
                {record_no, "expected " + std::to_string(layout.width) + " columns, got " +
                                std::to_string(row.size())});
            continue;
        }
        RowCheck check;
        HospitalRecord rec;

        rec.record_id = layout.cell(row, "record_id");
        if (rec.record_id.empty()) check.fail("record_id: must not be empty");

        std::string hospital = layout.cell(row, "hospital");
        if (!valid_hospital_code(hospital))
            check.fail("hospital: expected digits with optional unit letter, got '" + hospital + "'");
        else
            rec.hospital = canonical_hospital_code(hospital);

        rec.admit_type = layout.cell(row, "admit_type");

        if (auto v = check_int(check, layout.cell(row, "length_of_stay"), "length_of_stay", 0, 100000))
            rec.length_of_stay = *v;
        if (auto v = check_int(check, layout.cell(row, "discharge_year"), "discharge_year", 1, 9999))
            rec.discharge_year = *v;
        // Month 0 marks a record generalized down to discharge year only.
        if (auto v = check_int(check, layout.cell(row, "discharge_month"), "discharge_month", 0, 12))
            rec.discharge_month = *v;
        auto years = check_int(check, layout.cell(row, "age_years"), "age_years", 0, 200);
        auto months = check_int(check, layout.cell(row, "age_months"), "age_months", 0, 2412);
        if (years && months) {
            if (*months / 12 != *years)
                check.fail("age_months " + std::to_string(*months) + " inconsistent with age_years " +
                           std::to_string(*years));
            rec.age_years = *years;
            rec.age_months = *months;
        }

        std::string gender = layout.cell(row, "gender");
        auto g = parse_gender(gender);
        if (!g)
            check.fail("gender: expected M, F or U, got '" + gender + "'");
        else
            rec.gender = *g;

        std::string zip = layout.cell(row, "zip");
        if (!valid_zip5(zip))
            check.fail("zip: expected five digits, got '" + zip + "'");
        else
            rec.zip = zip;

        for (const std::string& token : split_multi(layout.cell(row, "diagnoses"))) {
            if (auto code = Icd9Code::make(token))
                rec.diagnoses.push_back(*code);
            else
                check.fail("diagnoses: invalid code '" + token + "'");
        }
        if (rec.diagnoses.empty() && check.ok()) check.fail("diagnoses: at least one code required");

        rec.procedures = split_multi(layout.cell(row, "procedures"));
        rec.payers = split_multi(layout.cell(row, "payers"));

        std::string charges = layout.cell(row, "charges");
        if (!charges.empty()) {
            try {
                rec.charges_cents = parse_cents(charges);
            } catch (const std::invalid_argument&) {
                check.fail("charges: expected a non-negative amount, got '" + charges + "'");
            }
        }

        if (!check.ok()) {
            result.report.errors.push_back({record_no, check.joined()});
            continue;
        }
        if (!seen_ids.insert(rec.record_id).second)
            throw ParseFatal("duplicate record_id '" + rec.record_id + "' at record " +
                             std::to_string(record_no));
        result.records.push_back(std::move(rec));
        ++result.report.rows_kept;
    }
    return result;
}

ExternalParseResult parse_external_dataset(std::istream& in, const ColumnMap& columns) {
    CsvTable table = read_table(in, "external dataset");
    Layout layout = resolve_layout(table.header, columns, kExternalColumns, kExternalRequired);

    ExternalParseResult result;
    std::set<std::string> seen_ids;
    std::size_t record_no = 1;
    for (const auto& row : table.rows) {
        ++record_no;
        ++result.report.rows_seen;
        if (row.size() != layout.width) {
            result.report.errors.push_back(
                {record_no, "expected " + std::to_string(layout.width) + " columns, got " +
                                std::to_string(row.size())});
            continue;
        }
        RowCheck check;
        ExternalRecord rec;

        rec.ext_id = layout.cell(row, "ext_id");
        if (rec.ext_id.empty()) check.fail("ext_id: must not be empty");

        if (std::string name = layout.cell(row, "name"); !name.empty()) rec.name = name;

        std::string gender = layout.cell(row, "gender");
        if (!gender.empty()) {
            auto g = parse_gender(gender);
            if (!g)
                check.fail("gender: expected M, F or U, got '" + gender + "'");
            else if (*g != Gender::Unknown)
                rec.gender = *g;
        }

        if (std::string age = layout.cell(row, "age_years"); !age.empty())
            if (auto v = check_int(check, age, "age_years", 0, 200)) rec.age_years = *v;

        if (std::string cell = layout.cell(row, "incident_date"); !cell.empty())
            if (auto d = check_date(check, cell, "incident_date")) rec.incident_date = *d;

        for (const std::string& token : split_multi(layout.cell(row, "zip_candidates"))) {
            if (!valid_zip5(token))
                check.fail("zip_candidates: expected five digits, got '" + token + "'");
            else
                rec.zip_candidates.push_back(token);
        }
        for (const std::string& token : split_multi(layout.cell(row, "hospital_candidates"))) {
            if (!valid_hospital_code(token))
                check.fail("hospital_candidates: invalid code '" + token + "'");
            else
                rec.hospital_candidates.push_back(canonical_hospital_code(token));
        }
        for (std::string token : split_multi(layout.cell(row, "diagnosis_prefixes"))) {
            std::transform(token.begin(), token.end(), token.begin(),
                           [](unsigned char c) { return std::toupper(c); });
            if (!valid_icd9_prefix3(token))
                check.fail("diagnosis_prefixes: expected a three-character family, got '" + token + "'");
            else
                rec.diagnosis_prefixes.push_back(token);
        }

        if (std::string cell = layout.cell(row, "dob"); !cell.empty())
            if (auto d = check_date(check, cell, "dob")) rec.dob = *d;

        rec.source = layout.cell(row, "source");

        if (!rec.name && rec.zip_candidates.empty() && check.ok())
            check.fail("record carries neither a name nor zip candidates");

        if (!check.ok()) {
            result.report.errors.push_back({record_no, check.joined()});
            continue;
        }
        auto dedupe = [](std::vector<std::string>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        dedupe(rec.zip_candidates);
        dedupe(rec.hospital_candidates);
        dedupe(rec.diagnosis_prefixes);
        if (!seen_ids.insert(rec.ext_id).second)
            throw ParseFatal("duplicate ext_id '" + rec.ext_id + "' at record " +
                             std::to_string(record_no));
        result.records.push_back(std::move(rec));
        ++result.report.rows_kept;
    }
    return result;
}

PublicRecordsParseResult parse_public_records(std::istream& in, const ColumnMap& columns) {
    CsvTable table = read_table(in, "public records");
    Layout layout = resolve_layout(table.header, columns, kPublicColumns, kPublicRequired);

    PublicRecordsParseResult result;
    std::size_t record_no = 1;
    for (const auto& row : table.rows) {
        ++record_no;
        ++result.report.rows_seen;
        if (row.size() != layout.width) {
            result.report.errors.push_back(
                {record_no, "expected " + std::to_string(layout.width) + " columns, got " +
                                std::to_string(row.size())});
            continue;
        }
        RowCheck check;
        PublicRecordRow rec;

        rec.name = layout.cell(row, "name");
        if (rec.name.empty()) check.fail("name: must not be empty");

        if (auto d = check_date(check, layout.cell(row, "dob"), "dob")) rec.dob = *d;

        for (const std::string& token : split_multi(layout.cell(row, "zip_history"))) {
            if (!valid_zip5(token))
                check.fail("zip_history: expected five digits, got '" + token + "'");
            else
                rec.zip_history.push_back(token);
        }
        std::sort(rec.zip_history.begin(), rec.zip_history.end());
        rec.zip_history.erase(std::unique(rec.zip_history.begin(), rec.zip_history.end()),
                              rec.zip_history.end());

        if (std::string age = layout.cell(row, "age_hint"); !age.empty())
            if (auto v = check_int(check, age, "age_hint", 0, 200)) rec.age_hint = *v;

        if (!check.ok()) {
            result.report.errors.push_back({record_no, check.joined()});
            continue;
        }
        result.table.rows.push_back(std::move(rec));
        ++result.report.rows_kept;
    }
    return result;
}

CodeDictionary parse_code_dictionary(std::istream& in) {
    CsvTable table = read_table(in, "code dictionary");
    constexpr const char* cols[] = {"code", "description"};
    Layout layout = resolve_layout(table.header, {}, cols, cols);

    CodeDictionary dict;
    std::size_t record_no = 1;
    for (const auto& row : table.rows) {
        ++record_no;
        if (row.size() != layout.width)
            throw ParseFatal("code dictionary record " + std::to_string(record_no) +
                             ": wrong column count");
        std::string code = layout.cell(row, "code");
        std::string description = layout.cell(row, "description");
        if (code.empty() || description.empty())
            throw ParseFatal("code dictionary record " + std::to_string(record_no) +
                             ": code and description must not be empty");
        try {
            dict.insert(code, description);
        } catch (const std::invalid_argument&) {
            throw ParseFatal("code dictionary record " + std::to_string(record_no) +
                             ": duplicate code '" + code + "'");
        }
    }
    return dict;
}

HospitalGroups parse_group_aliases(std::istream& in) {
    CsvTable table = read_table(in, "group aliases");
    constexpr const char* cols[] = {"alias", "codes"};
    Layout layout = resolve_layout(table.header, {}, cols, cols);

    HospitalGroups groups;
    std::size_t record_no = 1;
    for (const auto& row : table.rows) {
        ++record_no;
        if (row.size() != layout.width)
            throw ParseFatal("group aliases record " + std::to_string(record_no) +
                             ": wrong column count");
        std::string alias = normalize_text(layout.cell(row, "alias"));
        if (alias.empty())
            throw ParseFatal("group aliases record " + std::to_string(record_no) + ": empty alias");
        std::set<std::string> codes;
        for (const std::string& token : split_multi(layout.cell(row, "codes"))) {
            if (!valid_hospital_code(token))
                throw ParseFatal("group aliases record " + std::to_string(record_no) +
                                 ": invalid hospital code '" + token + "'");
            codes.insert(canonical_hospital_code(token));
        }
        if (codes.empty())
            throw ParseFatal("group aliases record " + std::to_string(record_no) +
                             ": alias '" + alias + "' lists no codes");
        if (!groups.emplace(alias, std::move(codes)).second)
            throw ParseFatal("group aliases record " + std::to_string(record_no) +
                             ": duplicate alias '" + alias + "'");
    }
    return groups;
}

IncidentMap parse_incident_map(std::istream& in) {
    CsvTable table = read_table(in, "incident map");
    constexpr const char* cols[] = {"incident_type", "prefixes"};
    Layout layout = resolve_layout(table.header, {}, cols, cols);

    IncidentMap map;
    std::size_t record_no = 1;
    for (const auto& row : table.rows) {
        ++record_no;
        if (row.size() != layout.width)
            throw ParseFatal("incident map record " + std::to_string(record_no) +
                             ": wrong column count");
        std::string type = normalize_text(layout.cell(row, "incident_type"));
        if (type.empty())
            throw ParseFatal("incident map record " + std::to_string(record_no) +
                             ": empty incident type");
        std::set<std::string> prefixes;
        for (std::string token : split_multi(layout.cell(row, "prefixes"))) {
            std::transform(token.begin(), token.end(), token.begin(),
                           [](unsigned char c) { return std::toupper(c); });
            if (!valid_icd9_prefix3(token))
                throw ParseFatal("incident map record " + std::to_string(record_no) +
                                 ": invalid prefix '" + token + "'");
            prefixes.insert(token);
        }
        if (prefixes.empty())
            throw ParseFatal("incident map record " + std::to_string(record_no) +
                             ": incident type '" + type + "' lists no prefixes");
        if (!map.emplace(type, std::move(prefixes)).second)
            throw ParseFatal("incident map record " + std::to_string(record_no) +
                             ": duplicate incident type '" + type + "'");
    }
    return map;
}

ZipPopulationTable parse_population_table(std::istream& in) {
    CsvTable table = read_table(in, "population table");
    constexpr const char* cols[] = {"zip3", "population"};
    Layout layout = resolve_layout(table.header, {}, cols, cols);

    ZipPopulationTable pop;
    std::size_t record_no = 1;
    for (const auto& row : table.rows) {
        ++record_no;
        if (row.size() != layout.width)
            throw ParseFatal("population table record " + std::to_string(record_no) +
                             ": wrong column count");
        std::string zip3 = layout.cell(row, "zip3");
        bool valid = zip3.size() == 3 && std::all_of(zip3.begin(), zip3.end(), [](unsigned char c) {
                         return std::isdigit(c);
                     });
        if (!valid)
            throw ParseFatal("population table record " + std::to_string(record_no) +
                             ": expected three-digit prefix, got '" + zip3 + "'");
        auto count = parse_int(layout.cell(row, "population"));
        if (!count || *count < 0)
            throw ParseFatal("population table record " + std::to_string(record_no) +
                             ": invalid population '" + layout.cell(row, "population") + "'");
        if (pop.entries().count(zip3))
            throw ParseFatal("population table record " + std::to_string(record_no) +
                             ": duplicate prefix '" + zip3 + "'");
        pop.set(zip3, *count);
    }
    return pop;
}

std::vector<std::string> parse_sensitive_prefixes(std::istream& in) {
    std::vector<std::string> prefixes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string token = trim(line);
        if (token.empty() || token.front() == '#') continue;
        std::transform(token.begin(), token.end(), token.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        if (!valid_icd9(token))
            throw ParseFatal("sensitive prefixes line " + std::to_string(line_no) +
                             ": invalid prefix '" + token + "'");
        prefixes.push_back(token);
    }
    std::sort(prefixes.begin(), prefixes.end());
    prefixes.erase(std::unique(prefixes.begin(), prefixes.end()), prefixes.end());
    return prefixes;
}

std::string format_cents(std::int64_t cents) {
    std::string out = std::to_string(cents / 100);
    int rem = static_cast<int>(cents % 100);
    out += '.';
    out += static_cast<char>('0' + rem / 10);
    out += static_cast<char>('0' + rem % 10);
    return out;
}

std::int64_t parse_cents(std::string_view text) {
    auto bad = [&] { throw std::invalid_argument("invalid amount: " + std::string(text)); };
    std::size_t dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() || whole.size() > 15) bad();
    if (dot != std::string_view::npos && (frac.empty() || frac.size() > 2)) bad();
    auto digits = [](std::string_view s) {
        return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
    };
    if (!digits(whole) || !digits(frac)) bad();
    std::int64_t cents = 0;
    std::from_chars(whole.data(), whole.data() + whole.size(), cents);
    cents *= 100;
    if (frac.size() >= 1) cents += (frac[0] - '0') * 10;
    if (frac.size() == 2) cents += frac[1] - '0';
    return cents;
}

namespace {

std::string join_codes(const std::vector<Icd9Code>& codes) {
    std::vector<std::string> texts;
    texts.reserve(codes.size());
    for (const auto& c : codes) texts.push_back(c.text);
    return join_multi(texts);
}

}  // namespace

void write_hospital_dataset(std::ostream& out, std::span<const HospitalRecord> records) {
    write_csv_row(out, std::vector<std::string>(std::begin(kHospitalColumns),
                                                std::end(kHospitalColumns)));
    for (const auto& rec : records) {
        write_csv_row(out, {rec.record_id, rec.hospital, rec.admit_type,
                            std::to_string(rec.length_of_stay), std::to_string(rec.discharge_year),
                            std::to_string(rec.discharge_month), std::to_string(rec.age_years),
                            std::to_string(rec.age_months), std::string(1, gender_char(rec.gender)),
                            rec.zip, join_codes(rec.diagnoses), join_multi(rec.procedures),
                            join_multi(rec.payers),
                            rec.charges_cents ? format_cents(*rec.charges_cents) : ""});
    }
}

void write_external_dataset(std::ostream& out, std::span<const ExternalRecord> records) {
    write_csv_row(out, std::vector<std::string>(std::begin(kExternalColumns),
                                                std::end(kExternalColumns)));
    for (const auto& rec : records) {
        write_csv_row(out, {rec.ext_id, rec.name.value_or(""),
                            rec.gender ? std::string(1, gender_char(*rec.gender)) : "",
                            rec.age_years ? std::to_string(*rec.age_years) : "",
                            rec.incident_date ? format_date(*rec.incident_date) : "",
                            join_multi(rec.zip_candidates), join_multi(rec.hospital_candidates),
                            join_multi(rec.diagnosis_prefixes),
                            rec.dob ? format_date(*rec.dob) : "", rec.source});
    }
}

void write_public_records(std::ostream& out, const PublicRecordsTable& table) {
    write_csv_row(out,
                  std::vector<std::string>(std::begin(kPublicColumns), std::end(kPublicColumns)));
    for (const auto& rec : table.rows) {
        write_csv_row(out, {rec.name, format_date(rec.dob), join_multi(rec.zip_history),
                            rec.age_hint ? std::to_string(*rec.age_hint) : ""});
    }
}

void write_population_table(std::ostream& out, const ZipPopulationTable& pop) {
    write_csv_row(out, {"zip3", "population"});
    for (const auto& [zip3, count] : pop.entries())
        write_csv_row(out, {zip3, std::to_string(count)});
}

}  // namespace reident
