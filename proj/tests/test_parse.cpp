#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "reident/parse.hpp"
#include "reident/temporal.hpp"

using namespace reident;

namespace {

const char* kHospitalHeader =
    "record_id,hospital,admit_type,length_of_stay,discharge_year,discharge_month,"
    "age_years,age_months,gender,zip,diagnoses,procedures,payers,charges\n";

const char* kExternalHeader =
    "ext_id,name,gender,age_years,incident_date,zip_candidates,hospital_candidates,"
    "diagnosis_prefixes,dob,source\n";

HospitalParseResult hospital(const std::string& body, const ColumnMap& map = {}) {
    std::istringstream in(body);
    return parse_hospital_dataset(in, map);
}

ExternalParseResult externals(const std::string& body, const ColumnMap& map = {}) {
    std::istringstream in(body);
    return parse_external_dataset(in, map);
}

PublicRecordsParseResult public_records(const std::string& body) {
    std::istringstream in(body);
    return parse_public_records(in);
}

}  // namespace

TEST_CASE("a fully populated hospitalization row parses field-for-field") {
    auto result = hospital(std::string(kHospitalHeader) +
                           "r1,162,1,6,2011,10,60,725,M,98851,E8162;80843;51851,8609;7935,CO;MC,"
                           "71708.47\n");
    REQUIRE(result.report.clean());
    REQUIRE(result.records.size() == 1);
    const HospitalRecord& rec = result.records[0];
    CHECK(rec.record_id == "r1");
    CHECK(rec.hospital == "162");
    CHECK(rec.admit_type == "1");
    CHECK(rec.length_of_stay == 6);
    CHECK(rec.discharge_year == 2011);
    CHECK(rec.discharge_month == 10);
    CHECK(rec.age_years == 60);
    CHECK(rec.age_months == 725);
    CHECK(rec.gender == Gender::Male);
    CHECK(rec.zip == "98851");
    REQUIRE(rec.diagnoses.size() == 3);
    CHECK(rec.diagnoses[0].text == "E8162");
    CHECK(rec.diagnoses[1].text == "80843");
    CHECK(rec.diagnoses[2].text == "51851");
    CHECK(rec.procedures == std::vector<std::string>{"8609", "7935"});
    CHECK(rec.payers == std::vector<std::string>{"CO", "MC"});
    CHECK(rec.charges_cents == 7170847);
    CHECK_FALSE(rec.generalized());
}

TEST_CASE("minimal hospital row: optional cells may be blank, month 0 is year-only") {
    auto result = hospital(std::string(kHospitalHeader) + "r1,137,,0,2011,0,60,725,U,98851,562,,,\n");
    REQUIRE(result.report.clean());
    const HospitalRecord& rec = result.records.at(0);
    CHECK(rec.admit_type == "");
    CHECK(rec.discharge_month == 0);
    CHECK(rec.generalized());
    CHECK(rec.gender == Gender::Unknown);
    CHECK_FALSE(rec.charges_cents.has_value());
    CHECK(rec.procedures.empty());
}

TEST_CASE("age in months must fold to age in years") {
    auto result = hospital(std::string(kHospitalHeader) +
                           "r1,162,1,6,2011,10,61,725,M,98851,E8162,,,\n" +
                           "r2,162,1,6,2011,10,60,725,M,98851,E8162,,,\n");
    REQUIRE(result.report.errors.size() == 1);
    CHECK(result.report.errors[0].record == 2);  // header is record 1
    CHECK(result.report.errors[0].reason.find("725") != std::string::npos);
    CHECK(result.report.rows_seen == 2);
    CHECK(result.report.rows_kept == 1);
    CHECK(result.records.at(0).record_id == "r2");
}

TEST_CASE("bad cells are collected per row and parsing continues") {
    auto result = hospital(std::string(kHospitalHeader) +
                           "r1,162,1,6,2011,13,60,725,Q,9885,E8162,,,\n" +
                           "r2,137,1,2,2011,4,30,365,F,99208,56211,,,\n");
    REQUIRE(result.report.errors.size() == 1);
    const std::string& reason = result.report.errors[0].reason;
    CHECK(reason.find("discharge_month") != std::string::npos);
    CHECK(reason.find("gender") != std::string::npos);
    CHECK(reason.find("zip") != std::string::npos);
    CHECK(result.records.size() == 1);
    CHECK(result.records[0].record_id == "r2");
}

TEST_CASE("diagnoses are required and each code is validated") {
    auto none = hospital(std::string(kHospitalHeader) + "r1,162,1,6,2011,10,60,725,M,98851,,,,\n");
    REQUIRE(none.report.errors.size() == 1);
    CHECK(none.report.errors[0].reason.find("diagnoses") != std::string::npos);

    auto bad = hospital(std::string(kHospitalHeader) +
                        "r1,162,1,6,2011,10,60,725,M,98851,E8162;zzz,,,\n");
    REQUIRE(bad.report.errors.size() == 1);
    CHECK(bad.report.errors[0].reason.find("zzz") != std::string::npos);
}

TEST_CASE("hospital and unit-letter codes canonicalize on ingest") {
    auto result = hospital(std::string(kHospitalHeader) +
                           "r1,162A,1,6,2011,10,60,725,M,98851,e8162,,,\n");
    REQUIRE(result.report.clean());
    CHECK(result.records[0].hospital == "162a");
    CHECK(result.records[0].diagnoses[0].text == "E8162");
}

TEST_CASE("wrong column count is a row error, not fatal") {
    auto result = hospital(std::string(kHospitalHeader) + "r1,162,1,6\n" +
                           "r2,137,1,2,2011,4,30,365,F,99208,56211,,,\n");
    REQUIRE(result.report.errors.size() == 1);
    CHECK(result.report.errors[0].reason.find("columns") != std::string::npos);
    CHECK(result.records.size() == 1);
}

TEST_CASE("duplicate record ids abort the parse") {
    CHECK_THROWS_AS(hospital(std::string(kHospitalHeader) +
                             "r1,162,1,6,2011,10,60,725,M,98851,E8162,,,\n" +
                             "r1,137,1,2,2011,4,30,365,F,99208,56211,,,\n"),
                    ParseFatal);
}

TEST_CASE("missing required columns and empty input are fatal") {
    CHECK_THROWS_AS(hospital("record_id,hospital\nr1,162\n"), ParseFatal);
    CHECK_THROWS_AS(hospital(""), ParseFatal);
    // Header-only input is fine.
    auto empty = hospital(std::string(kHospitalHeader));
    CHECK(empty.records.empty());
    CHECK(empty.report.clean());
}

TEST_CASE("column maps rename file headers onto canonical fields") {
    ColumnMap map{{"id", "record_id"}, {"sex", "gender"}, {"dx", "diagnoses"}};
    auto result = hospital(
        "id,hospital,admit_type,length_of_stay,discharge_year,discharge_month,age_years,"
        "age_months,sex,zip,dx,procedures,payers,charges,extra_notes\n"
        "r1,162,1,6,2011,10,60,725,M,98851,E8162,,,,ignored text\n",
        map);
    REQUIRE(result.report.clean());
    CHECK(result.records.at(0).record_id == "r1");
    CHECK(result.records.at(0).gender == Gender::Male);

    // A map target that is not a canonical field is fatal.
    CHECK_THROWS_AS(hospital(std::string(kHospitalHeader), ColumnMap{{"id", "no_such_field"}}),
                    ParseFatal);
    // Two columns landing on the same field is fatal.
    CHECK_THROWS_AS(hospital("record_id,rid,hospital,admit_type,length_of_stay,discharge_year,"
                             "discharge_month,age_years,age_months,gender,zip,diagnoses,"
                             "procedures,payers,charges\n",
                             ColumnMap{{"rid", "record_id"}}),
                    ParseFatal);
}

TEST_CASE("a news-derived external row parses with candidate sets") {
    auto result = externals(std::string(kExternalHeader) +
                            "e1,Raymond Boylston,M,61,2011-10-22,,137,E81;E82,,news story\n");
    REQUIRE(result.report.clean());
    const ExternalRecord& rec = result.records.at(0);
    CHECK(rec.ext_id == "e1");
    CHECK(rec.name == "Raymond Boylston");
    CHECK(rec.gender == Gender::Male);
    CHECK(rec.age_years == 61);
    CHECK(rec.incident_date == make_date(2011, 10, 22));
    CHECK(rec.zip_candidates.empty());
    CHECK(rec.hospital_candidates == std::vector<std::string>{"137"});
    CHECK(rec.diagnosis_prefixes == std::vector<std::string>{"E81", "E82"});
    CHECK_FALSE(rec.dob.has_value());
    CHECK(rec.source == "news story");
}

TEST_CASE("blank external cells become absent fields") {
    auto result = externals(std::string(kExternalHeader) + "e1,Jo Doe,,,,,,,,\n");
    REQUIRE(result.report.clean());
    const ExternalRecord& rec = result.records.at(0);
    CHECK(rec.name == "Jo Doe");
    CHECK_FALSE(rec.gender.has_value());
    CHECK_FALSE(rec.age_years.has_value());
    CHECK_FALSE(rec.incident_date.has_value());
    CHECK(rec.diagnosis_prefixes.empty());
}

TEST_CASE("external gender U degrades to absent, full codes are rejected as prefixes") {
    auto u = externals(std::string(kExternalHeader) + "e1,Jo Doe,U,,,,,,,\n");
    REQUIRE(u.report.clean());
    CHECK_FALSE(u.records.at(0).gender.has_value());

    auto bad = externals(std::string(kExternalHeader) + "e1,Jo Doe,M,,,,,E8162,,\n");
    REQUIRE(bad.report.errors.size() == 1);
    CHECK(bad.report.errors[0].reason.find("E8162") != std::string::npos);
}

TEST_CASE("externals need a name or at least one zip candidate") {
    auto result = externals(std::string(kExternalHeader) + "e1,,M,61,2011-10-22,,,,,\n" +
                            "e2,,M,61,2011-10-22,98851,,,,\n");
    REQUIRE(result.report.errors.size() == 1);
    CHECK(result.report.errors[0].record == 2);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].ext_id == "e2");
}

TEST_CASE("external candidate sets come back sorted, unique and canonical") {
    auto result = externals(std::string(kExternalHeader) +
                            "e1,Jo Doe,,,,99299;98851;98851,201A;137;201a,e96;E81;e81,,\n");
    REQUIRE(result.report.clean());
    const ExternalRecord& rec = result.records.at(0);
    CHECK(rec.zip_candidates == std::vector<std::string>{"98851", "99299"});
    CHECK(rec.hospital_candidates == std::vector<std::string>{"137", "201a"});
    CHECK(rec.diagnosis_prefixes == std::vector<std::string>{"E81", "E96"});
}

TEST_CASE("malformed external dates are row errors") {
    auto result = externals(std::string(kExternalHeader) + "e1,Jo Doe,,,2011-2-3,,,,,\n" +
                            "e2,Jo Doe,,,,,,,2011-02-30,\n" + "e3,Jo Doe,,,2011-10-22,,,,,\n");
    REQUIRE(result.report.errors.size() == 2);
    CHECK(result.report.errors[0].record == 2);
    CHECK(result.report.errors[1].record == 3);
    CHECK(result.records.size() == 1);
}

TEST_CASE("duplicate external ids abort the parse") {
    CHECK_THROWS_AS(externals(std::string(kExternalHeader) + "e1,Jo Doe,,,,,,,,\n" +
                              "e1,Jo Roe,,,,,,,,\n"),
                    ParseFatal);
}

TEST_CASE("public-records rows require name and a valid dob") {
    auto result = public_records(
        "name,dob,zip_history,age_hint\n"
        "Raymond Boylston,1950-05-10,98851;98853,61\n"
        ",1950-05-10,98851,\n"
        "Jo Doe,not-a-date,98851,\n");
    REQUIRE(result.report.errors.size() == 2);
    REQUIRE(result.table.rows.size() == 1);
    const PublicRecordRow& row = result.table.rows[0];
    CHECK(row.name == "Raymond Boylston");
    CHECK(row.dob == make_date(1950, 5, 10));
    CHECK(row.zip_history == std::vector<std::string>{"98851", "98853"});
    CHECK(row.age_hint == 61);
}

TEST_CASE("code dictionary files are strict") {
    std::istringstream good("code,description\n137,Lincoln Hospital\n162,Sacred Heart\n");
    CodeDictionary dict = parse_code_dictionary(good);
    CHECK(dict.size() == 2);
    CHECK(dict.description("137") == "Lincoln Hospital");

    std::istringstream dup("code,description\n137,A\n137,B\n");
    CHECK_THROWS_AS(parse_code_dictionary(dup), ParseFatal);
    std::istringstream blank("code,description\n137,\n");
    CHECK_THROWS_AS(parse_code_dictionary(blank), ParseFatal);
}

TEST_CASE("group alias files normalize aliases and canonicalize codes") {
    std::istringstream good("alias,codes\nTri-Cities  Hospital,310;311;312A\n");
    HospitalGroups groups = parse_group_aliases(good);
    REQUIRE(groups.count("tri-cities hospital") == 1);
    CHECK(groups["tri-cities hospital"] == std::set<std::string>{"310", "311", "312a"});

    std::istringstream bad("alias,codes\nSomewhere,nope\n");
    CHECK_THROWS_AS(parse_group_aliases(bad), ParseFatal);
    std::istringstream dup("alias,codes\nA,1\na,2\n");
    CHECK_THROWS_AS(parse_group_aliases(dup), ParseFatal);
}

TEST_CASE("incident map files uppercase prefixes and reject junk") {
    std::istringstream good("incident_type,prefixes\nmotor_vehicle,e81;E82\nassault,E96\n");
    IncidentMap map = parse_incident_map(good);
    CHECK(map["motor_vehicle"] == std::set<std::string>{"E81", "E82"});
    CHECK(map["assault"] == std::set<std::string>{"E96"});

    std::istringstream bad("incident_type,prefixes\nfall,E8\n");
    CHECK_THROWS_AS(parse_incident_map(bad), ParseFatal);
    std::istringstream dup("incident_type,prefixes\nfall,E88\nfall,E89\n");
    CHECK_THROWS_AS(parse_incident_map(dup), ParseFatal);
}

TEST_CASE("population tables key three-digit prefixes to counts") {
    std::istringstream good("zip3,population\n988,35000\n992,14000\n");
    ZipPopulationTable pop = parse_population_table(good);
    CHECK(pop.population("988") == 35000);
    CHECK(pop.population("992") == 14000);
    CHECK(pop.population("000") == 0);  // unknown prefixes count as zero

    std::istringstream bad("zip3,population\n98,100\n");
    CHECK_THROWS_AS(parse_population_table(bad), ParseFatal);
    std::istringstream dup("zip3,population\n988,1\n988,2\n");
    CHECK_THROWS_AS(parse_population_table(dup), ParseFatal);
    std::istringstream neg("zip3,population\n988,-5\n");
    CHECK_THROWS_AS(parse_population_table(neg), ParseFatal);
}

TEST_CASE("sensitive prefix lists skip comments and dedupe") {
    std::istringstream in("# families flagged for review\n\n042\ne96\n965\n042\n");
    auto prefixes = parse_sensitive_prefixes(in);
    CHECK(prefixes == std::vector<std::string>{"042", "965", "E96"});

    std::istringstream bad("042\nE8\n");
    CHECK_THROWS_AS(parse_sensitive_prefixes(bad), ParseFatal);
}

TEST_CASE("money values are fixed-point with two decimals") {
    CHECK(format_cents(7170847) == "71708.47");
    CHECK(format_cents(5) == "0.05");
    CHECK(format_cents(100) == "1.00");
    CHECK(format_cents(0) == "0.00");
    CHECK(parse_cents("71708.47") == 7170847);
    CHECK(parse_cents("12") == 1200);
    CHECK(parse_cents("12.3") == 1230);
    CHECK(parse_cents("12.34") == 1234);
    CHECK(parse_cents("0.05") == 5);
    for (const char* bad : {"12.345", ".5", "12.", "abc", "-4", "1,2", ""}) {
        CHECK_THROWS_AS(parse_cents(bad), std::invalid_argument);
    }
}

TEST_CASE("serialized datasets re-parse and re-serialize byte-identically") {
    std::string hospital_text =
        std::string(kHospitalHeader) +
        "r1,162,1,6,2011,10,60,725,M,98851,E8162;80843;51851,8609,CO;MC,71708.47\n"
        "r2,137,,0,2011,0,30,365,U,99208,56211,,,\n";
    auto first = hospital(hospital_text);
    REQUIRE(first.report.clean());
    std::ostringstream out1;
    write_hospital_dataset(out1, first.records);
    auto second = hospital(out1.str());
    REQUIRE(second.report.clean());
    std::ostringstream out2;
    write_hospital_dataset(out2, second.records);
    CHECK(out1.str() == out2.str());
    CHECK(out1.str() == hospital_text);

    std::string external_text =
        std::string(kExternalHeader) +
        "e1,Raymond Boylston,M,61,2011-10-22,98851;99299,137,E81;E82,1950-05-10,news\n"
        "e2,Jo Doe,,,,,,,,\n";
    auto ext1 = externals(external_text);
    REQUIRE(ext1.report.clean());
    std::ostringstream eout1;
    write_external_dataset(eout1, ext1.records);
    auto ext2 = externals(eout1.str());
    std::ostringstream eout2;
    write_external_dataset(eout2, ext2.records);
    CHECK(eout1.str() == eout2.str());
    CHECK(eout1.str() == external_text);

    auto pub = public_records(
        "name,dob,zip_history,age_hint\nRaymond Boylston,1950-05-10,98851;98853,61\n");
    std::ostringstream pout1;
    write_public_records(pout1, pub.table);
    auto pub2 = public_records(pout1.str());
    std::ostringstream pout2;
    write_public_records(pout2, pub2.table);
    CHECK(pout1.str() == pout2.str());

    ZipPopulationTable pop;
    pop.set("988", 35000);
    pop.set("992", 14000);
    std::ostringstream wpop;
    write_population_table(wpop, pop);
    std::istringstream rpop(wpop.str());
    ZipPopulationTable pop2 = parse_population_table(rpop);
    std::ostringstream wpop2;
    write_population_table(wpop2, pop2);
    CHECK(wpop.str() == wpop2.str());
}
