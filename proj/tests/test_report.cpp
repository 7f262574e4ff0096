#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "parisian/report.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace parisian;

namespace {

std::vector<Record> sample_records() {
    std::vector<Record> r(2);
    r[0].set("name", std::string("plain")).set("value", 0.1).set("n", std::uint64_t{100}).set("ok", true).set("gap", std::monostate{});
    r[1].set("name", std::string("a,\"b\"\nc")).set("value", -1.0 / 3.0).set("n", std::uint64_t{7}).set("ok", false).set("gap", std::numeric_limits<double>::quiet_NaN());
    return r;
}

}  // namespace

TEST_CASE("record set replaces in place") {
    Record r;
    r.set("a", 1.0).set("b", 2.0).set("a", 3.0);
    REQUIRE(r.fields.size() == 2);
    CHECK(std::get<double>(*r.find("a")) == 3.0);
    CHECK(r.columns() == std::vector<std::string>{"a", "b"});
    CHECK(r.find("c") == nullptr);
}

TEST_CASE("CSV quoting") {
    CHECK(csv_quote("abc") == "abc");
    CHECK(csv_quote("a,b") == "\"a,b\"");
    CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_quote("line\nbreak") == "\"line\nbreak\"");
    CHECK(csv_quote("cr\r") == "\"cr\r\"");
}

TEST_CASE("reals round trip through 17 digits") {
    const double values[] = {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5e-7, 4.9406564584124654e-324};
    for (double x : values) {
        CHECK(std::strtod(format_real(x).c_str(), nullptr) == x);
    }
    CHECK(format_real(std::numeric_limits<double>::infinity()).empty());
    CHECK(format_real(std::nan("")).empty());
    CHECK(format_field(std::int64_t{-4}) == "-4");
    CHECK(format_field(true) == "true");
}

TEST_CASE("empty outputs") {
    const std::vector<std::string> cols = {"x", "y"};
    CHECK(emit_csv(cols, {}) == "x,y\n");
    CHECK(emit_json(cols, {}) == "[]\n");
}

TEST_CASE("CSV and JSON carry the same values") {
    const std::vector<Record> records = sample_records();
    const std::vector<std::string> cols = records.front().columns();
    const std::string csv = emit_csv(cols, records);
    CHECK(csv.rfind("name,value,n,ok,gap\nplain,0.10000000000000001,100,true,\n", 0) == 0);
    CHECK(csv.find("\"a,\"\"b\"\"\nc\"") != std::string::npos);
    const nlohmann::json j = nlohmann::json::parse(emit_json(cols, records));
    REQUIRE(j.size() == 2);
    CHECK(j[0]["value"].get<double>() == 0.1);
    CHECK(j[1]["value"].get<double>() == -1.0 / 3.0);
    CHECK(j[1]["name"].get<std::string>() == "a,\"b\"\nc");
    CHECK(j[0]["gap"].is_null());
    CHECK(j[1]["gap"].is_null());
    CHECK(j[0]["n"].get<std::uint64_t>() == 100);
    CHECK(j[1]["ok"].get<bool>() == false);
}

TEST_CASE("schema mismatches are rejected") {
    std::vector<Record> records = sample_records();
    const std::vector<std::string> cols = records.front().columns();
    records[1].set("extra", 1.0);
    CHECK_THROWS_AS(emit_csv(cols, records), std::invalid_argument);
    CHECK_THROWS_AS(emit_json(cols, records), std::invalid_argument);
    const std::vector<std::string> reordered = {"value", "name", "n", "ok", "gap"};
    CHECK_THROWS_AS(emit_csv(reordered, sample_records()), std::invalid_argument);
}

TEST_CASE("write_output") {
    const std::string path = "report_test_output.csv";
    write_output(path, "a,b\n1,2\n");
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == "a,b\n1,2\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(write_output("/nonexistent-dir/x.csv", "a\n"), std::runtime_error);
}
