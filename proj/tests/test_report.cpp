#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "homefit/csv.hpp"
#include "homefit/matrix.hpp"
#include "homefit/report.hpp"
#include "homefit/rng.hpp"

using namespace homefit;
using nlohmann::json;

namespace {

ComparisonReport sample_report(bool compare_mode) {
    ComparisonReport rep;
    rep.settings.data_path = "data/example.csv";
    rep.settings.solver = "all";
    rep.settings.test_size = 0.25;
    rep.settings.seed = 42;
    rep.settings.reg_factor = 1e-10;
    rep.settings.repeat = 3;
    rep.dataset = {120, 8, 5, 2006, 2020};
    rep.condition_number = std::numeric_limits<double>::infinity();

    EvalReport ok;
    ok.solver = "qr";
    ok.train_r2 = 0.75;
    ok.test_r2 = 0.7;
    ok.mse = 0.2;
    ok.runtime_ms = 1.5;
    ok.coefficients = {RealVector{0.5, -2.0}, {"intercept", "year"}};
    ok.residuals_test = RealVector{0.1, -0.2, 0.05};
    rep.outcomes.push_back({"qr", ok, ""});
    rep.outcomes.push_back({"lu", std::nullopt, "zero pivot at column 3"});

    if (compare_mode) {
        rep.k_requested = 10;
        rep.k_effective = 2;
        rep.bins = 30;
    }
    return rep;
}

std::string render(const std::string& command, const ComparisonReport& rep) {
    std::ostringstream out;
    write_report_json(out, command, rep);
    return out.str();
}

}  // namespace

TEST_CASE("format_real renders doubles round-trippably") {
    CHECK(format_real(0.25) == "0.25");
    CHECK(format_real(1e-10) == "1e-10");
    CHECK(format_real(350000.0) == "350000");
    CHECK(format_real(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_real(std::nan("")) == "nan");

    Rng rng(211);
    for (int trial = 0; trial < 200; ++trial) {
        double v = rng.next_in(-1e6, 1e6);
        double back = std::strtod(format_real(v).c_str(), nullptr);
        CHECK(back == v);  // 17 significant digits are lossless
    }
}

TEST_CASE("json_escape guards the characters json cares about") {
    CHECK(json_escape("plain") == "plain");
    CHECK(json_escape("a\"b") == "a\\\"b");
    CHECK(json_escape("back\\slash") == "back\\\\slash");
    CHECK(json_escape("line\nbreak") == "line\\nbreak");
    CHECK(json_escape("tab\there") == "tab\\there");
    CHECK(json_escape(std::string(1, '\x02')) == "\\u0002");
}

TEST_CASE("json writer produces exact stable text") {
    std::ostringstream out;
    JsonWriter w(out);
    w.begin_object();
    w.key("name");
    w.value("x");
    w.key("items");
    w.begin_array();
    w.value(1.5);
    w.value(std::numeric_limits<double>::infinity());
    w.end_array();
    w.key("count");
    w.value(std::size_t{2});
    w.key("flag");
    w.value(true);
    w.end_object();
    CHECK(out.str() ==
          "{\n"
          "  \"name\": \"x\",\n"
          "  \"items\": [\n"
          "    1.5,\n"
          "    \"inf\"\n"
          "  ],\n"
          "  \"count\": 2,\n"
          "  \"flag\": true\n"
          "}\n");
}

TEST_CASE("report json parses back with every expected field") {
    auto text = render("run", sample_report(false));
    auto doc = json::parse(text);

    CHECK(doc.at("schema_version").get<int>() == 1);
    CHECK(doc.at("command").get<std::string>() == "run");

    const auto& cfg = doc.at("config");
    CHECK(cfg.at("data").get<std::string>() == "data/example.csv");
    CHECK(cfg.at("solver").get<std::string>() == "all");
    CHECK(cfg.at("test_size").get<double>() == 0.25);
    CHECK(cfg.at("seed").get<long>() == 42);
    CHECK(cfg.at("reg_factor").get<double>() == 1e-10);
    CHECK(cfg.at("repeat").get<long>() == 3);
    CHECK(!cfg.contains("k_requested"));

    const auto& ds = doc.at("dataset");
    CHECK(ds.at("rows").get<long>() == 120);
    CHECK(ds.at("feature_columns").get<long>() == 8);
    CHECK(ds.at("towns").get<long>() == 5);
    CHECK(ds.at("year_min").get<int>() == 2006);
    CHECK(ds.at("year_max").get<int>() == 2020);

    // non-finite numbers travel as strings
    CHECK(doc.at("condition_number").get<std::string>() == "inf");

    const auto& solvers = doc.at("solvers");
    REQUIRE(solvers.size() == 2);
    const auto& good = solvers[0];
    CHECK(good.at("solver").get<std::string>() == "qr");
    CHECK(good.at("ok").get<bool>());
    CHECK(good.at("train_r2").get<double>() == 0.75);
    CHECK(good.at("runtime_ms").get<double>() == 1.5);
    REQUIRE(good.at("coefficients").size() == 2);
    CHECK(good.at("coefficients")[0].at("name").get<std::string>() == "intercept");
    CHECK(good.at("coefficients")[0].at("value").get<double>() == 0.5);
    CHECK(good.at("coefficients")[1].at("name").get<std::string>() == "year");
    REQUIRE(good.at("residuals_test").size() == 3);
    CHECK(good.at("residuals_test")[1].get<double>() == -0.2);
    CHECK(!good.contains("error"));

    const auto& bad = solvers[1];
    CHECK(bad.at("solver").get<std::string>() == "lu");
    CHECK_FALSE(bad.at("ok").get<bool>());
    CHECK(bad.at("error").get<std::string>() == "zero pivot at column 3");
    CHECK(!bad.contains("train_r2"));
}

TEST_CASE("compare reports carry the extra config keys") {
    auto doc = json::parse(render("compare", sample_report(true)));
    CHECK(doc.at("command").get<std::string>() == "compare");
    CHECK(doc.at("config").at("k_requested").get<long>() == 10);
    CHECK(doc.at("config").at("k_effective").get<long>() == 2);
    CHECK(doc.at("config").at("bins").get<long>() == 30);
}

TEST_CASE("runtime_ms sits alone on its line") {
    // downstream determinism checks strip runtime lines and compare the rest,
    // so the runtime value must never share a line with anything else
    auto text = render("run", sample_report(false));
    std::istringstream lines(text);
    std::string line;
    bool found = false;
    while (std::getline(lines, line)) {
        if (line.find("runtime_ms") != std::string::npos) {
            found = true;
            CHECK(line.find("train_r2") == std::string::npos);
            CHECK(line.find('{') == std::string::npos);
            CHECK(line.find('}') == std::string::npos);
        }
    }
    CHECK(found);
}

TEST_CASE("identical reports render to identical bytes") {
    auto a = render("run", sample_report(false));
    auto b = render("run", sample_report(false));
    CHECK(a == b);
}
