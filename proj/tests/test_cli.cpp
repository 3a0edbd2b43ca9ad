#include "cansys/cli.hpp"

#include <catch_amalgamated.hpp>

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using cansys::Complex;
using Json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "cansys");
    std::ostringstream out, err;
    const int code = cansys::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Every number in the document re-emitted at 17 significant digits parses back unchanged.
void check_round_trip(const Json& j) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        CHECK(std::strtod(buf, nullptr) == v);
        CHECK(Json::parse(j.dump()).get<double>() == v);
    } else if (j.is_structured()) {
        for (const auto& item : j) {
            check_round_trip(item);
        }
    }
}

} // namespace

TEST_CASE("complex and angle parsing") {
    using cansys::cli::parse_angle;
    using cansys::cli::parse_complex;
    CHECK(parse_complex("0+1i") == Complex(0, 1));
    CHECK(parse_complex("i") == Complex(0, 1));
    CHECK(parse_complex("-i") == Complex(0, -1));
    CHECK(parse_complex("2.5") == Complex(2.5, 0));
    CHECK(parse_complex("1e-3-2.5i") == Complex(1e-3, -2.5));
    CHECK(parse_complex("-1.5e+2+3e-1i") == Complex(-150, 0.3));
    CHECK(parse_complex("3i") == Complex(0, 3));
    CHECK_THROWS_AS(parse_complex("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_complex("1+2j"), std::invalid_argument);
    CHECK_THROWS_AS(parse_complex(""), std::invalid_argument);

    CHECK(parse_angle("pi") == std::numbers::pi);
    CHECK(parse_angle("pi/2") == std::numbers::pi / 2);
    CHECK(parse_angle("3*pi/4") == 3 * std::numbers::pi / 4);
    CHECK(parse_angle("1.25") == 1.25);
    CHECK_THROWS_AS(parse_angle("pie"), std::invalid_argument);

    CHECK(parse_complex(cansys::cli::format_complex(Complex(0.1, -1.0 / 3.0))) == Complex(0.1, -1.0 / 3.0));
}

TEST_CASE("eigs example") {
    const Result r = run({"eigs", "--builtin", "identity", "--length", "1", "--alpha", "pi", "--beta", "pi",
                          "--window", "-10", "10", "--output", "json"});
    REQUIRE(r.code == 0);
    const Json doc = Json::parse(r.out);
    CHECK(doc["schema_version"] == 1);
    REQUIRE(doc["eigenvalues"].size() == 7);
    for (int k = -3; k <= 3; ++k) {
        CHECK(std::abs(doc["eigenvalues"][k + 3]["E"].get<double>() - k * std::numbers::pi) <= 1e-8);
    }
}

TEST_CASE("mfunc example") {
    const Result r = run({"mfunc", "--builtin", "identity", "--length", "20", "--beta", "pi", "--z", "0+1i",
                          "--output", "json"});
    REQUIRE(r.code == 0);
    const Json doc = Json::parse(r.out);
    const Complex m(doc["m"]["re"].get<double>(), doc["m"]["im"].get<double>());
    CHECK(std::abs(m - Complex(0, 1)) <= 1e-10);
}

TEST_CASE("validate reports an indefinite file") {
    const auto path = std::filesystem::temp_directory_path() / "cansys_cli_bad.json";
    std::ofstream(path) << R"({"cells":[{"length":1,"h":[1,2,1]}]})";
    const Result r = run({"validate", "--file", path.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("not positive semi-definite") != std::string::npos);

    const Result ok = run({"validate", "--builtin", "identity"});
    CHECK(ok.code == 0);
}

TEST_CASE("exit codes") {
    const Result unknown = run({"eigs", "--bogus"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("Usage") != std::string::npos);
    CHECK(unknown.out.empty());

    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"mfunc", "--builtin", "identity", "--file", "x.json"}).code == 2);
    CHECK(run({"mfunc", "--builtin", "identity", "--z", "1+2j"}).code == 2);
    CHECK(run({"eigs", "--builtin", "identity", "--alpha", "0"}).code == 2);
    CHECK(run({"eigs", "--builtin", "identity", "--window", "3", "1"}).code == 2);
    CHECK(run({"--output", "yaml", "eigs", "--builtin", "identity"}).code == 2);

    const Result denom = run({"mfunc", "--builtin", "identity", "--beta", "pi/2", "--z", "0"});
    CHECK(denom.code == 1);
    CHECK(denom.err.find("DenominatorZero") != std::string::npos);
    CHECK(run({"resolvent-check", "--builtin", "identity", "--z", "0"}).code == 1);
    CHECK(run({"eigs", "--builtin", "nonsense"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("show-defaults") {
    const Result r = run({"--show-defaults", "--output", "json"});
    REQUIRE(r.code == 0);
    const Json doc = Json::parse(r.out);
    CHECK(doc["classify_rel_tol"] == 1e-6);
    CHECK(doc["scan_grid_points"] == 2048);
    CHECK(doc["quadrature_order"] == 8);
}

TEST_CASE("every subcommand emits round-trippable, deterministic JSON") {
    const std::vector<std::vector<std::string>> commands{
        {"validate", "--builtin", "random-psd", "--seed", "3"},
        {"normalize", "--builtin", "random-psd", "--seed", "3"},
        {"builtin", "exp-decay", "--cells", "10", "--length", "2"},
        {"builtin"},
        {"classify", "--builtin", "exp-decay", "--z", "0.5+1i"},
        {"mfunc", "--builtin", "random-psd", "--seed", "2", "--z", "1-0.5i", "--beta", "2"},
        {"eigs", "--builtin", "half-identity", "--window", "0", "10"},
        {"resolvent-check", "--builtin", "identity", "--z", "0.3"},
        {"hs-compare", "--builtin", "identity", "--z", "0.3", "--k", "3"},
        {"relation-demo", "--seed", "5", "--trials", "40"},
    };
    for (auto args : commands) {
        args.push_back("--output");
        args.push_back("json");
        const Result a = run(args);
        const Result b = run(args);
        INFO(args.front());
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        const Json doc = Json::parse(a.out);
        CHECK(doc["schema_version"] == 1);
        check_round_trip(doc);

        args.back() = "csv";
        CHECK(run(args).code == 0);
        args.back() = "table";
        CHECK(run(args).code == 0);
    }
}

TEST_CASE("classify and relation demo content") {
    const Json c = Json::parse(run({"classify", "--builtin", "rank-one", "--output", "json"}).out);
    CHECK(c["verdict"] == "LimitPoint");
    CHECK(c["defect_estimate"] == 1);
    CHECK(c["zero_norm_class"] == true);

    const Json r = Json::parse(run({"relation-demo", "--output", "json"}).out);
    REQUIRE(r["relations"][0]["spectrum"].size() == 2);
    CHECK(std::abs(r["relations"][0]["spectrum"][0].get<double>() - 1.0) <= 1e-12);
    CHECK(std::abs(r["relations"][0]["spectrum"][1].get<double>() - 2.0) <= 1e-12);
    CHECK(r["relations"][1]["spectrum"].empty());
    CHECK(r["relations"][3]["selfadjoint"] == false);
    CHECK(r["extensions"][1]["violations"] == 0);
}

TEST_CASE("normalize --save writes a loadable file") {
    const auto path = std::filesystem::temp_directory_path() / "cansys_cli_norm.json";
    REQUIRE(run({"normalize", "--builtin", "identity", "--save", path.string()}).code == 0);
    const Result v = run({"validate", "--file", path.string(), "--output", "json"});
    REQUIRE(v.code == 0);
    const Json doc = Json::parse(v.out);
    CHECK(doc["trace_normalized"] == true);
    CHECK(doc["total_length"] == 2.0);
}
