#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "pktilt/oracle.hpp"

using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;

    json parsed() const { return json::parse(out); }
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "pktilt");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = pktilt::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

double check_value(const json& j, const std::string& name) {
    for (const auto& c : j["checks"])
        if (c["name"] == name) return c["value"].get<double>();
    FAIL("missing check " << name);
    return NAN;
}

}  // namespace

TEST_CASE("eppf command") {
    const auto single = invoke({"eppf", "--alpha", "0.5", "--delta", "1", "--gamma", "1", "--composition", "1"});
    CHECK(single.code == 0);
    CHECK(single.parsed()["p"].get<double>() == doctest::Approx(1.0).epsilon(1e-13));

    const auto r = invoke({"eppf", "--composition", "3,2"});
    REQUIRE(r.code == 0);
    const json j = r.parsed();
    CHECK(j["p"].get<double>() == doctest::Approx(0.00607274916461415116783675281065).epsilon(1e-10));
    CHECK(j["log_p"].get<double>() == doctest::Approx(std::log(0.00607274916461415116783675281065)).epsilon(1e-10));
    CHECK(j["weights"] == json::array({0.75, 0.5}));
    CHECK(j["version"] == PKTILT_VERSION);
    CHECK(j["params"]["alpha"] == 0.5);
    CHECK(j["tolerances"]["quadrature"] == 1e-10);
    CHECK(j["ok"] == true);

    const auto pd = invoke({"eppf", "--alpha", "0.3", "--gamma", "0", "--composition", "2,2,1", "--oracle", "pd"});
    REQUIRE(pd.code == 0);
    const json jp = pd.parsed();
    CHECK(jp["oracle"]["log_p"].get<double>() == doctest::Approx(jp["log_p"].get<double>()).epsilon(1e-10));
    CHECK(check_value(jp, "pd_agreement") < 1e-8);

    CHECK(invoke({"eppf", "--composition", "2", "--oracle", "pd"}).code == 2);
    CHECK(invoke({"eppf"}).code == 2);
    CHECK(invoke({"eppf", "--composition", "2,0"}).code == 2);
}

TEST_CASE("predict command") {
    const json empty = invoke({"predict"}).parsed();
    CHECK(empty["q"] == 1.0);
    CHECK(empty["existing"].empty());

    const json j = invoke({"predict", "--composition", "3,1,2"}).parsed();
    CHECK(std::fabs(j["sum"].get<double>() - 1.0) < 1e-10);
    CHECK(j["existing"].size() == 3);

    const json ratio = invoke({"predict", "--alpha", "0.25", "--composition", "3,1"}).parsed();
    CHECK(ratio["ratio_p1_p2"].get<double>() == doctest::Approx((3 - 0.25) / (1 - 0.25)).epsilon(1e-12));
    CHECK(ratio["ok"] == true);

    const auto csv = invoke({"predict", "--composition", "3,1", "--format", "csv"});
    CHECK(csv.out.rfind("block,size,log_weight,weight\n", 0) == 0);
    CHECK(csv.out.find("\nnew,0,") != std::string::npos);
}

TEST_CASE("blocks command") {
    const json one = invoke({"blocks", "--n", "1"}).parsed();
    CHECK(one["pmf"].size() == 1);
    CHECK(one["pmf"][0]["p"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

    const json eight = invoke({"blocks", "--n", "8", "--alpha", "0.75", "--delta", "2", "--gamma", "2"}).parsed();
    const json validated = invoke({"validate", "--n", "8", "--alpha", "0.75", "--delta", "2", "--gamma", "2"}).parsed();
    REQUIRE(validated["enumeration_pmf"].size() == 8);
    for (std::size_t k = 0; k < 8; ++k)
        CHECK(std::fabs(eight["pmf"][k]["p"].get<double>() - validated["enumeration_pmf"][k].get<double>()) < 1e-8);
    CHECK(std::fabs(eight["sum"].get<double>() - 1.0) < 1e-8);

    const auto csv = invoke({"blocks", "--n", "4", "--format", "csv"});
    std::istringstream lines(csv.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) ++count;
    CHECK(count == 5);
    CHECK(csv.out.rfind("k,log_p,p\n", 0) == 0);
}

TEST_CASE("diversity command") {
    const json j = invoke({"diversity", "--s", "1,30"}).parsed();
    CHECK(j["grid"][0]["density"].get<double>() == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-12));
    CHECK(j["grid"][1]["density"].get<double>() < 1e-100);
    CHECK(std::fabs(j["integral"].get<double>() - 1.0) < 1e-8);
    CHECK(j["ok"] == true);

    const json grid = invoke({"diversity", "--s-min", "0.1", "--s-max", "10", "--points", "3"}).parsed();
    REQUIRE(grid["grid"].size() == 3);
    CHECK(grid["grid"][1]["s"].get<double>() == doctest::Approx(1.0));

    const auto outside = invoke({"diversity", "--alpha", "0.75", "--s", "5"});
    CHECK(outside.code == 2);
    CHECK(outside.err.find("reliable") != std::string::npos);
}

TEST_CASE("sample command is deterministic") {
    const auto a = invoke({"sample", "--n", "30", "--seed", "9", "--replicates", "3"});
    const auto b = invoke({"sample", "--n", "30", "--seed", "9", "--replicates", "3"});
    const auto c = invoke({"sample", "--n", "30", "--seed", "10", "--replicates", "3"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
    const json j = a.parsed();
    CHECK(j["samples"].size() == 3);
    CHECK(j["samples"][0]["block_of"][0] == 1);
    CHECK(j["seed"] == 9);
}

TEST_CASE("validate command") {
    const auto r = invoke({"validate", "--n", "6", "--alpha", "0.25", "--gamma", "0"});
    CHECK(r.code == 0);
    const json j = r.parsed();
    CHECK(check_value(j, "eppf_normalization") < 1e-8);
    CHECK(check_value(j, "eppf_additivity") < 1e-8);
    CHECK(check_value(j, "pd_boundary") < 1e-8);
    CHECK(check_value(j, "sampler_exactness") < 1e-10);

    const json mc = invoke({"validate", "--n", "20", "--mc", "--replicates", "20000", "--seed", "4", "--max-tv", "0.05"}).parsed();
    CHECK(mc["mc"]["tv_distance"].get<double>() < 0.05);
    CHECK(mc["mc"]["seed"] == 4);

    // an unattainable threshold makes the self-check, and the exit code, fail
    const auto strict = invoke({"validate", "--n", "5", "--mc", "--replicates", "1000", "--max-tv", "1e-9"});
    CHECK(strict.code == 1);
    CHECK(strict.parsed()["ok"] == false);
}

TEST_CASE("tolerance override and output file") {
    setenv("PK_TILT_TOLERANCE", "1e-7", 1);
    const json env = invoke({"blocks", "--n", "3"}).parsed();
    CHECK(env["tolerances"]["quadrature"] == 1e-7);
    const json flag = invoke({"blocks", "--n", "3", "--tolerance", "1e-9"}).parsed();
    CHECK(flag["tolerances"]["quadrature"] == 1e-9);
    unsetenv("PK_TILT_TOLERANCE");

    const auto path = std::filesystem::temp_directory_path() / "pktilt_cli_test.json";
    const auto r = invoke({"blocks", "--n", "2", "--out", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    const json j = json::parse(in);
    CHECK(j["command"] == "blocks");
    std::filesystem::remove(path);
}

TEST_CASE("usage errors") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"blocks", "--alpha", "1.5"}).code == 2);
    CHECK(invoke({"blocks", "--format", "xml"}).code == 2);
    CHECK(invoke({"blocks", "--n", "0"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}
