#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "calcert/commands.hpp"
#include "calcert/criteria.hpp"
#include "calcert/io.hpp"

using namespace calcert;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("calcert_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string &name, const std::string &content) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << content;
        return p.string();
    }

    std::string simulate_to(const std::string &name, const std::vector<std::string> &args) const {
        std::vector<std::string> full{"simulate"};
        full.insert(full.end(), args.begin(), args.end());
        const Outcome o = invoke(full);
        EXPECT_EQ(o.code, 0) << o.err;
        return write(name, o.out);
    }

    fs::path dir_;
};

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> cells;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) {
        cells.push_back(cell);
    }
    return cells;
}

}  // namespace

TEST_F(CliTest, HelpAndUsageErrors) {
    EXPECT_EQ(invoke({"--help"}).code, 0);
    EXPECT_EQ(invoke({}).code, kExitUsage);
    EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(invoke({"certify", "x.json"}).code, kExitUsage);  // --scenario is required
    EXPECT_EQ(invoke({"simulate", "--state", "ghz"}).code, kExitUsage);
    EXPECT_EQ(invoke({"sweep", "--family", "isotropic"}).code, kExitUsage);
    EXPECT_EQ(invoke({"region", "--resolution", "1"}).code, kExitUsage);
}

TEST_F(CliTest, CertifyRoundTripMatchesLibrary) {
    const std::string path = simulate_to("werner.json", {"--state", "werner", "--p", "0.5"});
    const Outcome o = invoke({"certify", path, "--scenario", "dim", "--d", "2"});
    EXPECT_EQ(o.code, kExitEntangled) << o.err;
    const nlohmann::json j = nlohmann::json::parse(o.out);
    const Verdict expected = certify(load_data_matrix(path), ScenarioAssumption::dimension_bounded(2));
    EXPECT_EQ(j["status"], "Entangled");
    EXPECT_EQ(j["criterion"], expected.criterion);
    EXPECT_EQ(j["margin"].get<double>(), expected.margin);
    EXPECT_EQ(j["value"].get<double>(), expected.value);
}

TEST_F(CliTest, CounterexampleUnderTwoScenarios) {
    const std::string path = simulate_to("ex.json", {"--state", "example-sep"});
    const Outcome sharp = invoke({"certify", path, "--scenario", "sharp"});
    EXPECT_EQ(sharp.code, kExitEntangled) << sharp.err;
    EXPECT_NEAR(nlohmann::json::parse(sharp.out)["margin"].get<double>(), 0.04906566589446748, 1e-12);
    EXPECT_FALSE(fs::exists(path + ".witness.json"));

    const Outcome unsharp = invoke({"certify", path, "--scenario", "unsharp-orthogonal"});
    EXPECT_EQ(unsharp.code, kExitSeparableModel) << unsharp.err;
    const nlohmann::json v = nlohmann::json::parse(unsharp.out);
    EXPECT_EQ(v["status"], "SeparableModelExists");
    ASSERT_TRUE(v.contains("witness_file"));
    const std::string witness_path = v["witness_file"].get<std::string>();
    EXPECT_EQ(witness_path, path + ".witness.json");
    std::ifstream in(witness_path);
    const nlohmann::json w = nlohmann::json::parse(in);
    EXPECT_EQ(w["type"], "separable_witness");

    const std::string custom = (dir_ / "model.json").string();
    EXPECT_EQ(invoke({"certify", path, "--scenario", "unsharp-orthogonal", "--witness-file", custom}).code,
              kExitSeparableModel);
    EXPECT_TRUE(fs::exists(custom));

    fs::remove(witness_path);
    const Outcome quiet = invoke({"certify", path, "--scenario", "unsharp-orthogonal", "--no-witness"});
    EXPECT_EQ(quiet.code, kExitSeparableModel);
    EXPECT_FALSE(fs::exists(witness_path));
}

TEST_F(CliTest, InconclusiveExitCode) {
    const std::string path = write("weak.json", R"({"type":"data_matrix","settings":3,
        "matrix":[[1,0,0,0],[0,0.2,0,0],[0,0,0.2,0],[0,0,0,0.2]]})");
    const Outcome o = invoke({"certify", path, "--scenario", "dim", "--d", "3"});
    EXPECT_EQ(o.code, kExitInconclusive);
    EXPECT_EQ(nlohmann::json::parse(o.out)["note"], "sufficient_only");
}

TEST_F(CliTest, ConfigurationErrors) {
    const std::string path = simulate_to("w.json", {"--state", "werner", "--p", "0.1", "--settings", "xz"});
    EXPECT_EQ(invoke({"certify", path, "--scenario", "qubit", "--d", "3"}).code, kExitUsage);
    EXPECT_EQ(invoke({"certify", path, "--scenario", "dim"}).code, kExitUsage);
    EXPECT_EQ(invoke({"certify", path, "--scenario", "telepathic"}).code, kExitUsage);
    EXPECT_EQ(invoke({"certify", path, "--scenario", "qubit", "--epsilon", "0"}).code, kExitUsage);
    EXPECT_EQ(invoke({"selftest", "--epsilon", "-1"}).code, kExitUsage);
    EXPECT_EQ(invoke({"certify", (dir_ / "absent.json").string(), "--scenario", "qubit"}).code, kExitUsage);
}

TEST_F(CliTest, MalformedInputNamesLocation) {
    const std::string path = write("bad.json", "{\n  \"type\": \"data_matrix\",\n  \"settings\": 2\n  \"matrix\": []\n}");
    const Outcome o = invoke({"certify", path, "--scenario", "qubit"});
    EXPECT_EQ(o.code, kExitUsage);
    EXPECT_NE(o.err.find(path + ":4:"), std::string::npos) << o.err;

    const std::string field = write("field.json", R"({"type":"data_matrix","settings":1,"matrix":[[1,0],[0,"2*"]]})");
    const Outcome f = invoke({"certify", field, "--scenario", "qubit"});
    EXPECT_EQ(f.code, kExitUsage);
    EXPECT_NE(f.err.find("matrix[1][1]"), std::string::npos) << f.err;
}

TEST_F(CliTest, EpsilonFromEnvironment) {
    const std::string path = write("d.json", R"({"type":"data_matrix","settings":2,
        "matrix":[[1,0,0],[0,0.7,0],[0,0,0.4]]})");
    EXPECT_EQ(invoke({"certify", path, "--scenario", "sharp-orthogonal"}).code, kExitEntangled);
    ::setenv("CALCERT_EPSILON", "0.2", 1);
    const int loose = invoke({"certify", path, "--scenario", "sharp-orthogonal"}).code;
    const int overridden = invoke({"certify", path, "--scenario", "sharp-orthogonal", "--epsilon", "1e-9"}).code;
    ::setenv("CALCERT_EPSILON", "abc", 1);
    const int garbage = invoke({"certify", path, "--scenario", "sharp-orthogonal"}).code;
    ::unsetenv("CALCERT_EPSILON");
    EXPECT_EQ(loose, kExitInconclusive);
    EXPECT_EQ(overridden, kExitEntangled);
    EXPECT_EQ(garbage, kExitUsage);
}

TEST_F(CliTest, SimulateCsv) {
    const Outcome o = invoke({"simulate", "--state", "werner", "--p", "0.25", "--settings", "xz", "--format", "csv"});
    ASSERT_EQ(o.code, 0);
    const auto lines = lines_of(o.out);
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], "1,0,0");
    EXPECT_DOUBLE_EQ(std::stod(split(lines[1])[1]), -0.75);
}

TEST_F(CliTest, SweepThresholds) {
    const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
        {{"sweep", "--family", "werner", "--criterion", "det"}, "bisected_threshold,0.666667"},
        {{"sweep", "--family", "werner", "--criterion", "ccnr"}, "bisected_threshold,0.500000"},
        {{"sweep", "--family", "bfp", "--criterion", "det", "--steps", "10"}, "bisected_threshold,0.400000"},
    };
    for (const auto &[args, last] : cases) {
        const Outcome o = invoke(args);
        ASSERT_EQ(o.code, 0) << o.err;
        const auto lines = lines_of(o.out);
        ASSERT_GE(lines.size(), 3u);
        EXPECT_EQ(lines.front(), "p,value,threshold,margin,status");
        EXPECT_EQ(lines.back(), last);
    }
    const auto werner = lines_of(invoke({"sweep", "--family", "werner", "--steps", "4"}).out);
    ASSERT_EQ(werner.size(), 7u);
    EXPECT_EQ(split(werner[1]).back(), "Entangled");
    EXPECT_EQ(split(werner[4]).back(), "Inconclusive");
}

TEST_F(CliTest, SweepIsDeterministic) {
    const std::vector<std::string> args{"sweep", "--family", "bfp", "--steps", "5"};
    EXPECT_EQ(invoke(args).out, invoke(args).out);
}

TEST_F(CliTest, RegionExamplePoints) {
    const Outcome o = invoke({"region", "--resolution", "21"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto lines = lines_of(o.out);
    ASSERT_EQ(lines.size(), 1u + 21u * 21u);
    EXPECT_EQ(lines[0], "lambda1,lambda2,case1,case2,case3,case4,det_qubit,det_qutrit");
    auto flags_at = [&](double l1, double l2) {
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto cells = split(lines[i]);
            if (std::abs(std::stod(cells[0]) - l1) < 1e-9 && std::abs(std::stod(cells[1]) - l2) < 1e-9) {
                std::string flags;
                for (std::size_t c = 2; c < cells.size(); ++c) {
                    flags += cells[c];
                }
                return flags;
            }
        }
        return std::string("missing");
    };
    EXPECT_EQ(flags_at(1.0, 0.05), "101000");
    EXPECT_EQ(flags_at(0.9, 0.9), "111111");
    EXPECT_EQ(flags_at(0.4, 0.4), "000000");
    EXPECT_EQ(o.out, invoke({"region", "--resolution", "21"}).out);
}

TEST_F(CliTest, QuickSelftestPasses) {
    const Outcome o = invoke({"selftest", "--quick"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.err.find("9/9 checks passed"), std::string::npos) << o.err;
}
