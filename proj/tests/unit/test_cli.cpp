#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(SXAI_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("sxai_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string out(const std::string& sub) const { return (dir / sub).string(); }
    fs::path dir;
};

constexpr const char* kSmall = " --n-ars 12 --samples-per-ar 34";

}  // namespace

TEST_F(Cli, HelpAndUsageErrors) {
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("synth --no-such-flag 1 --out " + out("a")), 2);
}

TEST_F(Cli, SynthIsByteIdenticalAcrossRuns) {
    ASSERT_EQ(run(std::string("synth --seed 9") + kSmall + " --out " + out("a")), 0);
    ASSERT_EQ(run(std::string("synth --seed 9") + kSmall + " --out " + out("b")), 0);
    ASSERT_EQ(run(std::string("synth --seed 10") + kSmall + " --out " + out("c")), 0);
    const auto a = slurp(dir / "a" / "synth.csv");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir / "b" / "synth.csv"));
    EXPECT_NE(a, slurp(dir / "c" / "synth.csv"));
    const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "run_synth.json"));
    EXPECT_EQ(manifest.at("seed"), 9);
    EXPECT_EQ(manifest.at("command"), "synth");
}

TEST_F(Cli, InvalidPlantWritesNothing) {
    EXPECT_EQ(run("synth --rho 1.5 --out " + out("a")), 2);
    EXPECT_TRUE(!fs::exists(dir / "a") || fs::is_empty(dir / "a"));
    EXPECT_EQ(run("synth --dominant NOPE --out " + out("b")), 2);
    EXPECT_EQ(run("synth --dominant TOTPOT --correlate TOTPOT --out " + out("c")), 2);
}

TEST_F(Cli, ConfigFileRulesAndOverrides) {
    {
        std::ofstream cfg(dir / "ok.cfg");
        cfg << "# comment\nseed = 5\nn_ars = 12\nsamples-per-ar = 34\n";
    }
    {
        std::ofstream cfg(dir / "bad.cfg");
        cfg << "seed = 5\ncolour = blue\n";
    }
    ASSERT_EQ(run("synth --config " + out("ok.cfg") + " --seed 7 --out " + out("a")), 0);
    const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "run_synth.json"));
    EXPECT_EQ(manifest.at("seed"), 7);
    EXPECT_EQ(manifest.at("config").at("n-ars"), "12");
    EXPECT_EQ(run("synth --config " + out("bad.cfg") + " --out " + out("b")), 2);
    EXPECT_EQ(run("synth --config " + out("missing.cfg") + " --out " + out("c")), 2);
    EXPECT_EQ(run("synth --seed abc --out " + out("d")), 2);
}

TEST_F(Cli, InputErrorsExitTwo) {
    EXPECT_EQ(run("train --data " + out("nope.csv") + " --out " + out("a")), 2);
    EXPECT_EQ(run("train --data " + std::string(SXAI_FIXTURES) + "/bad_label.csv --out " + out("a")), 2);
    ASSERT_EQ(run(std::string("synth") + kSmall + " --out " + out("s")), 0);
    const std::string data = " --data " + out("s/synth.csv");
    ASSERT_EQ(run("train --epochs 1 --hidden 4" + data + " --out " + out("m")), 0);
    EXPECT_TRUE(fs::exists(dir / "m" / "model.json"));
    EXPECT_TRUE(fs::exists(dir / "m" / "metrics.json"));
    EXPECT_TRUE(fs::exists(dir / "m" / "run_train.json"));
    const std::string model = " --model " + out("m/model.json");
    EXPECT_EQ(run("explain-local --sample-id 100000 --lime-n 50" + data + model + " --out " + out("l")), 2);
    EXPECT_EQ(run("explain-global --method magic" + data + model + " --out " + out("g")), 2);
    {
        std::ofstream bad(dir / "broken.json");
        bad << "{\"not\": \"a model\"}";
    }
    EXPECT_EQ(run("evaluate" + data + " --model " + out("broken.json") + " --out " + out("e")), 2);
    ASSERT_EQ(run("explain-local --sample-id 0 --lime-n 50" + data + model + " --out " + out("l")), 0);
    EXPECT_TRUE(fs::exists(dir / "l" / "lime_0.json"));
}
