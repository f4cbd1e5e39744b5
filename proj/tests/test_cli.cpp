#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(SLOWLIGHT_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("slowlight_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const std::string kSmall = "--set grid.n_zeta=31 --set grid.n_tau=61";

} // namespace

TEST(Cli, ExactDefaultOutputs) {
    const fs::path out = fresh("exact");
    ASSERT_EQ(run("exact --out " + out.string() + " " + kSmall), 0);
    for (auto name : {"I_a.csv", "I_b.csv", "P1.csv", "P2.csv", "P3.csv", "summary.json", "manifest.json"})
        EXPECT_TRUE(fs::exists(out / name)) << name;
    const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
    EXPECT_EQ(m.at("files").size(), 6u);
    fs::remove_all(out);
}

TEST(Cli, ScenarioFileAndFrame) {
    const fs::path dir = fresh("scn");
    fs::create_directories(dir);
    { std::ofstream(dir / "s.json") << R"({"outputs": ["fields"], "grid": {"n_zeta": 21, "n_tau": 41}})"; }
    ASSERT_EQ(run("exact --scenario " + (dir / "s.json").string() + " --frame retarded --out " + (dir / "o").string()), 0);
    const std::string csv = slurp(dir / "o" / "I_a.csv");
    EXPECT_EQ(csv.rfind("t,z,value\n-1.500000000e+01,0.000000000e+00,", 0), 0u);
    EXPECT_FALSE(fs::exists(dir / "o" / "P1.csv"));
    fs::remove_all(dir);
}

TEST(Cli, SimulateAndSummary) {
    const fs::path out = fresh("sim");
    ASSERT_EQ(run("simulate --out " + out.string() + " " + kSmall + " --set solver.refine_tau=40 --set 'outputs=[\"fields\",\"residuals\"]'"), 0);
    EXPECT_TRUE(fs::exists(out / "residuals.json"));
    const fs::path sum = fresh("sum");
    ASSERT_EQ(run("summary --out " + sum.string()), 0);
    const auto j = nlohmann::json::parse(slurp(sum / "summary.json"));
    EXPECT_NEAR(j.at("memory_width").get<double>(), 1.10625, 1e-4);
    fs::remove_all(out);
    fs::remove_all(sum);
}

TEST(Cli, VerifyPassesOnDefaults) {
    const fs::path out = fresh("verify");
    ASSERT_EQ(run("verify --out " + out.string()), 0);
    const auto j = nlohmann::json::parse(slurp(out / "verify.json"));
    EXPECT_TRUE(j.at("passed").get<bool>());
    fs::remove_all(out);
}

TEST(Cli, VerifyFailsOnCoarseSolverGrid) {
    const fs::path out = fresh("verify_bad");
    EXPECT_EQ(run("verify --out " + out.string() + " --set solver.refine_tau=1 --set solver.refine_zeta=1"), 1);
    const auto j = nlohmann::json::parse(slurp(out / "verify.json"));
    EXPECT_FALSE(j.at("passed").get<bool>());
    bool named = false;
    for (const auto& c : j.at("checks"))
        if (!c.at("passed").get<bool>()) named = !c.at("name").get<std::string>().empty();
    EXPECT_TRUE(named);
    fs::remove_all(out);
}

TEST(Cli, ExitCodes) {
    const fs::path out = fresh("codes");
    EXPECT_EQ(run("exact --out " + out.string() + " --set soliton.epsilon0=1.5"), 2);
    EXPECT_EQ(run("exact --out " + out.string() + " --set medium.bogus=1"), 2);
    EXPECT_EQ(run("exact --out " + out.string() + " --frame sideways"), 2);
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("exact --scenario /nonexistent/scenario.json --out " + out.string()), 3);
    EXPECT_FALSE(fs::exists(out));
    // Output location below a regular file.
    const fs::path file = fresh("codes_file");
    { std::ofstream(file) << "x"; }
    EXPECT_EQ(run("exact " + kSmall + " --out " + (file / "o").string()), 3);
    fs::remove(file);
}
