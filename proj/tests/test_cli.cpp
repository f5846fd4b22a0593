#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(GUMDP_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path scratch() {
    auto dir = std::filesystem::temp_directory_path() / "gumdp_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, BuiltinWritesLoadableModel) {
    const auto out = scratch() / "mf3.json";
    auto r = run("builtin mf3 --state-only --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.out;
    r = run("eval-finite-exact " + out.string() + " -K 4");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("gap: 0.125"), std::string::npos) << r.out;
}

TEST(Cli, AnalyzeChain) {
    const auto r = run("analyze-chain mf3 --policy uniform");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("recurrent_classes: 2"), std::string::npos);
    EXPECT_NE(r.out.find("gumdp_unichain: false"), std::string::npos);
}

TEST(Cli, EvalExact) {
    auto r = run("eval-exact mf3 --state-only --setting discounted --gamma 0.9");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("f_infinity: 0.415"), std::string::npos) << r.out;
    r = run("eval-exact mf3 --setting average");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("f_infinity: 0.25"), std::string::npos) << r.out;
}

TEST(Cli, EvalFinite) {
    const auto r = run("eval-finite mf3 --state-only -K 1 --gamma 0.9 -H inf -N 200 --seed 3");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("estimate: 0.8199999"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("H: 175"), std::string::npos) << r.out;
}

TEST(Cli, Bounds) {
    auto r = run("bounds mf3 --state-only --theorem 6 -K 10 --csv");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("value: 0.05"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("kind,value"), std::string::npos);
    r = run("bounds mf3 --state-only --theorem 2 --gamma 0.9 -K 1");
    EXPECT_NE(r.out.find("value: 0.405"), std::string::npos) << r.out;
    r = run("bounds mf3 --theorem 3 -K 100 -H 50 --gamma 0.9 --delta 0.1");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("L=2"), std::string::npos) << r.out;
    // Entropy has no global Lipschitz constant.
    r = run("bounds mf1 --theorem 3 -K 100 -H 50 --gamma 0.9");
    EXPECT_EQ(r.code, 1) << r.out;
    r = run("bounds mf1 --theorem 3 -K 100 -H 50 --gamma 0.9 -L 5");
    EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("eval-exact /nonexistent/model.json --setting average").code, 3);
    EXPECT_EQ(run("eval-exact mf3 --setting sideways").code, 1);
    EXPECT_EQ(run("bounds mf3 --theorem 4").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    EXPECT_EQ(run("eval-finite-exact mf1 -K 0").code, 1);
    // Multinomial support over the cap is a numerical failure.
    const auto model = scratch() / "many.json";
    std::ofstream(model) << R"({"n_states": 8, "n_actions": 1,
      "kernel": [[[0,0.125,0.125,0.125,0.125,0.125,0.125,0.25]],
                 [[0,1,0,0,0,0,0,0]], [[0,0,1,0,0,0,0,0]], [[0,0,0,1,0,0,0,0]],
                 [[0,0,0,0,1,0,0,0]], [[0,0,0,0,0,1,0,0]], [[0,0,0,0,0,0,1,0]],
                 [[0,0,0,0,0,0,0,1]]],
      "p0": [1,0,0,0,0,0,0,0], "state_only": true, "objective": {"kind": "entropy"}})";
    EXPECT_EQ(run("eval-finite-exact " + model.string() + " -K 1000").code, 2);
    const auto bad = scratch() / "bad.json";
    std::ofstream(bad) << "{";
    EXPECT_EQ(run("analyze-chain " + bad.string()).code, 1);
}

TEST(Cli, ExperimentIsReproducible) {
    const auto dir = scratch();
    const auto cfg = dir / "exp.json";
    std::ofstream(cfg) << R"({"gumdp": "mf1", "policy": "figure", "noise_eps": 0.05,
      "grid": {"K": [1, 2], "H": [5], "gamma": [0.9, "average"]},
      "N": 50, "n_seeds": 4, "master_seed": 9, "output": "exp.csv"})";
    ASSERT_EQ(run("experiment " + cfg.string()).code, 0);
    const std::string first = slurp(dir / "exp.csv");
    ASSERT_EQ(run("experiment " + cfg.string()).code, 0);
    EXPECT_EQ(slurp(dir / "exp.csv"), first);
    EXPECT_EQ(first.rfind("gumdp,noise_eps,setting,gamma,H,K,seed,N,estimate,f_infinity,exact_fK\n# meta:", 0), 0u);
    EXPECT_TRUE(std::filesystem::exists(dir / "exp_summary.csv"));
}

TEST(Cli, Table1) {
    const auto r = run("table1 mf3 --state-only -N 200");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("exact gap 0.5"), std::string::npos) << r.out;
}
