#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "cyclegap/serialize.hpp"

using namespace cyclegap;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result run_cli(const std::string& args) {
    std::string cmd = std::string(CYCLEGAP_CLI) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string run_stderr(const std::string& args) {
    std::string cmd = std::string(CYCLEGAP_CLI) + " " + args + " 2>&1 >/dev/null";
    std::string out;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    ::pclose(pipe);
    return out;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("cyclegap_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
    fs::path dir;
};

} // namespace

TEST_F(CliTest, BoundCalculators) {
    auto g = run_cli("bound g --eps 0.01 --p 1");
    EXPECT_EQ(g.code, 0);
    EXPECT_EQ(g.out, "10000\n");
    auto phi = run_cli("bound phi --s 3 --c 6 --s2 5 --C 1");
    EXPECT_EQ(phi.out, "1000\n");
    EXPECT_EQ(run_cli("bound phi --s 5 --c 6 --s2 5 --C 1").code, 2);
    auto thm = run_cli("bound theorem --m 100 --c 6 --r 2 --C 1 --kappa 1");
    ASSERT_EQ(thm.code, 0);
    auto j = Json::parse(thm.out);
    EXPECT_EQ(j["sequence"], Json::parse("[100, 150, 200]"));
}

TEST_F(CliTest, GenOmcExample) {
    auto r = run_cli("gen omc --n 72 --k 8 --rounds 1 --label no --seed 7");
    ASSERT_EQ(r.code, 0);
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["cycle_profile"], Json::parse(R"({"8": 9})"));
    EXPECT_EQ(j["provenance"]["seed"], 7);
    EXPECT_EQ(j["provenance"]["tool_version"], kToolVersion);
    auto inst = omc_from_json(j);
    EXPECT_EQ(dump(to_json(inst, Provenance{7, 0, j["provenance"]["construction"]})), r.out);
}

TEST_F(CliTest, ByteIdenticalRepeats) {
    for (std::string args : {"gen omc --n 72 --k 8 --rounds 1 --label yes --seed 3",
                             "gen fmt --m 5 --c 2 --r 2 --label no --seed 3",
                             "gen kvs2k --n 48 --k 4 --label no --seed 3 --format edgelist",
                             "reduce maxcut --n 160 --k 8 --label no --source planted --eps 0.00625 --seed 9",
                             "reduce mst --n 24 --k 4 --label no --source planted --eps 0.1 --W 5 --seed 9"}) {
        auto a = run_cli(args + " --out " + path("a"));
        auto b = run_cli(args + " --out " + path("b"));
        ASSERT_EQ(a.code, 0) << args;
        ASSERT_EQ(b.code, 0) << args;
        EXPECT_EQ(read_file(path("a")), read_file(path("b"))) << args;
        EXPECT_EQ(run_cli(args).out, read_file(path("a"))) << args;
    }
}

TEST_F(CliTest, ReducePreconditionExitCode) {
    auto r = run_cli("reduce maxcut --n 160 --k 8 --source planted --eps 0.01");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(run_stderr("reduce maxcut --n 160 --k 8 --source planted --eps 0.01").find("k ≤ 1/(20ε) violated"),
              std::string::npos);
    EXPECT_EQ(run_cli("nonsense").code, 2);
    EXPECT_EQ(run_cli("gen omc --n 72").code, 2);
}

TEST_F(CliTest, ReduceFromInputAndVerifyGaps) {
    ASSERT_EQ(run_cli("gen omc --n 24 --k 4 --label no --source planted --seed 1 --out " + path("omc.json")).code, 0);
    ASSERT_EQ(run_cli("reduce mas --input " + path("omc.json") + " --eps 0.0625 --out " + path("mas.json")).code, 0);
    auto pi = problem_from_json(Json::parse(read_file(path("mas.json"))));
    EXPECT_EQ(pi.optimum.lo, Rational(18));
    auto ok = run_cli("verify gaps --input " + path("mas.json"));
    EXPECT_EQ(ok.code, 0);
    EXPECT_TRUE(Json::parse(ok.out)["all_pass"].get<bool>());

    auto j = Json::parse(read_file(path("mas.json")));
    j["optimum"]["lo"] = "23/1";
    j["optimum"]["hi"] = "23/1";
    write_atomic(path("bad.json"), dump(j));
    EXPECT_EQ(run_cli("verify gaps --input " + path("bad.json")).code, 3);
}

TEST_F(CliTest, StreamRun) {
    ASSERT_EQ(run_cli("reduce pt-connectivity --n 24 --k 4 --label no --source planted --eps 0.1 --format edgelist --out " +
                      path("g.txt"))
                  .code,
              0);
    auto r = run_cli("stream run --input " + path("g.txt") + " --algo connectivity");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(Json::parse(r.out)["report"]["answer"], 6);
}

TEST_F(CliTest, VerifyIdentitiesAltSum) {
    auto r = run_cli("verify identities --suite alt-sum --m 5 --c 4");
    ASSERT_EQ(r.code, 0);
    auto j = Json::parse(r.out);
    EXPECT_TRUE(j["all_pass"].get<bool>());
    EXPECT_EQ(j["entries"].size(), 4u);
    for (const auto& e : j["entries"]) EXPECT_EQ(e["status"], "pass");
}

TEST_F(CliTest, VerifySamplers) {
    auto r = run_cli("verify samplers --t 2,3,2 --draws 20000 --tol 0.05 --conditioned --seed 2");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(Json::parse(r.out)["entries"].size(), 2u);
    // Impossible tolerance must produce the verification exit code.
    EXPECT_EQ(run_cli("verify samplers --t 2,3,2 --draws 100 --tol 0").code, 3);
}

TEST_F(CliTest, ProtocolCommands) {
    auto r = run_cli("protocol run --protocol pointer-chasing --n 12 --k 4 --trials 50 --seed 1");
    ASSERT_EQ(r.code, 0);
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["stats"]["success_rate"], 1.0);
    EXPECT_EQ(j["stats"]["max_bits"], 16);
    auto csv = run_cli("protocol sweep --protocol sampling --n 48 --k 6 --trials 20 --q-grid 1,24");
    ASSERT_EQ(csv.code, 0);
    EXPECT_EQ(csv.out.rfind("n,k,protocol,q,r,rounds,bits,success,ci_lo,ci_hi\n", 0), 0u);
}

TEST_F(CliTest, BudgetIsARuntimeFailure) {
    std::string cmd = "env CYCLEGAP_BUDGET=10 " + std::string(CYCLEGAP_CLI) +
                      " verify samplers --t 2,3,2 --draws 10 >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    ASSERT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), 1);
}
