#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <unistd.h>

#include "fif/cli.hpp"
#include "fif/io.hpp"

using namespace fif;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("fif_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
                std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        io::write_file_atomic(path("tent.csv"), "t,x\n0,0\n0.5,1\n1,0\n");
        io::write_file_atomic(path("quad.csv"), "t,x\n0,0\n1,1\n2,-1\n3,0.5\n4,0\n");
        io::write_file_atomic(path("bumped.json"),
                              R"({"xs":[0,0.5,1],"ys":[0,0.5,1],"zs":[[0,0.1,0],[0,0.25,0.5],[0,0.5,1]]})");
        io::write_file_atomic(path("xy.json"),
                              R"({"xs":[0,0.5,1],"ys":[0,0.5,1],"zs":[[0,0,0],[0,0.25,0.5],[0,0.5,1]]})");
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    std::string tent_ifs(const std::string &alpha = "0.3,0.3") {
        const auto r = run({"construct", "--data", path("tent.csv"), "--alpha", alpha, "--out", path("ifs.json")});
        EXPECT_EQ(r.code, cli::kExitOk) << r.err;
        return path("ifs.json");
    }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, ConstructTent) {
    const auto r = run({"construct", "--data", path("tent.csv"), "--alpha", "0.3,0.3"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto ifs = io::parse_ifs1d(r.out);
    EXPECT_EQ(ifs.size(), 2u);
    EXPECT_EQ(ifs.vmaps()[0].alpha, 0.3);
    EXPECT_EQ(ifs.lmaps()[1].b, 0.5);
}

TEST_F(CliTest, IntegrateTent) {
    const auto r = run({"integrate", "--ifs", tent_ifs(), "--method", "both"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto j = io::parse_report(r.out);
    EXPECT_NE(r.out.find("\"closed_form\":0.7142857142857143"), std::string::npos) << r.out;
    EXPECT_NEAR(j["quadrature"].get<double>(), 5.0 / 7.0, 1e-4);
}

TEST_F(CliTest, NonConvergenceExitsTwo) {
    const auto r = run({"eval", "--ifs", tent_ifs(), "--tol", "1e-13", "--max-iter", "3"});
    EXPECT_EQ(r.code, cli::kExitNonConvergence);
    EXPECT_NE(r.err.find("1e-13"), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, UnknownFlagExitsOneWithUsage) {
    const auto r = run({"eval", "--ifs", tent_ifs(), "--bogus"});
    EXPECT_EQ(r.code, cli::kExitInvalid);
    EXPECT_NE(r.err.find("error:"), std::string::npos);
    EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
}

TEST_F(CliTest, MissingSubcommandOrRequiredFlag) {
    EXPECT_EQ(run({}).code, cli::kExitInvalid);
    EXPECT_EQ(run({"construct", "--data", path("tent.csv")}).code, cli::kExitInvalid);
    EXPECT_EQ(run({"eval", "--ifs", tent_ifs(), "--format", "xml"}).code, cli::kExitInvalid);
    EXPECT_EQ(run({"eval", "--ifs", tent_ifs(), "--tol", "-1"}).code, cli::kExitInvalid);
}

TEST_F(CliTest, HelpExitsZero) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, cli::kExitOk);
    EXPECT_NE(r.out.find("fis2d-check"), std::string::npos);
}

TEST_F(CliTest, ScalarAlphaIsBroadcast) {
    const auto r = run({"construct", "--data", path("quad.csv"), "--alpha", "0.3"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto ifs = io::parse_ifs1d(r.out);
    ASSERT_EQ(ifs.size(), 4u);
    for (const auto &v : ifs.vmaps())
        EXPECT_EQ(v.alpha, 0.3);
}

TEST_F(CliTest, AlphaListLengthMismatch) {
    const auto r = run({"construct", "--data", path("quad.csv"), "--alpha", "0.3,0.2"});
    EXPECT_EQ(r.code, cli::kExitInvalid);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, AlphaFromFile) {
    io::write_file_atomic(path("alpha.txt"), "[0.1, -0.2]\n");
    const auto r = run({"construct", "--data", path("tent.csv"), "--alpha", path("alpha.txt")});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(io::parse_ifs1d(r.out).vmaps()[1].alpha, -0.2);
}

TEST_F(CliTest, CollinearPolicyOnBumpedGridReports) {
    const auto r = run({"fis2d-eval", "--grid", path("bumped.json"), "--alpha", "0.3", "--policy", "collinear",
                        "--resolution", "16", "--out", path("surface.csv")});
    EXPECT_EQ(r.code, cli::kExitInvalid);
    EXPECT_NE(r.err.find("\"left\":0.1"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("\"pass\":false"), std::string::npos) << r.err;
    EXPECT_FALSE(fs::exists(path("surface.csv")));
}

TEST_F(CliTest, Fis2dCheckShowsRawJump) {
    const auto r = run({"fis2d-check", "--grid", path("bumped.json"), "--alpha", "0.3", "--resolution", "64"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto j = io::parse_report(r.out);
    EXPECT_GT(j["seams"]["x=1"].get<double>(), 0.01);
    EXPECT_FALSE(j["collinearity"]["pass"].get<bool>());
}

TEST_F(CliTest, Fis2dIntegrateXy) {
    io::write_file_atomic(path("xy0.json"),
                          R"({"xs":[0,0.5,1],"ys":[0,0.5,1],"zs":[[0,0,0],[0,0.25,0.5],[0,0.5,1]]})");
    const auto r = run({"fis2d-integrate", "--grid", path("xy0.json"), "--alpha", "0", "--resolution", "64"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto j = io::parse_report(r.out);
    EXPECT_NEAR(j["closed_form"].get<double>(), 0.25, 1e-12);
    EXPECT_EQ(j["policy"].get<std::string>(), "average");
}

TEST_F(CliTest, AttractorCsvAndPgm) {
    const auto ifs = tent_ifs();
    const auto csv = run({"attractor", "--ifs", ifs, "--seed", "3", "--iterations", "500", "--burn-in", "10"});
    ASSERT_EQ(csv.code, cli::kExitOk) << csv.err;
    EXPECT_EQ(csv.out.rfind("t,x\n", 0), 0u);
    // header plus 500 - 10 recorded points
    EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 491);
    const auto pgm = run({"attractor", "--ifs", ifs, "--method", "deterministic", "--depth", "6", "--format", "pgm",
                          "--width", "32", "--height", "16", "--pgm", "ascii"});
    ASSERT_EQ(pgm.code, cli::kExitOk) << pgm.err;
    EXPECT_EQ(pgm.out.rfind("P2\n# bbox ", 0), 0u);
    EXPECT_NE(pgm.out.find("\n32 16\n255\n"), std::string::npos);
}

TEST_F(CliTest, MissingInputFileLeavesNoOutput) {
    const auto r = run({"eval", "--ifs", path("absent.json"), "--out", path("out.csv")});
    EXPECT_EQ(r.code, cli::kExitInvalid);
    EXPECT_FALSE(fs::exists(path("out.csv")));
    for (const auto &e : fs::directory_iterator(dir_))
        EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos) << e.path();
}

TEST_F(CliTest, ParseErrorNamesLine) {
    io::write_file_atomic(path("bad.csv"), "t,x\n0,0\n0,1\n1,0\n");
    const auto r = run({"construct", "--data", path("bad.csv"), "--alpha", "0.3"});
    EXPECT_EQ(r.code, cli::kExitInvalid);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
    const auto ifs = tent_ifs();
    const std::vector<std::vector<std::string>> commands{
        {"eval", "--ifs", ifs, "--resolution", "256"},
        {"attractor", "--ifs", ifs, "--seed", "11", "--iterations", "2000", "--chains", "2"},
        {"compare", "--ifs", ifs},
        {"violate", "--ifs", ifs, "--cell", "2"},
        {"fis2d-eval", "--grid", path("xy.json"), "--alpha", "0.2", "--resolution", "32"},
    };
    for (const auto &args : commands) {
        const auto a = run(args), b = run(args);
        EXPECT_EQ(a.code, cli::kExitOk) << args.front() << ": " << a.err;
        EXPECT_EQ(a.out, b.out) << args.front();
        EXPECT_FALSE(a.out.empty());
    }
}

TEST(CliReference, DocumentsEveryFlag) {
    const auto text = cli::flags_reference();
    for (const char *flag : {"--data", "--grid", "--alpha", "--tol", "--max-iter", "--resolution", "--policy",
                             "--seed", "--iterations", "--burn-in", "--out", "--format", "--method", "--chains",
                             "--weighting", "--depth", "--width", "--height", "--pgm", "--cell", "--delta"})
        EXPECT_NE(text.find(flag), std::string::npos) << flag;
    for (const char *cmd : {"construct", "eval", "integrate", "attractor", "compare", "violate", "fis2d-build",
                            "fis2d-eval", "fis2d-check", "fis2d-integrate"})
        EXPECT_NE(text.find(cmd), std::string::npos) << cmd;
    EXPECT_NE(text.find("1e-10"), std::string::npos);
    EXPECT_NE(text.find("4096"), std::string::npos);
}
