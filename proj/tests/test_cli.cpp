#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"
#include "ffm/common.hpp"

using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = ffm::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, PrimeCounts) {
    auto r = run({"primes", "--q", "3", "--dmax", "4"});
    ASSERT_EQ(r.code, ffm::cli::kOk) << r.err;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["results"]["E"], json({3, 3, 8, 18}));
    EXPECT_TRUE(j.contains("tool_version"));
    EXPECT_EQ(j["config_echo"]["subcommand"], "primes");
    EXPECT_EQ(j["config_echo"]["args"]["q"], "3");
}

TEST(Cli, FirstMomentMainTerm) {
    auto r = run({"moment", "--q", "5", "--N", "6", "--r", "1", "--rt", "0"});
    ASSERT_EQ(r.code, ffm::cli::kOk) << r.err;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["results"]["mt"], json({1.0, 0.0}));
}

TEST(Cli, ShiftsAsPairs) {
    auto r = run({"moment", "--q", "5", "--N", "4", "--alpha", "0,0.2,0,0.2", "--K", "12"});
    ASSERT_EQ(r.code, ffm::cli::kOk) << r.err;
    EXPECT_NEAR(json::parse(r.out)["results"]["mt"][0].get<double>(), 5.0, 1e-9);
    EXPECT_EQ(run({"moment", "--q", "5", "--N", "4", "--alpha", "0.1,0,0,0"}).code, ffm::cli::kUsage);
    EXPECT_EQ(run({"moment", "--q", "5", "--N", "4", "--alpha", "0,0.1"}).code, ffm::cli::kUsage);
}

TEST(Cli, ReproducibleOutput) {
    const std::vector<std::string> args{"chimera", "--q", "5", "--N", "6", "--k", "2", "--samples", "1500",
                                        "--seed", "42", "--phi", "abs2:1", "--phi", "c:1"};
    auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, ffm::cli::kOk) << a.err;
    EXPECT_EQ(std::hash<std::string>{}(a.out), std::hash<std::string>{}(b.out));
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    auto c = run(threaded);
    EXPECT_EQ(json::parse(a.out)["results"], json::parse(c.out)["results"]);
    auto x1 = run({"xi-sample", "--q", "3", "--dmax", "3", "--seed", "9"});
    auto x2 = run({"xi-sample", "--q", "3", "--dmax", "3", "--seed", "9"});
    EXPECT_EQ(x1.out, x2.out);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, ffm::cli::kUsage);
    EXPECT_EQ(run({"nonsense"}).code, ffm::cli::kUsage);
    EXPECT_EQ(run({"primes", "--q", "3"}).code, ffm::cli::kUsage);
    EXPECT_EQ(run({"primes", "--q", "4", "--dmax", "2", "--list"}).code, ffm::cli::kUsage);
    EXPECT_EQ(run({"density", "--q", "5", "--x", "0.1,0.1", "--mode", "magic"}).code, ffm::cli::kUsage);

    auto budget = run({"primes", "--q", "3", "--dmax", "30", "--list"});
    EXPECT_EQ(budget.code, ffm::cli::kBudget);

    EXPECT_EQ(run({"chimera", "--q", "5", "--N", "4", "--samples", "5"}).code, ffm::cli::kUsage);

    std::ostringstream err;
    int code = ffm::cli::report_error(std::make_exception_ptr(ffm::IdentityFailure("l-degree", "c_3 = 1")), err);
    EXPECT_EQ(code, ffm::cli::kIdentity);
    EXPECT_NE(err.str().find("[l-degree]"), std::string::npos);
    EXPECT_EQ(ffm::cli::report_error(std::make_exception_ptr(ffm::BudgetExceeded("x")), err), ffm::cli::kBudget);
    EXPECT_EQ(ffm::cli::report_error(std::make_exception_ptr(ffm::DomainError("x")), err), ffm::cli::kUsage);
}

TEST(Cli, BudgetFromEnvironment) {
    ::setenv("FFM_ENUM_BUDGET", "100", 1);
    auto r = run({"family", "--q", "3", "--N", "3"});
    ::unsetenv("FFM_ENUM_BUDGET");
    EXPECT_EQ(r.code, ffm::cli::kBudget);
    EXPECT_EQ(run({"family", "--q", "3", "--N", "2"}).code, ffm::cli::kOk);
}

TEST(Cli, WritesOutputFile) {
    auto path = std::filesystem::temp_directory_path() / "ffm_cli_test.json";
    auto r = run({"expect", "--q", "3", "--hol", "1,1", "--anti", "2", "--out", path.string()});
    ASSERT_EQ(r.code, ffm::cli::kOk) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    auto j = json::parse(f);
    EXPECT_EQ(j["results"]["count"], "9");
    std::filesystem::remove(path);
}

TEST(Cli, OtherSubcommands) {
    auto h = run({"hermite", "--q", "5", "--k", "1", "--D", "6"});
    EXPECT_EQ(h.code, ffm::cli::kOk) << h.err;
    auto d = run({"decompose", "--q", "5", "--N", "3", "--k", "1"});
    EXPECT_EQ(d.code, ffm::cli::kOk) << d.err;
    auto den = run({"density", "--q", "5", "--x", "0.5,0.2"});
    EXPECT_EQ(den.code, ffm::cli::kOk) << den.err;
    auto e = run({"expect", "--q", "3", "--p", "2", "--pbar", "2"});
    ASSERT_EQ(e.code, ffm::cli::kOk) << e.err;
    EXPECT_EQ(json::parse(e.out)["results"]["value"], "15/1");
}
