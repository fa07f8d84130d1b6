#include <ramcat/matrix.hpp>

#include <gtest/gtest.h>

using namespace ramcat;

namespace {

auto single(Json cell) -> Json
{
    return Json{{"cells", Json::array({std::move(cell)})}};
}

auto lo(int max) -> Json { return Json{{"family", "lo"}, {"max", max}}; }

} // namespace

TEST(Matrix, EmptyConfigIsOk)
{
    auto r = run_matrix(Json{{"cells", Json::array()}});
    EXPECT_EQ(r.status, ReportStatus::ok);
    EXPECT_EQ(r.report.at("summary").at("cells"), 0);
    EXPECT_EQ(exit_code(r.status), 0);
}

TEST(Matrix, DefaultConfigPasses)
{
    auto r = run_matrix(default_matrix_config());
    EXPECT_EQ(r.status, ReportStatus::ok) << r.dump();
    for (int c = 1; c <= 9; ++c)
        EXPECT_EQ(r.report.at("criteria").at(std::to_string(c)), "ok") << c;
    for (const auto& cell : r.report.at("cells"))
        EXPECT_EQ(cell.at("status"), "ok") << cell.at("id") << ": " << cell.at("detail");
    EXPECT_FALSE(r.report.contains("timing"));
    EXPECT_EQ(r.report.at("seed"), nullptr);
}

TEST(Matrix, WrongExpectationIsAViolationWithWitness)
{
    auto r = run_matrix(single({{"id", "x"}, {"kind", "arrow"}, {"category", lo(5)}, {"A", "lo2"}, {"B", "lo3"},
        {"C", "lo5"}, {"expect", "holds"}}));
    EXPECT_EQ(r.status, ReportStatus::violation);
    EXPECT_EQ(exit_code(r.status), 1);
    const auto& cell = r.report.at("cells").at(0);
    EXPECT_NE(cell.at("detail").get<std::string>().find("witness"), std::string::npos);
    EXPECT_TRUE(cell.at("result").at("verdict").contains("witness"));
}

TEST(Matrix, BadCellsAreInconclusive)
{
    auto unknown = run_matrix(single({{"id", "x"}, {"kind", "teleport"}}));
    EXPECT_EQ(unknown.status, ReportStatus::inconclusive);
    EXPECT_EQ(exit_code(unknown.status), 2);
    auto missing = run_matrix(single({{"id", "y"}, {"kind", "arrow"}, {"category", lo(3)}, {"A", "lo9"}}));
    EXPECT_EQ(missing.status, ReportStatus::inconclusive);
    EXPECT_NE(missing.report.at("cells").at(0).at("detail").get<std::string>().find("error"), std::string::npos);
}

TEST(Matrix, BudgetExhaustionIsInconclusive)
{
    MatrixOptions opts;
    opts.node_budget = 4;
    auto r = run_matrix(
        single({{"id", "x"}, {"kind", "arrow"}, {"category", lo(6)}, {"A", "lo2"}, {"B", "lo3"}, {"C", "lo6"}}), opts);
    EXPECT_EQ(r.status, ReportStatus::inconclusive);
}

TEST(Matrix, ReportIsIndependentOfThreads)
{
    auto config = default_matrix_config();
    auto one = run_matrix(config).dump();
    MatrixOptions opts;
    opts.threads = 3;
    EXPECT_EQ(run_matrix(config, opts).dump(), one);
}

TEST(Matrix, SeedAndDigestAreEchoed)
{
    MatrixOptions opts;
    opts.seed = 42;
    auto config = Json{{"cells", Json::array()}};
    auto r = run_matrix(config, opts);
    EXPECT_EQ(r.report.at("seed"), 42);
    EXPECT_EQ(r.report.at("inputs_digest"), sha256_hex(config.dump()));
}
