#include "oracles.hpp"

#include <maxreg/runner.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace maxreg;

namespace {

Config parse(const std::string& text, const std::filesystem::path& base = ".") {
  std::istringstream is(text);
  return parse_config(is, base);
}

}  // namespace

TEST(Config, ShippedDefault) {
  const auto c = load_config(std::filesystem::path(MAXREG_CONFIG_DIR) / "default.ini");
  EXPECT_EQ(c.nodes, 2000);
  EXPECT_DOUBLE_EQ(c.t_min, 1e-4);
  EXPECT_DOUBLE_EQ(c.t_max, 1e3);
  ASSERT_EQ(c.zoo.size(), 2u);
  EXPECT_EQ(c.zoo[0].name, "scalar");
  EXPECT_EQ(c.zoo[1].op.dim(), 8);
  EXPECT_EQ(c.checks, all_check_ids());
  EXPECT_EQ(c.n_values, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(c.jobs, 4);
  EXPECT_EQ(c.out_dir, "out/default");
}

TEST(Config, EveryOperatorKind) {
  const auto c = parse(R"(
[operator.s]
kind = scalar
eigenvalue = (2,0.5)
[operator.l]
kind = laplacian
dimension = 5
mesh = 0.25
[operator.r]
kind = rotated
dimension = 3
angle = 0.5
[operator.n]
kind = nonnormal
dimension = 3
skew = 0.5
[operator.d]
kind = diagonalizable
eigenvalues = 1 (2,1)
basis = 1 1 0 1
[operator.x]
kind = random
dimension = 6
seed = 3
)");
  ASSERT_EQ(c.zoo.size(), 6u);
  EXPECT_EQ(c.zoo[0].op.matrix()(0, 0), Complex(2.0, 0.5));
  // 2/h^2 on the diagonal
  EXPECT_NEAR(c.zoo[1].op.matrix()(0, 0).real(), 32.0, 1e-12);
  EXPECT_EQ(c.zoo[1].op.kind(), OperatorKind::self_adjoint);
  EXPECT_EQ(c.zoo[2].op.dim(), 3);
  EXPECT_NEAR(std::abs(std::arg(c.zoo[2].op.eigenvalues()(0))), 0.5, 1e-12);
  EXPECT_EQ(c.zoo[3].op.dim(), 3);
  EXPECT_NEAR(c.zoo[4].op.matrix()(0, 1).real(), 1.0, 1e-12);
  EXPECT_EQ(c.zoo[5].op.dim(), 6);
  for (const auto& z : c.zoo) EXPECT_LT(z.op.sector_angle(), std::numbers::pi / 2) << z.name;
}

TEST(Config, SeededMembersAreReproducible) {
  const std::string text = "[operator.x]\nkind = random\ndimension = 4\n";
  std::istringstream a(text);
  std::istringstream b(text);
  std::istringstream c(text);
  EXPECT_EQ(parse_config(a, ".", 5).zoo[0].op.matrix(), parse_config(b, ".", 5).zoo[0].op.matrix());
  EXPECT_NE(parse_config(c, ".", 6).zoo[0].op.matrix(), parse(text).zoo[0].op.matrix());
  EXPECT_EQ(parse("[run]\nseed = 9\n").seed, 9u);
}

TEST(Config, MatrixFileRelativeToConfig) {
  const auto dir = std::filesystem::temp_directory_path() / "maxreg_config_test";
  std::filesystem::create_directories(dir);
  Matrix m(2, 2);
  m << 2.0, 1.0, 0.0, 3.0;
  {
    std::ofstream out(dir / "a.csv");
    write_matrix_csv(out, m);
  }
  const auto c = parse("[operator.m]\nkind = matrix\nfile = a.csv\n", dir);
  EXPECT_EQ(c.zoo[0].op.matrix(), m);
  EXPECT_THROW(parse("[operator.m]\nkind = matrix\nfile = missing.csv\n", dir), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(Config, EmptyIdentityList) {
  const auto c = parse("[operator.s]\nkind = scalar\n[checks]\nidentities =\n");
  EXPECT_TRUE(c.checks.empty());
  EXPECT_TRUE(verify_jobs(c).empty());
}

TEST(Config, Errors) {
  EXPECT_THROW(parse("[operator.l]\nkind = laplacian\ndimension = 0\n"), ConfigError);
  EXPECT_THROW(parse("[operator.l]\nkind = tensor\n"), ConfigError);
  EXPECT_THROW(parse("[grid]\nt_min = abc\n"), ConfigError);
  EXPECT_THROW(parse("[grid]\nt_min = 10\nt_max = 1\n"), ConfigError);
  EXPECT_THROW(parse("[checks]\nidentities = E2.4 E9.9\n"), ConfigError);
  EXPECT_THROW(parse("[checks]\nn_values = 0\n"), ConfigError);
  EXPECT_THROW(parse("[checks]\nsymbols = exp_N\n"), ConfigError);
  EXPECT_THROW(parse("[tolerances]\nidentity = -1\n"), ConfigError);
  EXPECT_THROW(parse("[run]\njobs = 0\n"), ConfigError);
  EXPECT_THROW(parse("[operator.d]\nkind = diagonalizable\n"), ConfigError);
  EXPECT_THROW(parse("[operator.d]\nkind = scalar\ndimension = 2\n"), ConfigError);
  EXPECT_THROW(parse("no section = here\n[unterminated\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/maxreg.ini"), IoError);
}

TEST(Runner, ResultsKeepJobOrder) {
  std::vector<Job> jobs;
  for (int i = 0; i < 12; ++i) {
    Job j;
    j.label = std::to_string(i);
    j.run = [i] {
      VerificationReport r;
      r.n_param = i;
      return std::vector<VerificationReport>{r};
    };
    jobs.push_back(j);
  }
  const auto out = run_jobs(jobs, 4);
  for (int i = 0; i < 12; ++i) EXPECT_EQ(out[i].reports.front().n_param, i);
  jobs[5].run = []() -> std::vector<VerificationReport> { throw std::runtime_error("boom"); };
  EXPECT_THROW(run_jobs(jobs, 3), std::runtime_error);
}
