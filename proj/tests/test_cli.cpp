#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mixlink/cli.hpp"
#include "mixlink/error.hpp"

using namespace mixlink;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mixlink_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t lines(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = cli::RunConfig::parse(
      "# comment\nfamily = poisson\nJ = 2   # trailing\n\nbeta = 1, 0.5\npi=0.3,0.7\nproposals = default\n"
      "pi_mode = per_component\nalpha = 0.1\n");
  CHECK(c.family == Family::Poisson);
  CHECK(c.J == 2);
  CHECK(c.beta == std::vector<double>{1.0, 0.5});
  CHECK(c.pi == std::vector<double>{0.3, 0.7});
  CHECK_FALSE(c.auto_tune);
  CHECK(c.pi_mode == PiBlockMode::PerComponent);
  CHECK(c.alpha == 0.1);
  CHECK_FALSE(c.seed.has_value());
  CHECK(c.iterations == 55000);
  CHECK(c.burn_in == 5000);
  CHECK(c.thin == 50);

  const auto again = cli::RunConfig::parse(c.dump());
  CHECK(again.dump() == c.dump());

  CHECK_THROWS_WITH_AS(cli::RunConfig::parse("family = poisson\n\nbogus = 1\n", "run.cfg"),
                       doctest::Contains("run.cfg:3"), Error);
  CHECK_THROWS_WITH_AS(cli::RunConfig::parse("J = two\n", "run.cfg"), doctest::Contains("run.cfg:1"), Error);
  CHECK_THROWS_WITH_AS(cli::RunConfig::parse("J = 2\nkappa = 1x\n", "a"), doctest::Contains("a:2"), Error);
  CHECK_THROWS_WITH_AS(cli::RunConfig::parse("J\n", "a"), doctest::Contains("a:1"), Error);
  CHECK_THROWS_WITH_AS(cli::RunConfig::parse("link = identity\nfamily = binomial\n", "a"),
                       doctest::Contains("a:1"), Error);
  CHECK_THROWS_WITH_AS(cli::RunConfig::parse("J = 3\npi = 0.5, 0.5\n"), doctest::Contains("ConfigError"), Error);
  CHECK_THROWS_WITH_AS(cli::RunConfig::parse("iterations = 10\nburn_in = 10\n"), doctest::Contains("burn_in"),
                       Error);
  CHECK_THROWS_WITH_AS(cli::RunConfig::load("/nonexistent/x.cfg"), doctest::Contains("ConfigError"), Error);
}

TEST_CASE("exit codes") {
  CHECK(cli::exit_code(ErrorCode::ConfigError) == 2);
  CHECK(cli::exit_code(ErrorCode::SchemaMismatch) == 2);
  CHECK(cli::exit_code(ErrorCode::InvalidData) == 3);
  CHECK(cli::exit_code(ErrorCode::IoError) == 3);
  CHECK(cli::exit_code(ErrorCode::ToleranceNotMet) == 4);
  CHECK(cli::exit_code(ErrorCode::TuningFailed) == 4);
}

TEST_CASE("numbers round-trip through text") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> e(-300.0, 300.0);
  for (int k = 0; k < 2000; ++k) {
    const double v = std::pow(10.0, e(rng)) * (k % 2 ? -1.0 : 1.0);
    const std::string s = cli::format_number(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
  CHECK(cli::format_number(3.0) == "3");
  CHECK(cli::format_number(0.1) == "0.1");
}

TEST_CASE("CSV round trip and errors") {
  const fs::path dir = scratch("csv");
  Dataset d;
  d.y = {0.0, 3.0, 7.0};
  d.m = {7.0, 9.0, 7.0};
  d.X.resize(3, 2);
  d.X << 1, 0.1234567890123, 1, -2e-17, 1, 1e300;
  cli::write_csv((dir / "d.csv").string(), cli::from_dataset(d, Family::Binomial));
  CHECK(slurp(dir / "d.csv").rfind("y,m,x1,x2\n", 0) == 0);
  const Dataset back = cli::to_dataset(cli::read_csv((dir / "d.csv").string()), Family::Binomial);
  CHECK(back.y == d.y);
  CHECK(back.m == d.m);
  CHECK(back.X == d.X);

  put(dir / "missing.csv", "y,x1\n1,0.5\n2,\n");
  CHECK_THROWS_WITH_AS(cli::read_csv((dir / "missing.csv").string()), doctest::Contains("missing.csv:3"), Error);
  put(dir / "text.csv", "y,x1\n1,abc\n");
  CHECK_THROWS_WITH_AS(cli::read_csv((dir / "text.csv").string()), doctest::Contains("x1"), Error);
  put(dir / "nom.csv", "y,x1\n1,0.5\n");
  CHECK_THROWS_WITH_AS(cli::to_dataset(cli::read_csv((dir / "nom.csv").string()), Family::Binomial),
                       doctest::Contains("SchemaMismatch"), Error);
  CHECK_THROWS_WITH_AS(cli::read_csv((dir / "absent.csv").string()), doctest::Contains("IoError"), Error);

  PosteriorDraws draws;
  draws.family = Family::Poisson;
  draws.d = 2;
  draws.J = 2;
  draws.names = parameter_names(Family::Poisson, 2, 2);
  draws.draws.resize(2, 5);
  draws.draws << 0.1, 0.2, 0.4, 0.6, 1.0,  //
      0.3, 0.4, 0.45, 0.55, 2.0;
  cli::write_draws((dir / "draws.csv").string(), draws);
  CHECK(slurp(dir / "draws.csv").rfind("beta0,beta1,pi1,pi2,kappa\n", 0) == 0);
  const auto rd = cli::read_draws((dir / "draws.csv").string(), Family::Poisson, 2, 2);
  CHECK(rd.draws == draws.draws);
  CHECK_THROWS_WITH_AS(cli::read_draws((dir / "draws.csv").string(), Family::Poisson, 1, 3),
                       doctest::Contains("column 2 is 'beta1', expected 'pi1'"), Error);
  CHECK_THROWS_WITH_AS(cli::read_draws((dir / "draws.csv").string(), Family::Normal, 2, 2),
                       doctest::Contains("SchemaMismatch"), Error);
}

TEST_CASE("simulate, fit, diagnose, predict, summary") {
  const fs::path dir = scratch("pipeline");
  put(dir / "run.cfg",
      "family = binomial\nJ = 2\nbeta = -0.4, 0.9\npi = 0.3, 0.7\nkappa = 0.8\nn = 25\ntrials = 8\n"
      "iterations = 1200\nburn_in = 200\nthin = 5\npilot_iterations = 400\nalpha = 0.1\n");
  cli::Options o;
  o.config = (dir / "run.cfg").string();
  o.out = (dir / "out").string();

  CHECK(cli::cmd_simulate(o) == cli::kExitConfig);  // no seed
  o.seed = 5;
  REQUIRE(cli::cmd_simulate(o) == 0);
  const fs::path data = dir / "out" / "data.csv";
  CHECK(lines(data) == 26);
  CHECK(slurp(dir / "out" / "data.meta").find("seed = 5") != std::string::npos);
  const Dataset ds = cli::to_dataset(cli::read_csv(data.string()), Family::Binomial);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(ds.X(static_cast<Eigen::Index>(i), 0) == 1.0);
    CHECK(ds.m[i] == 8.0);
  }

  o.data = data.string();
  REQUIRE(cli::cmd_fit(o) == 0);
  const fs::path draws = dir / "out" / "draws.csv";
  CHECK(lines(draws) == 201);
  const std::string summary = slurp(dir / "out" / "summary.txt");
  std::istringstream header(summary.substr(0, summary.find('\n')));
  std::vector<std::string> cols{std::istream_iterator<std::string>(header), {}};
  CHECK(cols == std::vector<std::string>{"parameter", "mean", "SD", "2.5%", "97.5%"});
  const auto table = cli::read_draws(draws.string(), Family::Binomial, 2, 2);
  for (Eigen::Index r = 0; r < table.draws.rows(); ++r) CHECK(table.draws(r, 2) <= table.draws(r, 3));
  const std::string meta = slurp(dir / "out" / "draws.meta");
  CHECK(meta.find("chain_seed = 5") != std::string::npos);
  CHECK(meta.find("acceptance_psi") != std::string::npos);

  o.draws = draws.string();
  REQUIRE(cli::cmd_diagnose(o) == 0);
  CHECK(lines(dir / "out" / "residuals.csv") == 26);
  const std::string report = slurp(dir / "out" / "report.txt");
  for (const char* key : {"dic = ", "ks_statistic = ", "ks_p_value = ", "draws_used = 200"})
    CHECK_MESSAGE(report.find(key) != std::string::npos, key);

  REQUIRE(cli::cmd_predict(o) == 0);
  const auto pred = cli::read_csv((dir / "out" / "predictive.csv").string());
  CHECK(pred.header == std::vector<std::string>{"index", "point", "lower", "upper"});
  CHECK(pred.rows.size() == 25);
  for (const auto& row : pred.rows) {
    CHECK(row[2] <= row[1]);
    CHECK(row[1] <= row[3]);
  }

  // alpha = 1 gives the median as both ends.
  put(dir / "one.cfg", slurp(dir / "run.cfg") + "alpha = 1\n");
  cli::Options one = o;
  one.config = (dir / "one.cfg").string();
  one.out = (dir / "one").string();
  REQUIRE(cli::cmd_predict(one) == 0);
  for (const auto& row : cli::read_csv((dir / "one" / "predictive.csv").string()).rows) CHECK(row[2] == row[3]);

  // Empty newX: header only.
  put(dir / "empty.csv", "m,x1,x2\n");
  cli::Options empty = o;
  empty.data = (dir / "empty.csv").string();
  empty.out = (dir / "empty").string();
  REQUIRE(cli::cmd_predict(empty) == 0);
  CHECK(slurp(dir / "empty" / "predictive.csv") == "index,point,lower,upper\n");

  cli::Options sum = o;
  sum.out = (dir / "sum").string();
  REQUIRE(cli::cmd_summary(sum) == 0);
  CHECK(slurp(dir / "sum" / "summary.txt") == summary);

  // Same seed, same bytes.
  cli::Options rerun = o;
  rerun.out = (dir / "rerun").string();
  rerun.draws.clear();
  REQUIRE(cli::cmd_fit(rerun) == 0);
  CHECK(slurp(dir / "rerun" / "draws.csv") == slurp(draws));
  CHECK(slurp(dir / "rerun" / "summary.txt") == summary);
}

TEST_CASE("error exit codes") {
  const fs::path dir = scratch("errors");
  cli::Options o;
  o.out = (dir / "out").string();
  o.config = (dir / "nope.cfg").string();
  CHECK(cli::cmd_fit(o) == cli::kExitConfig);

  put(dir / "bad.cfg", "family = poisson\nJ = 0\n");
  o.config = (dir / "bad.cfg").string();
  CHECK(cli::cmd_fit(o) == cli::kExitConfig);

  put(dir / "ok.cfg", "family = poisson\nJ = 1\nseed = 1\niterations = 100\nburn_in = 10\nthin = 1\n");
  o.config = (dir / "ok.cfg").string();
  o.data = (dir / "absent.csv").string();
  CHECK(cli::cmd_fit(o) == cli::kExitData);

  put(dir / "neg.csv", "y,x1\n-1,1\n");
  o.data = (dir / "neg.csv").string();
  CHECK(cli::cmd_fit(o) == cli::kExitData);

  put(dir / "wrong.csv", "y,z1\n1,2\n");
  o.data = (dir / "wrong.csv").string();
  CHECK(cli::cmd_fit(o) == cli::kExitConfig);  // schema mismatch

  o.chains = 0;
  CHECK(cli::cmd_fit(o) == cli::kExitConfig);
}

TEST_CASE("multiple chains get their own seeds and files") {
  const fs::path dir = scratch("chains");
  put(dir / "run.cfg",
      "family = poisson\nJ = 1\nbeta = 0.5, 0.3\nn = 30\nseed = 40\niterations = 300\nburn_in = 100\nthin = 2\n"
      "proposals = default\n");
  cli::Options o;
  o.config = (dir / "run.cfg").string();
  o.out = (dir / "out").string();
  REQUIRE(cli::cmd_simulate(o) == 0);
  o.data = (dir / "out" / "data.csv").string();
  o.chains = 2;
  REQUIRE(cli::cmd_fit(o) == 0);
  CHECK(slurp(dir / "out" / "draws_chain0.meta").find("chain_seed = 40") != std::string::npos);
  CHECK(slurp(dir / "out" / "draws_chain1.meta").find("chain_seed = 41") != std::string::npos);
  CHECK(slurp(dir / "out" / "draws_chain0.csv") != slurp(dir / "out" / "draws_chain1.csv"));
  CHECK(fs::exists(dir / "out" / "summary_chain1.txt"));
}
