#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mixlink/distributions.hpp"
#include "mixlink/error.hpp"
#include "mixlink/mcmc.hpp"

namespace mixlink::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumerical = 4;

int exit_code(ErrorCode code);

// Flat `key = value` configuration, `#` starts a comment.
struct RunConfig {
  Family family = Family::Binomial;
  std::size_t J = 1;
  std::optional<std::uint64_t> seed;

  // True parameters for simulate.
  std::vector<double> beta;
  std::vector<double> pi;  // empty: uniform
  double kappa = 1.0;
  double sigma2 = 1.0;
  std::size_t n = 100;
  double trials = 10.0;
  bool intercept = true;
  double x_scale = 1.0;
  std::string design;  // covariate CSV instead of generated covariates

  // Prior.
  double v_beta = 1000.0;
  std::vector<double> gamma;  // empty or a single value: broadcast
  double a_kappa = 1.0, b_kappa = 2.0;
  double a_sigma2 = 2.0, b_sigma2 = 1.0;

  // Chain.
  std::size_t iterations = 55000;
  std::size_t burn_in = 5000;
  std::size_t thin = 50;
  bool auto_tune = true;
  std::size_t pilot_iterations = 5000;
  PiBlockMode pi_mode = PiBlockMode::Joint;
  bool binomial_marginal = false;
  std::size_t chains = 1;

  double alpha = 0.05;

  std::string data, draws, out = ".", newx;

  static RunConfig parse(const std::string& text, const std::string& origin = "config");
  static RunConfig load(const std::string& path);

  MixLinkModel skeleton(std::size_t d) const;
  MixLinkModel true_model() const;
  PriorSpec prior(std::size_t d) const;
  ChainConfig chain(std::uint64_t chain_seed) const;
  // Canonical text form of every non-path key, fixed order; parse(dump()) round-trips.
  std::string dump() const;
};

// ---- CSV --------------------------------------------------------------------

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string format_number(double v);
Table read_csv(const std::string& path);
void write_csv(const std::string& path, const Table& table);

// Columns `y[,m],x1..xd`; with require_y = false the y column may be absent.
Dataset to_dataset(const Table& table, Family family, bool require_y = true);
Table from_dataset(const Dataset& data, Family family);

PosteriorDraws read_draws(const std::string& path, Family family, std::size_t d, std::size_t J);
void write_draws(const std::string& path, const PosteriorDraws& draws);

void write_text(const std::string& path, const std::string& text);

// ---- subcommands -----------------------------------------------------------

struct Options {
  std::string config;
  std::string data;
  std::string draws;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> chains;
};

// Each returns an exit code; library errors are reported on stderr.
int cmd_simulate(const Options& options);
int cmd_fit(const Options& options);
int cmd_diagnose(const Options& options);
int cmd_predict(const Options& options);
int cmd_summary(const Options& options);

}  // namespace mixlink::cli
