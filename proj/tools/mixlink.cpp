#include <iostream>

#include <CLI11.hpp>

#include "mixlink/cli.hpp"

int main(int argc, char** argv) {
  using namespace mixlink::cli;
  CLI::App app{"Mixture Link regression: simulate, fit, diagnose, predict"};
  app.require_subcommand(1);

  Options options;
  std::uint64_t seed = 0;
  std::size_t chains = 1;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", options.config, "flat key = value config file");
    sub->add_option("--data", options.data, "dataset CSV (predict: covariate CSV)");
    sub->add_option("--draws", options.draws, "posterior draws CSV");
    sub->add_option("--out", options.out, "output directory");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--chains", chains, "number of chains (fit)")->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "simulate a dataset from true parameters");
  auto* fit = app.add_subcommand("fit", "pilot-tune and run the sampler");
  auto* diagnose = app.add_subcommand("diagnose", "quantile residuals, DIC, KS report");
  auto* predict = app.add_subcommand("predict", "posterior predictive summaries");
  auto* summary = app.add_subcommand("summary", "posterior summary table of a draws file");
  for (auto* sub : {simulate, fit, diagnose, predict, summary}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  for (auto* sub : {simulate, fit, diagnose, predict, summary}) {
    if (sub->count("--seed")) options.seed = seed;
    if (sub->count("--chains")) options.chains = chains;
  }

  if (simulate->parsed()) return cmd_simulate(options);
  if (fit->parsed()) return cmd_fit(options);
  if (diagnose->parsed()) return cmd_diagnose(options);
  if (predict->parsed()) return cmd_predict(options);
  return cmd_summary(options);
}
