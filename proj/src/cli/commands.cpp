#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "mixlink/cli.hpp"
#include "mixlink/diagnostics.hpp"

namespace mixlink::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
  RunConfig config;
  std::string out;
};

Context resolve(const Options& o) {
  Context ctx;
  if (!o.config.empty()) ctx.config = RunConfig::load(o.config);
  RunConfig& c = ctx.config;
  if (o.seed) c.seed = *o.seed;
  if (o.chains) {
    if (*o.chains == 0) throw Error(ErrorCode::ConfigError, "--chains must be at least 1");
    c.chains = *o.chains;
  }
  if (!o.data.empty()) c.data = o.data;
  if (!o.draws.empty()) c.draws = o.draws;
  ctx.out = o.out.empty() ? c.out : o.out;
  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create output directory '" + ctx.out + "'");
  return ctx;
}

std::uint64_t require_seed(const RunConfig& c, const char* command) {
  if (!c.seed) throw Error(ErrorCode::ConfigError, std::string(command) + " needs a seed (--seed or 'seed =')");
  return *c.seed;
}

const std::string& require_path(const std::string& path, const char* what) {
  if (path.empty()) throw Error(ErrorCode::ConfigError, std::string("no ") + what + " path given");
  return path;
}

std::string in_dir(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string summary_table(const PosteriorDraws& draws) {
  std::string text;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %12s %12s %12s %12s\n", "parameter", "mean", "SD", "2.5%",
                "97.5%");
  text += line;
  for (const auto& s : mcmc::summarize(draws)) {
    std::snprintf(line, sizeof line, "%-12s %12.4f %12.4f %12.4f %12.4f\n", s.name.c_str(), s.mean,
                  s.sd, s.q025, s.q975);
    text += line;
  }
  return text;
}

std::string meta_text(const RunConfig& config, const ChainConfig& chain, const PosteriorDraws& draws) {
  std::ostringstream o;
  o << config.dump() << "chain_seed = " << chain.seed << "\n"
    << "retained = " << draws.rows() << "\n";
  for (const auto& [block, rate] : draws.acceptance)
    o << "acceptance_" << block << " = " << format_number(rate) << "\n";
  return o.str();
}

int guarded(const char* command, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "mixlink " << command << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "mixlink " << command << ": " << e.what() << "\n";
    return kExitNumerical;
  }
}

Dataset load_data(const RunConfig& c) {
  return to_dataset(read_csv(require_path(c.data, "data")), c.family);
}

}  // namespace

int cmd_simulate(const Options& options) {
  return guarded("simulate", [&] {
    const Context ctx = resolve(options);
    const RunConfig& c = ctx.config;
    const std::uint64_t seed = require_seed(c, "simulate");
    if (c.beta.empty()) throw Error(ErrorCode::ConfigError, "simulate needs true 'beta'");
    const MixLinkModel model = c.true_model();
    const Eigen::Index d = static_cast<Eigen::Index>(c.beta.size());
    if (c.family == Family::Binomial && !(c.trials >= 1.0 && c.trials == std::floor(c.trials)))
      throw Error(ErrorCode::ConfigError, "trials must be a positive integer");

    Rng rng(seed);
    Dataset data;
    if (!c.design.empty()) {
      const Dataset design = to_dataset(read_csv(c.design), Family::Normal, false);
      if (design.X.cols() != d)
        throw Error(ErrorCode::SchemaMismatch, "design has " + std::to_string(design.X.cols()) +
                                                   " covariates, beta has " + std::to_string(d));
      data.X = design.X;
    } else {
      data.X.resize(static_cast<Eigen::Index>(c.n), d);
      for (Eigen::Index i = 0; i < data.X.rows(); ++i)
        for (Eigen::Index k = 0; k < d; ++k)
          data.X(i, k) = (k == 0 && c.intercept) ? 1.0 : c.x_scale * random::standard_normal(rng);
    }
    const std::size_t n = static_cast<std::size_t>(data.X.rows());
    if (c.family == Family::Binomial) data.m.assign(n, c.trials);
    for (std::size_t i = 0; i < n; ++i)
      data.y.push_back(distributions::sample(c.family == Family::Binomial ? c.trials : 1.0,
                                             data.X.row(static_cast<Eigen::Index>(i)).transpose(),
                                             model, rng));
    write_csv(in_dir(ctx.out, "data.csv"), from_dataset(data, c.family));
    write_text(in_dir(ctx.out, "data.meta"), c.dump());
  });
}

int cmd_fit(const Options& options) {
  return guarded("fit", [&] {
    const Context ctx = resolve(options);
    const RunConfig& c = ctx.config;
    const std::uint64_t seed = require_seed(c, "fit");
    const Dataset data = load_data(c);
    data.validate(c.family);
    const std::size_t d = data.dim();
    const MixLinkModel skeleton = c.skeleton(d);
    const PriorSpec prior = c.prior(d);

    struct Outcome {
      ChainConfig chain;
      PosteriorDraws draws;
      std::string warning;
      std::exception_ptr error;
    };
    std::vector<Outcome> outcomes(c.chains);
    auto run = [&](std::size_t k) {
      Outcome& o = outcomes[k];
      try {
        o.chain = c.chain(seed + k);
        if (c.auto_tune) {
          mcmc::TuningOptions tuning;
          tuning.iterations = c.pilot_iterations;
          const mcmc::TuningResult tuned = mcmc::pilot_tune(data, skeleton, prior, o.chain, tuning);
          o.chain = tuned.config;
          if (!tuned.in_band) {
            o.warning = "warning: pilot acceptance outside [0.15, 0.30]:";
            for (const auto& [block, rate] : tuned.final_acceptance)
              o.warning += " " + block + "=" + format_number(rate);
          }
        }
        o.draws = mcmc::fit(data, skeleton, prior, o.chain);
      } catch (...) {
        o.error = std::current_exception();
      }
    };
    if (c.chains == 1) {
      run(0);
    } else {
      std::vector<std::thread> threads;
      for (std::size_t k = 0; k < c.chains; ++k) threads.emplace_back(run, k);
      for (auto& t : threads) t.join();
    }

    for (std::size_t k = 0; k < c.chains; ++k) {
      Outcome& o = outcomes[k];
      if (o.error) std::rethrow_exception(o.error);
      if (!o.warning.empty()) std::cerr << "mixlink fit: chain " << k << ": " << o.warning << "\n";
      const std::string suffix = c.chains == 1 ? "" : "_chain" + std::to_string(k);
      write_draws(in_dir(ctx.out, "draws" + suffix + ".csv"), o.draws);
      write_text(in_dir(ctx.out, "draws" + suffix + ".meta"), meta_text(c, o.chain, o.draws));
      const std::string table = summary_table(o.draws);
      write_text(in_dir(ctx.out, "summary" + suffix + ".txt"), table);
      std::cout << table;
    }
  });
}

int cmd_diagnose(const Options& options) {
  return guarded("diagnose", [&] {
    const Context ctx = resolve(options);
    const RunConfig& c = ctx.config;
    const std::uint64_t seed = require_seed(c, "diagnose");
    const Dataset data = load_data(c);
    data.validate(c.family);
    const std::size_t d = data.dim();
    const MixLinkModel skeleton = c.skeleton(d);
    const PosteriorDraws draws = read_draws(require_path(c.draws, "draws"), c.family, d, c.J);
    if (draws.rows() == 0) throw Error(ErrorCode::InvalidData, "draws file has no rows");

    const diagnostics::ResidualSet res = diagnostics::quantile_residuals(data, draws, skeleton, seed);
    const diagnostics::DicResult dic = diagnostics::dic(data, draws, skeleton);
    const diagnostics::KsResult ks = diagnostics::ks_normal(res.r);

    Table table;
    table.header = {"index", "y", "fitted", "residual"};
    std::vector<double> fitted(data.size(), 0.0);
    for (std::size_t r = 0; r < draws.rows(); ++r) {
      const MixLinkModel model = draws.model_at(r, skeleton);
      for (std::size_t i = 0; i < data.size(); ++i)
        fitted[i] += data.trials(i) * model.linked_mean(data.X.row(static_cast<Eigen::Index>(i)).transpose());
    }
    for (std::size_t i = 0; i < data.size(); ++i)
      table.rows.push_back({static_cast<double>(i), data.y[i],
                            fitted[i] / static_cast<double>(draws.rows()), res.r[i]});
    write_csv(in_dir(ctx.out, "residuals.csv"), table);

    std::ostringstream report;
    report << "draws_used = " << res.draws_used << "\n"
           << "seed = " << res.seed << "\n"
           << "dic = " << format_number(dic.dic) << "\n"
           << "mean_deviance = " << format_number(dic.mean_deviance) << "\n"
           << "deviance_at_mean = " << format_number(dic.deviance_at_mean) << "\n"
           << "effective_parameters = " << format_number(dic.effective_parameters) << "\n"
           << "ks_statistic = " << format_number(ks.statistic) << "\n"
           << "ks_p_value = " << format_number(ks.p_value) << "\n"
           << "degenerate_intervals = " << res.degenerate_intervals << "\n";
    write_text(in_dir(ctx.out, "report.txt"), report.str());
    std::cout << report.str();
  });
}

int cmd_predict(const Options& options) {
  return guarded("predict", [&] {
    const Context ctx = resolve(options);
    const RunConfig& c = ctx.config;
    const std::uint64_t seed = require_seed(c, "predict");
    const std::string path = !options.data.empty() ? options.data : !c.newx.empty() ? c.newx : c.data;
    const Table raw = read_csv(require_path(path, "covariate"));
    bool has_m = false;
    for (const auto& h : raw.header) has_m = has_m || h == "m";
    const Family parse_as = c.family == Family::Binomial && !has_m ? Family::Poisson : c.family;
    Dataset x = to_dataset(raw, parse_as, false);
    if (c.family == Family::Binomial && !has_m) x.m.assign(x.size(), c.trials);
    const std::size_t d = static_cast<std::size_t>(x.X.cols());
    const MixLinkModel skeleton = c.skeleton(d);
    const PosteriorDraws draws = read_draws(require_path(c.draws, "draws"), c.family, d, c.J);

    Table table;
    table.header = {"index", "point", "lower", "upper"};
    if (x.size() > 0) {
      const auto pred = diagnostics::posterior_predictive(x.X, x.m, draws, skeleton, seed, c.alpha);
      for (std::size_t i = 0; i < x.size(); ++i)
        table.rows.push_back({static_cast<double>(i), pred.point[i], pred.lower[i], pred.upper[i]});
    }
    write_csv(in_dir(ctx.out, "predictive.csv"), table);
  });
}

int cmd_summary(const Options& options) {
  return guarded("summary", [&] {
    const Context ctx = resolve(options);
    const RunConfig& c = ctx.config;
    const std::string& path = require_path(c.draws, "draws");
    const Table raw = read_csv(path);
    // d follows from the column count: d + J + 1 (+1 for sigma2).
    const std::size_t fixed = c.J + 1 + (c.family == Family::Normal ? 1 : 0);
    if (raw.header.size() < fixed)
      throw Error(ErrorCode::SchemaMismatch, path + ": too few columns for J = " + std::to_string(c.J));
    const PosteriorDraws draws = read_draws(path, c.family, raw.header.size() - fixed, c.J);
    const std::string table = summary_table(draws);
    write_text(in_dir(ctx.out, "summary.txt"), table);
    std::cout << table;
  });
}

}  // namespace mixlink::cli
