#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "mixlink/cli.hpp"

namespace mixlink::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

struct Field {
  std::string where;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ConfigError, where + ": " + what);
  }

  double number(const std::string& v) const {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) fail("'" + v + "' is not a number");
    return out;
  }

  std::uint64_t integer(const std::string& v) const {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) fail("'" + v + "' is not a nonnegative integer");
    return out;
  }

  std::vector<double> list(const std::string& v) const {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(number(trim(item)));
    return out;
  }

  bool flag(const std::string& v) const {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail("'" + v + "' is not a boolean");
  }
};

using Setter = std::function<void(RunConfig&, const Field&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"family", [](RunConfig& c, const Field& f, const std::string& v) {
         try {
           c.family = parse_family(v);
         } catch (const Error&) {
           f.fail("unknown family '" + v + "'");
         }
       }},
      {"J", [](RunConfig& c, const Field& f, const std::string& v) { c.J = f.integer(v); }},
      {"link", [](RunConfig& c, const Field& f, const std::string& v) {
         const char* expected = c.family == Family::Binomial ? "logit"
                                : c.family == Family::Poisson ? "log"
                                                              : "identity";
         if (v != expected) f.fail("only the canonical link '" + std::string(expected) + "' is supported");
       }},
      {"seed", [](RunConfig& c, const Field& f, const std::string& v) { c.seed = f.integer(v); }},
      {"beta", [](RunConfig& c, const Field& f, const std::string& v) { c.beta = f.list(v); }},
      {"pi", [](RunConfig& c, const Field& f, const std::string& v) { c.pi = f.list(v); }},
      {"kappa", [](RunConfig& c, const Field& f, const std::string& v) { c.kappa = f.number(v); }},
      {"sigma2", [](RunConfig& c, const Field& f, const std::string& v) { c.sigma2 = f.number(v); }},
      {"n", [](RunConfig& c, const Field& f, const std::string& v) { c.n = f.integer(v); }},
      {"trials", [](RunConfig& c, const Field& f, const std::string& v) { c.trials = f.number(v); }},
      {"intercept", [](RunConfig& c, const Field& f, const std::string& v) { c.intercept = f.flag(v); }},
      {"x_scale", [](RunConfig& c, const Field& f, const std::string& v) { c.x_scale = f.number(v); }},
      {"design", [](RunConfig& c, const Field&, const std::string& v) { c.design = v; }},
      {"v_beta", [](RunConfig& c, const Field& f, const std::string& v) { c.v_beta = f.number(v); }},
      {"gamma", [](RunConfig& c, const Field& f, const std::string& v) { c.gamma = f.list(v); }},
      {"a_kappa", [](RunConfig& c, const Field& f, const std::string& v) { c.a_kappa = f.number(v); }},
      {"b_kappa", [](RunConfig& c, const Field& f, const std::string& v) { c.b_kappa = f.number(v); }},
      {"a_sigma2", [](RunConfig& c, const Field& f, const std::string& v) { c.a_sigma2 = f.number(v); }},
      {"b_sigma2", [](RunConfig& c, const Field& f, const std::string& v) { c.b_sigma2 = f.number(v); }},
      {"iterations", [](RunConfig& c, const Field& f, const std::string& v) { c.iterations = f.integer(v); }},
      {"burn_in", [](RunConfig& c, const Field& f, const std::string& v) { c.burn_in = f.integer(v); }},
      {"thin", [](RunConfig& c, const Field& f, const std::string& v) { c.thin = f.integer(v); }},
      {"proposals", [](RunConfig& c, const Field& f, const std::string& v) {
         if (v == "auto") c.auto_tune = true;
         else if (v == "default") c.auto_tune = false;
         else f.fail("proposals must be 'auto' or 'default'");
       }},
      {"pilot_iterations",
       [](RunConfig& c, const Field& f, const std::string& v) { c.pilot_iterations = f.integer(v); }},
      {"pi_mode", [](RunConfig& c, const Field& f, const std::string& v) {
         if (v == "joint") c.pi_mode = PiBlockMode::Joint;
         else if (v == "per_component") c.pi_mode = PiBlockMode::PerComponent;
         else f.fail("pi_mode must be 'joint' or 'per_component'");
       }},
      {"binomial_marginal",
       [](RunConfig& c, const Field& f, const std::string& v) { c.binomial_marginal = f.flag(v); }},
      {"chains", [](RunConfig& c, const Field& f, const std::string& v) { c.chains = f.integer(v); }},
      {"alpha", [](RunConfig& c, const Field& f, const std::string& v) { c.alpha = f.number(v); }},
      {"data", [](RunConfig& c, const Field&, const std::string& v) { c.data = v; }},
      {"draws", [](RunConfig& c, const Field&, const std::string& v) { c.draws = v; }},
      {"out", [](RunConfig& c, const Field&, const std::string& v) { c.out = v; }},
      {"newx", [](RunConfig& c, const Field&, const std::string& v) { c.newx = v; }},
  };
  return table;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + format_number(v[k]);
  return s;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  // family first so `link` can be checked regardless of key order.
  std::vector<std::pair<Field, std::pair<std::string, std::string>>> entries;
  while (std::getline(in, line)) {
    ++number;
    const Field field{origin + ":" + std::to_string(number)};
    const std::string body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) field.fail("expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!setters().count(key)) field.fail("unknown key '" + key + "'");
    if (value.empty()) field.fail("key '" + key + "' has no value");
    entries.push_back({field, {key, value}});
  }
  std::stable_partition(entries.begin(), entries.end(),
                        [](const auto& e) { return e.second.first == "family"; });
  for (const auto& [field, kv] : entries) setters().at(kv.first)(c, field, kv.second);

  const Field whole{origin};
  if (c.J == 0) whole.fail("J must be at least 1");
  if (!c.pi.empty() && c.pi.size() != c.J) whole.fail("pi must have J entries");
  if (c.gamma.size() > 1 && c.gamma.size() != c.J) whole.fail("gamma must have 1 or J entries");
  if (c.thin == 0) whole.fail("thin must be at least 1");
  if (c.burn_in >= c.iterations) whole.fail("burn_in must be below iterations");
  if (c.chains == 0) whole.fail("chains must be at least 1");
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) whole.fail("alpha must lie in [0, 1]");
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

MixLinkModel RunConfig::skeleton(std::size_t d) const {
  MixLinkModel m = MixLinkModel::make(family, J, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d)));
  m.kappa = kappa;
  m.sigma2 = sigma2;
  return m;
}

MixLinkModel RunConfig::true_model() const {
  MixLinkModel m = MixLinkModel::make(family, J, Eigen::Map<const Eigen::VectorXd>(
                                                     beta.data(), static_cast<Eigen::Index>(beta.size())));
  if (!pi.empty()) m.pi = pi;
  m.kappa = kappa;
  m.sigma2 = sigma2;
  m.validate();
  return m;
}

PriorSpec RunConfig::prior(std::size_t d) const {
  PriorSpec p = PriorSpec::defaults(d, J);
  p.V_beta *= v_beta / 1000.0;
  if (gamma.size() == 1) p.gamma.assign(J, gamma[0]);
  else if (gamma.size() == J) p.gamma = gamma;
  p.a_kappa = a_kappa;
  p.b_kappa = b_kappa;
  p.a_sigma2 = a_sigma2;
  p.b_sigma2 = b_sigma2;
  return p;
}

ChainConfig RunConfig::chain(std::uint64_t chain_seed) const {
  ChainConfig c;
  c.iterations = iterations;
  c.burn_in = burn_in;
  c.thin = thin;
  c.seed = chain_seed;
  c.pi_mode = pi_mode;
  c.binomial_marginal = binomial_marginal;
  return c;
}

std::string RunConfig::dump() const {
  std::ostringstream o;
  o << "family = " << to_string(family) << "\n"
    << "J = " << J << "\n";
  if (seed) o << "seed = " << *seed << "\n";
  if (!beta.empty()) o << "beta = " << join(beta) << "\n";
  if (!pi.empty()) o << "pi = " << join(pi) << "\n";
  o << "kappa = " << format_number(kappa) << "\n"
    << "sigma2 = " << format_number(sigma2) << "\n"
    << "n = " << n << "\n"
    << "trials = " << format_number(trials) << "\n"
    << "intercept = " << (intercept ? "true" : "false") << "\n"
    << "x_scale = " << format_number(x_scale) << "\n"
    << "v_beta = " << format_number(v_beta) << "\n";
  if (!gamma.empty()) o << "gamma = " << join(gamma) << "\n";
  o << "a_kappa = " << format_number(a_kappa) << "\n"
    << "b_kappa = " << format_number(b_kappa) << "\n"
    << "a_sigma2 = " << format_number(a_sigma2) << "\n"
    << "b_sigma2 = " << format_number(b_sigma2) << "\n"
    << "iterations = " << iterations << "\n"
    << "burn_in = " << burn_in << "\n"
    << "thin = " << thin << "\n"
    << "proposals = " << (auto_tune ? "auto" : "default") << "\n"
    << "pilot_iterations = " << pilot_iterations << "\n"
    << "pi_mode = " << (pi_mode == PiBlockMode::Joint ? "joint" : "per_component") << "\n"
    << "binomial_marginal = " << (binomial_marginal ? "true" : "false") << "\n"
    << "chains = " << chains << "\n"
    << "alpha = " << format_number(alpha) << "\n";
  return o.str();
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::SchemaMismatch:
    case ErrorCode::InvalidModel:
      return kExitConfig;
    case ErrorCode::InvalidData:
    case ErrorCode::IoError:
      return kExitData;
    default:
      return kExitNumerical;
  }
}

}  // namespace mixlink::cli
