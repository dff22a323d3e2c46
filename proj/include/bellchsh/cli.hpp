#ifndef BELLCHSH_CLI_HPP
#define BELLCHSH_CLI_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellchsh/correlators.hpp"
#include "bellchsh/errors.hpp"
#include "bellchsh/lhv.hpp"
#include "bellchsh/observables.hpp"
#include "bellchsh/optimizer.hpp"
#include "bellchsh/scenarios.hpp"
#include "bellchsh/states.hpp"

namespace bellchsh::cli {

/// Bad flag value; maps to exit code 2.
class UsageError : public DomainError {
 public:
  using DomainError::DomainError;
};

using ParamValue = std::variant<double, std::string>;
/// Counts stay integral in every output format.
using DetailValue = std::variant<double, long long>;

/// One rendered result row.
struct Report {
  std::string scenario;
  std::vector<std::pair<std::string, ParamValue>> params;
  AngleSet settings;
  double value = 0.0;
  Bounds bounds = kChshBounds;
  bool violated = false;
  std::vector<std::pair<std::string, DetailValue>> details;
};

enum class Format { text, json, csv };

/// Rounds to `precision` decimals; negative zero becomes zero.
inline double round_to(double x, int precision) {
  const double scale = std::pow(10.0, precision);
  double r = std::round(x * scale) / scale;
  if (r == 0.0) r = 0.0;
  return r;
}

/// Parses one angle: a number, optionally times pi and over a denominator,
/// e.g. "0.3", "pi", "-pi/4", "3pi/4", "0.5*pi".
inline double parse_angle(const std::string& text, const std::string& flag) {
  auto fail = [&]() -> double {
    throw UsageError(flag + ": cannot read '" + text + "' as an angle (e.g. 0.7, pi/2, -3pi/4)");
  };
  std::string s;
  for (const char c : text) {
    if (c != ' ' && c != '*') s += c;
  }
  if (s.empty()) return fail();
  double sign = 1.0;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    sign = s[i] == '-' ? -1.0 : 1.0;
    ++i;
  }
  const std::size_t pi_at = s.find("pi", i);
  const std::size_t slash = s.find('/', i);
  double coeff = 1.0;
  const std::size_t num_end = pi_at != std::string::npos ? pi_at : (slash != std::string::npos ? slash : s.size());
  if (num_end > i) {
    std::size_t used = 0;
    try {
      coeff = std::stod(s.substr(i, num_end - i), &used);
    } catch (const std::exception&) {
      return fail();
    }
    if (used != num_end - i) return fail();
  } else if (pi_at == std::string::npos) {
    return fail();
  }
  double value = sign * coeff;
  std::size_t rest = num_end;
  if (pi_at != std::string::npos) {
    if (pi_at != num_end) return fail();
    value *= std::numbers::pi;
    rest = pi_at + 2;
  }
  if (rest < s.size()) {
    if (s[rest] != '/') return fail();
    std::size_t used = 0;
    double den = 0.0;
    try {
      den = std::stod(s.substr(rest + 1), &used);
    } catch (const std::exception&) {
      return fail();
    }
    if (used != s.size() - rest - 1 || den == 0.0) return fail();
    value /= den;
  }
  if (!std::isfinite(value)) return fail();
  return value;
}

inline std::vector<double> parse_angle_list(const std::string& text, const std::string& flag,
                                            std::size_t expected) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_angle(item, flag));
  if (out.size() != expected) {
    throw UsageError(flag + ": expected " + std::to_string(expected) + " comma-separated angles, got " +
                     std::to_string(out.size()));
  }
  return out;
}

inline std::vector<long long> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw UsageError(flag + ": cannot read '" + item + "' as an integer");
    }
    if (used != item.size()) throw UsageError(flag + ": cannot read '" + item + "' as an integer");
    if (v < 3) throw UsageError(flag + ": N must be >= 3, got " + std::to_string(v));
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

inline nlohmann::ordered_json to_json(const Report& r, int precision) {
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) {
    if (const auto* d = std::get_if<double>(&v)) {
      params[k] = round_to(*d, precision);
    } else {
      params[k] = std::get<std::string>(v);
    }
  }
  j["params"] = params;
  nlohmann::ordered_json settings = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < r.settings.size(); ++i) settings[r.settings.names[i]] = round_to(r.settings.values[i], precision);
  j["settings"] = settings;
  j["value"] = round_to(r.value, precision);
  j["classical_bound"] = round_to(r.bounds.classical, precision);
  j["quantum_bound"] = round_to(r.bounds.quantum, precision);
  j["violated"] = r.violated;
  if (!r.details.empty()) {
    nlohmann::ordered_json d = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.details) {
      if (const auto* n = std::get_if<long long>(&v)) {
        d[k] = *n;
      } else {
        d[k] = round_to(std::get<double>(v), precision);
      }
    }
    j["details"] = d;
  }
  return j;
}

inline std::string fixed(double x, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << round_to(x, precision);
  return os.str();
}

inline std::string param_text(const ParamValue& v, int precision) {
  if (const auto* d = std::get_if<double>(&v)) {
    if (*d == std::round(*d) && std::fabs(*d) < 1e15) return std::to_string(static_cast<long long>(*d));
    return fixed(*d, precision);
  }
  return std::get<std::string>(v);
}

inline std::string detail_text(const DetailValue& v, int precision) {
  if (const auto* n = std::get_if<long long>(&v)) return std::to_string(*n);
  return fixed(std::get<double>(v), precision);
}

inline std::string render(const std::vector<Report>& reports, Format f, int precision) {
  std::ostringstream os;
  switch (f) {
    case Format::json: {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& r : reports) arr.push_back(to_json(r, precision));
      os << arr.dump(2) << "\n";
      break;
    }
    case Format::csv: {
      os << "scenario,params,settings,value,classical_bound,quantum_bound,violated,details\n";
      for (const auto& r : reports) {
        std::string p, s, d;
        for (const auto& [k, v] : r.params) p += (p.empty() ? "" : ";") + k + "=" + param_text(v, precision);
        for (std::size_t i = 0; i < r.settings.size(); ++i) {
          s += (s.empty() ? "" : ";") + r.settings.names[i] + "=" + fixed(r.settings.values[i], precision);
        }
        for (const auto& [k, v] : r.details) d += (d.empty() ? "" : ";") + k + "=" + detail_text(v, precision);
        os << r.scenario << ',' << p << ',' << s << ',' << fixed(r.value, precision) << ','
           << fixed(r.bounds.classical, precision) << ',' << fixed(r.bounds.quantum, precision) << ','
           << (r.violated ? "true" : "false") << ',' << d << "\n";
      }
      break;
    }
    case Format::text: {
      bool first = true;
      for (const auto& r : reports) {
        if (!first) os << "\n";
        first = false;
        os << "scenario: " << r.scenario << "\n";
        if (!r.params.empty()) {
          os << "params:";
          for (const auto& [k, v] : r.params) os << ' ' << k << '=' << param_text(v, precision);
          os << "\n";
        }
        if (r.settings.size() != 0) {
          os << "settings:";
          for (std::size_t i = 0; i < r.settings.size(); ++i) {
            os << ' ' << r.settings.names[i] << '=' << fixed(r.settings.values[i], precision);
          }
          os << "\n";
        }
        os << "value: " << fixed(r.value, precision) << "\n";
        os << "classical_bound: " << fixed(r.bounds.classical, precision) << "\n";
        os << "quantum_bound: " << fixed(r.bounds.quantum, precision) << "\n";
        os << "violated: " << (r.violated ? "true" : "false") << "\n";
        for (const auto& [k, v] : r.details) os << k << ": " << detail_text(v, precision) << "\n";
      }
      break;
    }
  }
  return os.str();
}

inline Report make_row(std::string scenario, std::vector<std::pair<std::string, ParamValue>> params,
                       AngleSet settings, double value, Bounds bounds) {
  Report r;
  r.scenario = std::move(scenario);
  r.params = std::move(params);
  r.settings = std::move(settings);
  r.value = value;
  r.bounds = bounds;
  r.violated = std::fabs(value) > bounds.classical;
  return r;
}

inline Report optimized_row(const Scenario& s, std::size_t restarts, std::uint64_t seed, unsigned workers,
                            std::vector<std::pair<std::string, ParamValue>> params) {
  OptimizerOptions opt;
  opt.workers = workers;
  const auto res = maximize_violation(s, restarts, seed, opt);
  params.emplace_back("restarts", static_cast<double>(restarts));
  Report r = make_row(s.name, std::move(params), s.settings(res.best_settings), res.signed_value, s.bounds);
  r.details.emplace_back("evaluations", static_cast<long long>(res.evaluations));
  r.details.emplace_back("converged", res.converged ? 1LL : 0LL);
  return r;
}

/// CHSH value of a two-mode state with pseudospin flip observables, via matrices.
inline double fock_chsh_matrix(const StateVector& psi, FockCutoff cutoff, const ChshPhases& a) {
  const auto scheme = PairingScheme::fock(cutoff);
  const std::array<DenseOperator, 2> alice{phase_flip_observable(PhaseSetting(a.alpha), scheme),
                                           phase_flip_observable(PhaseSetting(a.alpha_p), scheme)};
  const std::array<DenseOperator, 2> bob{phase_flip_observable(PhaseSetting(a.beta), scheme),
                                         phase_flip_observable(PhaseSetting(a.beta_p), scheme)};
  return chsh_combination([&](int i, int k) { return expectation(alice[i], bob[k], psi).real(); });
}

/// Runs one invocation. `args` excludes the program name. Exit codes: 0 success,
/// 2 usage or domain error, 1 numeric guard failure.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bell-CHSH and Mermin correlators: closed forms, matrix oracles, optimizer, LHV simulation",
               "bellchsh"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format_name = "text";
  int precision = 5;
  std::uint64_t seed = 0;
  std::string out_path;
  unsigned workers = 0;
  app.add_option("--format", format_name, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--precision", precision, "Decimal places")->check(CLI::Range(0, 15))->capture_default_str();
  app.add_option("--seed", seed, "Seed for sampling and the optimizer")->capture_default_str();
  app.add_option("--out", out_path, "Write the report to PATH (.json, .csv, otherwise text)");
  app.add_option("--workers", workers, "Worker threads (0: all cores)")->capture_default_str();

  bool optimize = false;
  std::size_t restarts = kDefaultRestarts;
  auto add_optimize = [&](CLI::App* sub) {
    sub->add_flag("--optimize", optimize, "Maximize over the observable settings");
    sub->add_option("--restarts", restarts, "Nelder-Mead restarts")->check(CLI::Range(1, 1000))->capture_default_str();
  };

  // chsh
  auto* chsh = app.add_subcommand("chsh", "Two-qubit Bell state with flip or polar observables");
  int bell = 0;
  bool polar = false;
  std::string chsh_angles;
  chsh->add_option("--bell", bell, "Bell state index")->check(CLI::Range(0, 3))->capture_default_str();
  chsh->add_flag("--polar", polar, "Use polar observables (8 angles)");
  chsh->add_option("--angles", chsh_angles, "alpha,alpha',beta,beta' or, with --polar, theta,alpha,...");
  add_optimize(chsh);

  // gisin
  auto* gisin = app.add_subcommand("gisin", "Maximal CHSH value of the N-family");
  std::string n_list = "3,4,10,100,1000,10000,100000";
  gisin->add_option("--n-list", n_list, "Comma-separated N >= 3")->capture_default_str();
  gisin->add_option("--restarts", restarts, "Nelder-Mead restarts")->check(CLI::Range(1, 1000))->capture_default_str();

  // spin
  auto* spin = app.add_subcommand("spin", "Spin-j singlet with pairing observables");
  std::string j_text = "1";
  std::string spin_angles;
  spin->add_option("--j", j_text, "Spin j (1/2, 1, 3/2, ...)")->capture_default_str();
  spin->add_option("--angles", spin_angles, "alpha,alpha',beta,beta' applied to every pair");
  add_optimize(spin);

  // coherent
  auto* coherent = app.add_subcommand("coherent", "Entangled coherent states with pseudospin observables");
  double eta = 1.0, sigma = 1.0;
  std::string phi_text = "pi";
  std::string family = "entangled";
  std::string coh_angles;
  bool oracle = false;
  std::size_t cutoff_levels = FockCutoff::kDefault;
  coherent->add_option("--eta", eta, "Amplitude of the first mode")->capture_default_str();
  coherent->add_option("--sigma", sigma, "Amplitude of the second mode")->capture_default_str();
  coherent->add_option("--phi", phi_text, "Relative phase")->capture_default_str();
  coherent->add_option("--family", family, "State family")
      ->check(CLI::IsMember({"entangled", "symmetric", "cat-plus", "cat-minus"}))
      ->capture_default_str();
  coherent->add_option("--angles", coh_angles, "alpha,alpha',beta,beta'");
  coherent->add_flag("--oracle", oracle, "Also evaluate the truncated-matrix oracle");
  coherent->add_option("--cutoff", cutoff_levels, "Fock levels per mode (even)")->capture_default_str();
  add_optimize(coherent);

  // squeezed
  auto* squeezed = app.add_subcommand("squeezed", "Two-mode squeezed state");
  double lambda = 0.5;
  std::string sq_angles;
  squeezed->add_option("--lambda", lambda, "Squeezing parameter in (0, 1)")->required();
  squeezed->add_option("--angles", sq_angles, "alpha,alpha',beta,beta'");
  add_optimize(squeezed);

  // mermin
  auto* mermin = app.add_subcommand("mermin", "Mermin operators on GHZ states");
  int parties = 3;
  std::string m_angles;
  mermin->add_option("--parties", parties, "3 or 4")->check(CLI::IsMember({3, 4}))->capture_default_str();
  mermin->add_option("--angles", m_angles, "Unprimed and primed phase per party");
  add_optimize(mermin);

  // lhv
  auto* lhv = app.add_subcommand("lhv", "Monte-Carlo local hidden-variable CHSH");
  std::string model_name = "sign";
  std::size_t samples = kDefaultLhvSamples;
  std::string lhv_angles;
  lhv->add_option("--model", model_name, "Hidden-variable model")->capture_default_str();
  lhv->add_option("--samples", samples, "Number of draws")->check(CLI::PositiveNumber)->capture_default_str();
  lhv->add_option("--angles", lhv_angles, "a,a',b,b' directions in the x-y plane");

  // optimize
  auto* opt_cmd = app.add_subcommand("optimize", "Maximize |correlator| for a named scenario");
  std::string scenario_name;
  ScenarioParams sp;
  std::string opt_j = "2";
  std::string opt_phi = "pi";
  opt_cmd->add_option("--scenario", scenario_name, "Scenario name")->required();
  opt_cmd->add_option("--n", sp.n, "N for gisin")->capture_default_str();
  opt_cmd->add_option("--j", opt_j, "j for spin")->capture_default_str();
  opt_cmd->add_option("--lambda", sp.lambda, "lambda for squeezed")->capture_default_str();
  opt_cmd->add_option("--eta", sp.eta, "eta for coherent")->capture_default_str();
  opt_cmd->add_option("--sigma", sp.sigma, "sigma for coherent")->capture_default_str();
  opt_cmd->add_option("--phi", opt_phi, "phi for coherent")->capture_default_str();
  opt_cmd->add_option("--r", sp.r, "r for r-state")->capture_default_str();
  opt_cmd->add_option("--restarts", restarts, "Nelder-Mead restarts")->check(CLI::Range(1, 1000))->capture_default_str();

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("bellchsh");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Format format = format_name == "json" ? Format::json : format_name == "csv" ? Format::csv : Format::text;

  try {
    std::vector<Report> reports;
    if (*chsh) {
      const std::vector<std::pair<std::string, ParamValue>> params{{"bell", static_cast<double>(bell)},
                                                                  {"observables", polar ? "polar" : "phase"}};
      if (optimize) {
        if (bell != 0) throw UsageError("--optimize: available for --bell 0 only");
        reports.push_back(optimized_row(polar ? phi0_polar_scenario() : phi0_phase_scenario(), restarts, seed,
                                        workers, params));
      } else if (polar) {
        const ChshPolar p = chsh_angles.empty() ? ChshPolar::from_phases(kStandardChshPhases)
                                                : detail::polar_from(parse_angle_list(chsh_angles, "--angles", 8));
        const double v = bell == 0 ? chsh_phi0_polar(p)
                                   : detail::chsh_matrix_polar(bell_state(BellIndex(bell)),
                                                               std::vector<double>{p.theta, p.alpha, p.theta_p, p.alpha_p,
                                                                                   p.omega, p.beta, p.omega_p, p.beta_p});
        reports.push_back(make_row("chsh", params, p.as_angle_set(), v, kChshBounds));
      } else {
        const ChshPhases a = chsh_angles.empty() ? kStandardChshPhases
                                                 : detail::phases_from(parse_angle_list(chsh_angles, "--angles", 4));
        double v = 0.0;
        if (bell == 0) {
          v = chsh_phi0_phase(a);
        } else {
          const auto q = PairingScheme::qubit();
          const auto op = chsh_operator(phase_flip_observable(PhaseSetting(a.alpha), q),
                                        phase_flip_observable(PhaseSetting(a.alpha_p), q),
                                        phase_flip_observable(PhaseSetting(a.beta), q),
                                        phase_flip_observable(PhaseSetting(a.beta_p), q));
          v = expectation(op, bell_state(BellIndex(bell))).real();
        }
        reports.push_back(make_row("chsh", params, a.as_angle_set(), v, kChshBounds));
      }
    } else if (*gisin) {
      const auto ns = parse_int_list(n_list, "--n-list");
      OptimizerOptions opt;
      opt.workers = workers;
      for (const auto& row : table_gisin(ns, restarts, seed, opt)) {
        Report r = make_row("gisin", {{"N", static_cast<double>(row.n)}},
                            gisin_scenario(row.n).settings(row.result.best_settings), row.max_value, kChshBounds);
        r.details.emplace_back("evaluations", static_cast<long long>(row.result.evaluations));
        reports.push_back(std::move(r));
      }
    } else if (*spin) {
      SpinJ j{1};
      try {
        j = SpinJ::parse(j_text);
      } catch (const DomainError& e) {
        throw UsageError(std::string("--j: ") + e.what());
      }
      if (j.dim() > 41) throw UsageError("--j: supported range is 1/2 .. 20, got " + j.str());
      const std::vector<std::pair<std::string, ParamValue>> params{{"j", j.str()}};
      if (optimize) {
        reports.push_back(optimized_row(spin_scenario(j), restarts, seed, workers, params));
      } else {
        const ChshPhases base{0.0, std::numbers::pi / 2, std::numbers::pi / 4, -std::numbers::pi / 4};
        const ChshPhases a = spin_angles.empty() ? base : detail::phases_from(parse_angle_list(spin_angles, "--angles", 4));
        const auto pa = SpinPairAngles::uniform(j, a);
        reports.push_back(make_row("spin", params, pa.as_angle_set(), chsh_spin_j(j, pa), kChshBounds));
      }
    } else if (*coherent) {
      const double phi = parse_angle(phi_text, "--phi");
      if (!std::isfinite(eta) || !std::isfinite(sigma)) throw UsageError("--eta/--sigma: must be finite");
      std::optional<FockCutoff> cutoff;
      try {
        cutoff.emplace(cutoff_levels);
      } catch (const DomainError& e) {
        throw UsageError(std::string("--cutoff: ") + e.what());
      }
      std::vector<std::pair<std::string, ParamValue>> params{
          {"family", family}, {"eta", eta}, {"sigma", sigma}, {"phi", phi}};
      if (optimize) {
        if (family != "entangled") throw UsageError("--optimize: available for --family entangled only");
        reports.push_back(optimized_row(coherent_scenario(eta, sigma, phi), restarts, seed, workers, params));
      } else {
        // Optimal pattern depends on the sign of cos(phi).
        const ChshPhases def = std::cos(phi) < 0.0
                                   ? ChshPhases{0.0, std::numbers::pi / 2, std::numbers::pi / 4, -std::numbers::pi / 4}
                                   : kStandardChshPhases;
        const ChshPhases a = coh_angles.empty() ? def : detail::phases_from(parse_angle_list(coh_angles, "--angles", 4));
        Report r;
        if (family == "entangled") {
          r = make_row("coherent", params, a.as_angle_set(), chsh_coherent(eta, sigma, phi, a), kChshBounds);
          if (oracle) {
            const auto psi = entangled_coherent(eta, sigma, phi, *cutoff);
            r.details.emplace_back("oracle", fock_chsh_matrix(psi, *cutoff, a));
            r.details.emplace_back("cutoff", static_cast<long long>(cutoff->levels()));
          }
        } else {
          StateVector psi = family == "symmetric"
                                ? symmetric_coherent(eta, sigma, phi, *cutoff)
                                : cat_state_pair(eta, sigma, phi, family == "cat-plus" ? 1 : -1, *cutoff);
          r = make_row("coherent", params, a.as_angle_set(), fock_chsh_matrix(psi, *cutoff, a), kChshBounds);
          r.details.emplace_back("cutoff", static_cast<long long>(cutoff->levels()));
        }
        reports.push_back(std::move(r));
      }
    } else if (*squeezed) {
      if (!(lambda > 0.0 && lambda < 1.0)) {
        throw UsageError("--lambda: must lie in (0, 1), got " + std::to_string(lambda));
      }
      const std::vector<std::pair<std::string, ParamValue>> params{{"lambda", lambda}};
      if (optimize) {
        reports.push_back(optimized_row(squeezed_scenario(lambda), restarts, seed, workers, params));
      } else {
        const ChshPhases a = sq_angles.empty() ? kStandardChshPhases
                                               : detail::phases_from(parse_angle_list(sq_angles, "--angles", 4));
        reports.push_back(make_row("squeezed", params, a.as_angle_set(), chsh_squeezed(lambda, a), kChshBounds));
      }
    } else if (*mermin) {
      const std::vector<std::pair<std::string, ParamValue>> params{{"parties", static_cast<double>(parties)}};
      if (optimize) {
        reports.push_back(
            optimized_row(parties == 3 ? mermin3_scenario() : mermin4_scenario(), restarts, seed, workers, params));
      } else if (parties == 3) {
        MerminPhases3 p = kStandardMermin3Phases;
        if (!m_angles.empty()) {
          const auto v = parse_angle_list(m_angles, "--angles", 6);
          p = {v[0], v[1], v[2], v[3], v[4], v[5]};
        }
        reports.push_back(make_row("mermin3", params, p.as_angle_set(), mermin3_ghz(p), kMermin3Bounds));
      } else {
        MerminPhases4 p = kStandardMermin4Phases;
        if (!m_angles.empty()) {
          const auto v = parse_angle_list(m_angles, "--angles", 8);
          std::copy(v.begin(), v.end(), p.begin());
        }
        reports.push_back(make_row("mermin4", params, mermin4_angle_set(p), mermin4_ghz(p), kMermin4Bounds));
      }
    } else if (*lhv) {
      const ModelRegistry registry;
      const LhvModel* model = nullptr;
      try {
        model = &registry.get(model_name);
      } catch (const DomainError& e) {
        throw UsageError(std::string("--model: ") + e.what());
      }
      std::array<UnitVector, 4> dirs = default_lhv_settings();
      std::array<double, 4> phis{0.0, std::numbers::pi / 2, std::numbers::pi / 4, -std::numbers::pi / 4};
      if (!lhv_angles.empty()) {
        const auto v = parse_angle_list(lhv_angles, "--angles", 4);
        std::copy(v.begin(), v.end(), phis.begin());
        dirs = {UnitVector::planar(v[0]), UnitVector::planar(v[1]), UnitVector::planar(v[2]),
                UnitVector::planar(v[3])};
      }
      const auto est = chsh_lhv(*model, dirs, samples, seed, workers);
      AngleSet s;
      s.add("a", phis[0]);
      s.add("a'", phis[1]);
      s.add("b", phis[2]);
      s.add("b'", phis[3]);
      Report r = make_row("lhv", {{"model", model_name}, {"samples", static_cast<double>(samples)},
                                  {"seed", static_cast<double>(seed)}},
                          s, est.chsh.mean, kChshBounds);
      r.details.emplace_back("std_error", est.chsh.std_error);
      r.details.emplace_back("samples_with_square_four", static_cast<long long>(est.samples_with_square_four));
      r.details.emplace_back("quantum_singlet", quantum_singlet_chsh(dirs));
      reports.push_back(std::move(r));
    } else if (*opt_cmd) {
      std::vector<std::pair<std::string, ParamValue>> params;
      try {
        sp.j = SpinJ::parse(opt_j);
      } catch (const DomainError& e) {
        throw UsageError(std::string("--j: ") + e.what());
      }
      sp.phi = parse_angle(opt_phi, "--phi");
      Scenario s = make_scenario(scenario_name, sp);
      for (const auto& [k, v] : s.state_parameters) params.emplace_back(k, v);
      reports.push_back(optimized_row(s, restarts, seed, workers, std::move(params)));
    }

    Format out_format = format;
    if (!out_path.empty()) {
      const auto ends_with = [&](const std::string& ext) {
        return out_path.size() >= ext.size() && out_path.compare(out_path.size() - ext.size(), ext.size(), ext) == 0;
      };
      out_format = ends_with(".json") ? Format::json : ends_with(".csv") ? Format::csv : Format::text;
      std::ofstream file(out_path);
      if (!file) throw UsageError("--out: cannot open '" + out_path + "' for writing");
      file << render(reports, out_format, precision);
      if (!file) throw NumericGuardError("--out: write to '" + out_path + "' failed");
    } else {
      out << render(reports, out_format, precision);
    }
    return 0;
  } catch (const NumericGuardError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace bellchsh::cli

#endif  // BELLCHSH_CLI_HPP
