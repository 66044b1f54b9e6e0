#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kgnf/bounds.hpp"
#include "kgnf/cyclic.hpp"
#include "kgnf/dynamics.hpp"
#include "kgnf/io.hpp"
#include "kgnf/linearize.hpp"
#include "kgnf/normalform.hpp"

namespace fs = std::filesystem;
using namespace kgnf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitInput = 2;
constexpr int kExitDiverge = 3;

struct RunConfig {
  std::string command;
  int n = 8;
  double a = 0.05;
  int order = 2;
  double radius = 0.05;
  std::string norm = "l2";
  std::string out = ".";
  unsigned seed = 1;
  bool json = false;
  std::string config;

  double sigma_star = 0.0;
  double tol = 1e-14;
  int max_iter = 500;
  bool ring = false;
  int s_max = 0;
  double prune = 1e-15;
  double tail = 1e-14;
  int quartic_sign = 1;

  double dt = 0.002;
  double T = 1000.0;
  double sample_every = 0.25;
  std::vector<double> ladder;
  int phi_order = -1;

  int samples = 100;
  double dnls_a = 0.05;
  double dnls_E = 0.1;
  double perturb = 0.0;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--config", c.config, "JSON file of option values; flags given on the command line win");
  sub->add_option("--n", c.n, "number of chain sites")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--a", c.a, "coupling constant a >= 0")->capture_default_str();
  sub->add_option("--order", c.order, "normal-form order r")->capture_default_str();
  sub->add_option("--radius", c.radius, "radius R of the state ball")->capture_default_str();
  sub->add_option("--norm", c.norm, "state norm")->check(CLI::IsMember({"l2", "linf"}))->capture_default_str();
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_flag("--json", c.json, "print machine-readable results");
  sub->add_option("--sigma-star", c.sigma_star, "decay rate sigma* of the remainder class");
  sub->add_option("--tol", c.tol, "relative tolerance of the Neumann series")->capture_default_str();
  sub->add_option("--max-iter", c.max_iter, "Neumann iteration cap")->capture_default_str();
  sub->add_flag("--ring,!--no-ring", c.ring, "bind seeds to the ring of n sites");
  sub->add_option("--s-max", c.s_max, "largest remainder grade (-1: order + 1, 0: none)")->capture_default_str();
  sub->add_option("--prune", c.prune, "relative coefficient cut")->capture_default_str();
  sub->add_option("--tail", c.tail, "relative distance-tail cut of free seeds")->capture_default_str();
  sub->add_option("--quartic-sign", c.quartic_sign, "sign of the quartic potential")
      ->check(CLI::IsMember({-1, 1}))
      ->capture_default_str();
}

void add_dynamics(CLI::App* sub, RunConfig& c) {
  sub->add_option("--dt", c.dt, "time step")->capture_default_str();
  sub->add_option("--T", c.T, "final time")->capture_default_str();
  sub->add_option("--sample-every", c.sample_every, "sampling interval")->capture_default_str();
  sub->add_option("--ladder", c.ladder, "amplitudes R of the drift experiment")->delimiter(',');
  sub->add_option("--phi-order", c.phi_order, "highest approximate integral Phi_k (-1: order)")
      ->capture_default_str();
}

// ---------------------------------------------------------------- config file

bool given_on_line(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& s : args)
    if (s == flag || s.rfind(flag + "=", 0) == 0) return true;
  return false;
}

std::string scalar_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt(v.get<double>());
  throw InvalidInput("config key '" + key + "' has an unsupported value");
}

/// Turns config entries into arguments, skipping the ones repeated on the line.
std::vector<std::string> config_args(const std::string& path, CLI::App* sub, const std::vector<std::string>& line) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config file '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw InvalidInput("config file must hold a JSON object");
  std::vector<std::string> args;
  for (const auto& [key, v] : cfg.items()) {
    if (key == "command") continue;
    std::string name = key;
    for (char& ch : name)
      if (ch == '_') ch = '-';
    const std::string flag = "--" + name;
    if (name == "config" || sub->get_option_no_throw(flag) == nullptr)
      throw InvalidInput("unknown config key '" + key + "' for command " + sub->get_name());
    if (given_on_line(line, flag)) continue;
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back(flag);
    } else if (v.is_array()) {
      args.push_back(flag);
      for (const auto& e : v) args.push_back(scalar_text(e, key));
    } else {
      args.push_back(flag);
      args.push_back(scalar_text(v, key));
    }
  }
  return args;
}

// ---------------------------------------------------------------- shared steps

void validate(const RunConfig& c) {
  if (!(c.a >= 0.0) || !std::isfinite(c.a)) throw InvalidInput("--a must be a finite number >= 0, got " + fmt(c.a));
  if (c.order < 1) throw InvalidInput("--order must be >= 1");
  if (!(c.radius > 0.0)) throw InvalidInput("--radius must be positive");
  if (!(c.tol > 0.0)) throw InvalidInput("--tol must be positive");
  if (c.max_iter < 1) throw InvalidInput("--max-iter must be >= 1");
  for (double R : c.ladder)
    if (!(R > 0.0)) throw InvalidInput("--ladder amplitudes must be positive");
}

LinearNF linear_part(const RunConfig& c) {
  LinearOptions lo;
  lo.quartic_sign = c.quartic_sign;
  lo.tail = c.tail;
  lo.prune = c.prune;
  return linear_normalize(c.a, c.n, lo);
}

NormalFormOptions nf_options(const RunConfig& c) {
  NormalFormOptions o;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  o.ring = c.ring ? c.n : 0;
  o.s_max = c.s_max;
  o.clean.prune = c.prune;
  o.clean.tail = c.tail;
  return o;
}

std::optional<double> sigma_choice(const RunConfig& c, const CLI::App* sub) {
  if (sub->count("--sigma-star") > 0) return c.sigma_star;
  return std::nullopt;
}

fs::path out_dir(const RunConfig& c) {
  fs::path p(c.out);
  fs::create_directories(p);
  return p;
}

void write_json(const fs::path& p, const json& j) { write_file_atomic(p.string(), j.dump(2) + "\n"); }

std::string advisory_note(const ConstantsRecord& cr) {
  std::string s;
  if (cr.window_empty)
    s += "ADVISORY: sigma* window [" + fmt_short(cr.window_lo) + ", " + fmt_short(cr.window_hi) + ") is empty\n";
  if (!cr.order_admissible)
    s += "ADVISORY: order " + std::to_string(cr.r) + " exceeds r_max = " + std::to_string(cr.r_max) + "\n";
  return s;
}

json bounds_json(const ConstantsRecord& cr, const BoundReport& rep) {
  json j;
  j["constants"] = constants_to_json(cr);
  j["hypotheses_status"] = cr.hypotheses() ? "PASS" : "ADVISORY";
  j["order_status"] = cr.order_admissible ? "PASS" : "ADVISORY";
  j["decay_bounds"] = bound_report_to_json(rep);
  return j;
}

std::string bound_table(const BoundReport& rep) {
  std::ostringstream os;
  for (const auto& b : rep.checks)
    os << "  " << b.name << " s=" << b.s << "  measured " << fmt_short(b.measured) << "  bound "
       << fmt_short(b.bound) << "  " << status_name(b.status) << "\n";
  return os.str();
}

// ---------------------------------------------------------------- commands

int cmd_normalize(const RunConfig& c, const CLI::App* sub) {
  validate(c);
  const LinearNF lnf = linear_part(c);
  const NormalFormResult res = normal_form(lnf, c.order, nf_options(c));
  const ConstantsRecord cr = constants(lnf, c.order, sigma_choice(c, sub));
  const BoundReport rep = verify_decay_bounds(res, cr);

  const fs::path dir = out_dir(c);
  write_json(dir / "normalform.json", normalform_to_json(res));
  write_json(dir / "bounds-report.json", bounds_json(cr, rep));

  std::ostringstream os;
  os << "Klein-Gordon chain normal form\n"
     << "  N = " << c.n << "  a = " << fmt_short(c.a) << "  mu = " << fmt_short(lnf.mu)
     << "  Omega = " << fmt_short(lnf.omega) << "  order = " << c.order << (c.ring ? "  (ring seeds)" : "") << "\n"
     << "  sigma0 = " << fmt_short(lnf.sigma0) << "  sigma1 = " << fmt_short(lnf.sigma1) << "\n"
     << "  zeta0: " << res.zeta0.size() << " terms  h1: " << res.h1.size() << " terms\n";
  for (int s = 1; s <= res.r; ++s)
    os << "  s=" << s << "  chi " << res.chi[s].size() << " terms, norm " << fmt_short(poly_norm(res.chi[s]))
       << "  zeta " << res.zeta[s].size() << " terms, norm " << fmt_short(poly_norm(res.zeta[s])) << "  neumann "
       << res.neumann_iterations[s] << "\n";
  for (std::size_t i = 0; i < res.head.size(); ++i)
    os << "  remainder s=" << res.r + 1 + static_cast<int>(i) << "  " << res.head[i].size() << " terms\n";
  os << "constants: mu* = " << fmt_short(cr.mu_star) << "  r_max = " << cr.r_max << "  gamma = " << fmt_short(cr.gamma)
     << "  C_r = " << fmt_short(cr.C_r) << "  R* = " << fmt_short(cr.R_star) << "\n";
  os << advisory_note(cr) << bound_table(rep);
  write_file_atomic((dir / "summary.txt").string(), os.str());

  if (c.json) {
    json j;
    j["command"] = "normalize";
    j["files"] = {"normalform.json", "bounds-report.json", "summary.txt"};
    j["bounds"] = bounds_json(cr, rep);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << os.str();
  }
  return kExitOk;
}

int cmd_bounds(const RunConfig& c, const CLI::App* sub) {
  validate(c);
  const LinearNF lnf = linear_part(c);
  const NormalFormResult res = normal_form(lnf, c.order, nf_options(c));
  const ConstantsRecord cr = constants(lnf, c.order, sigma_choice(c, sub));
  const BoundReport rep = verify_decay_bounds(res, cr);
  const DeformationReport def = deformation_bound(res, c.radius, cr, c.n, c.samples, c.seed, c.norm == "linf");

  json j = bounds_json(cr, rep);
  j["deformation"] = deformation_to_json(def);
  write_json(out_dir(c) / "bounds-report.json", j);

  const bool ok = rep.all_pass() && (!def.radius_admissible || def.pass());
  if (c.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "decay bounds (order " << c.order << ", sigma* = " << fmt_short(cr.sigma_star) << ")\n"
              << advisory_note(cr) << bound_table(rep) << "deformation at R = " << fmt_short(c.radius)
              << ": sampled " << fmt_short(def.sampled_total) << "  bound " << fmt_short(def.total_bound)
              << (def.radius_admissible ? (def.pass() ? "  PASS" : "  FAIL") : "  ADVISORY (R above R*)") << "\n";
  }
  return ok ? kExitOk : kExitVerify;
}

int cmd_gdnls(const RunConfig& c, const CLI::App*) {
  validate(c);
  const LinearNF lnf = linear_part(c);
  NormalFormOptions o = nf_options(c);
  o.ring = 0;
  o.s_max = 0;
  const NormalFormResult res = normal_form(lnf, 1, o);
  const GdnlsModel g = extract_gdnls(res);
  const StandardDnls ref = standard_dnls(c.dnls_a, c.dnls_E, c.n);
  const json j = gdnls_to_json(g, ref);
  write_json(out_dir(c) / "gdnls.json", j);

  if (c.json) {
    json s = j;
    s.erase("zeta0");
    s.erase("zeta1");
    std::cout << s.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "generalized dNLS at N = " << c.n << ", a = " << fmt_short(c.a) << "\n";
  std::cout << "  coupling table b_m:" << (j["b"].empty() ? " (empty)" : "") << "\n";
  for (const auto& e : j["b"]) std::cout << "    m=" << e["m"] << "  " << fmt(e["b"].get<double>()) << "\n";
  std::cout << "  zeta1 leading coefficient " << fmt(g.zeta1_leading) << " (kernel average "
            << fmt_short(g.leading_average) << ")\n";
  std::cout << "  zeta1 symmetric decay rate " << fmt_short(g.zeta1_decay.sigma) << "\n";
  std::cout << "  standard dNLS at (a, E) = (" << fmt_short(ref.a) << ", " << fmt_short(ref.E)
            << "): linear " << fmt(ref.linear_coefficient) << "  quartic " << fmt(ref.quartic_coefficient) << "\n";
  return kExitOk;
}

void write_trajectory_csv(const fs::path& p, const Trajectory& tr) {
  std::ostringstream os;
  os << "t,H,energy_error,H_omega,Z";
  for (std::size_t k = 0; k < tr.Phi.size(); ++k) os << ",Phi_" << k;
  os << "\n";
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    os << fmt(tr.t[i]) << ',' << fmt(tr.H[i]) << ',' << fmt(tr.energy_error[i]) << ',' << fmt(tr.H_omega[i]) << ','
       << fmt(tr.Z[i]);
    for (const auto& phi : tr.Phi) os << ',' << fmt(phi[i]);
    os << "\n";
  }
  write_file_atomic(p.string(), os.str());
}

int cmd_simulate(const RunConfig& c, const CLI::App*) {
  validate(c);
  SimConfig base;
  base.n = c.n;
  base.a = c.a;
  base.R = c.radius;
  base.norm = parse_norm(c.norm);
  base.dt = c.dt;
  base.T = c.T;
  base.sample_every = c.sample_every;
  base.seed = c.seed;
  base.quartic_sign = c.quartic_sign;
  base.validate();
  const int phi_order = c.phi_order < 0 ? c.order : c.phi_order;
  if (phi_order > c.order) throw InvalidInput("--phi-order must not exceed --order");

  const LinearNF lnf = linear_part(c);
  NormalFormOptions o = nf_options(c);
  o.ring = 0;
  o.s_max = 0;
  const NormalFormResult res = normal_form(lnf, c.order, o);

  const std::vector<double> ladder = c.ladder.empty() ? std::vector<double>{c.radius} : c.ladder;
  const fs::path dir = out_dir(c);
  json files = json::array();
  int idx = 0;
  auto on_run = [&](double R, const Trajectory& tr) {
    char name[32];
    std::snprintf(name, sizeof name, "trajectory_%02d.csv", idx++);
    write_trajectory_csv(dir / name, tr);
    files.push_back({{"R", R}, {"file", name}});
  };
  const DriftReport rep = drift_experiment(base, ladder, res, phi_order, 1e-13, on_run);

  json j;
  j["n"] = c.n;
  j["a"] = c.a;
  j["order"] = c.order;
  j["norm"] = c.norm;
  j["dt"] = c.dt;
  j["T"] = c.T;
  j["seed"] = c.seed;
  j["omega"] = lnf.omega;
  j["drift"] = drift_to_json(rep);
  j["trajectories"] = files;
  write_json(dir / "scaling.json", j);

  if (c.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& p : rep.points) {
      std::cout << "R = " << fmt_short(p.R) << "  max|dH_Omega| " << fmt_short(p.max_dH_omega) << "  (Omega R^4 "
                << fmt_short(p.bound_omega) << ")  max|dZ| " << fmt_short(p.max_dZ) << "  energy drift "
                << fmt_short(p.energy_drift);
      for (std::size_t k = 0; k < p.max_dPhi.size(); ++k) std::cout << "  Phi_" << k << " " << fmt_short(p.max_dPhi[k]);
      std::cout << "\n";
    }
    if (rep.points.size() >= 2)
      std::cout << "log-log slope " << fmt_short(rep.slope) << (rep.monotone ? ", monotone" : ", not monotone") << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct Check {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

Poly random_seed(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nterms(1, 4), deg(1, 4), site(0, 2), block(0, 1);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Poly f(Kind::Real);
  const int k = nterms(rng);
  for (int t = 0; t < k; ++t) {
    std::vector<Factor> fs;
    const int d = deg(rng);
    for (int i = 0; i < d; ++i) {
      const int b = block(rng);
      fs.push_back({static_cast<int16_t>(site(rng)), static_cast<uint8_t>(1 - b), static_cast<uint8_t>(b)});
    }
    f.add(Monomial::from_factors(fs), coef(rng));
  }
  return f;
}

Check tolerance_check(std::string name, double measured, double tol) {
  return Check{std::move(name), measured, tol, measured <= tol};
}

std::vector<Check> run_suite(const RunConfig& c, const CLI::App* sub) {
  std::vector<Check> out;
  std::mt19937_64 rng(c.seed);

  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Poly f = random_seed(rng), g = random_seed(rng);
    const Poly lhs = realize(seed_bracket(f, g), c.n);
    const Poly rhs = poisson_bracket(realize(f, c.n), realize(g, c.n));
    worst = std::max(worst, max_coeff_diff(lhs, rhs));
  }
  out.push_back(tolerance_check("seed_bracket_realization", worst, 1e-12));

  const LinearNF lnf = linear_part(c);
  const std::vector<double> lam = symmetric_dft(lnf.A.row);
  double dlam = 0.0;
  for (int k = 0; k < c.n; ++k) {
    const double s = std::sin(std::numbers::pi * k / c.n);
    dlam = std::max(dlam, std::abs(lam[k] - (1.0 + 4.0 * c.a * s * s)));
  }
  out.push_back(tolerance_check("spectrum", dlam, 1e-12));

  const Poly quad = realize(lnf.h_omega + lnf.zeta0, c.n);
  const Circulant S = circulant_power(lnf.A, 0.5);
  Poly expect(Kind::Real, c.n);
  for (int i = 0; i < c.n; ++i) {
    for (int j = i; j < c.n; ++j) {
      const double sij = S.row[(j - i) % c.n];
      const double w = i == j ? 0.5 * sij : sij;
      if (i == j) {
        expect.add(Monomial::single(i, 2, 0), w);
        expect.add(Monomial::single(i, 0, 2), w);
      } else {
        expect.add(Monomial::from_factors({{static_cast<int16_t>(i), 1, 0}, {static_cast<int16_t>(j), 1, 0}}), w);
        expect.add(Monomial::from_factors({{static_cast<int16_t>(i), 0, 1}, {static_cast<int16_t>(j), 0, 1}}), w);
      }
    }
  }
  out.push_back(tolerance_check("quadratic_form", max_coeff_diff(quad, expect), 1e-12));
  out.push_back(tolerance_check("zeta0_commutes", seed_bracket(lnf.h_omega, lnf.zeta0).max_abs(), 1e-12));

  NormalFormResult res = normal_form(lnf, c.order, nf_options(c));
  if (c.perturb != 0.0 && res.r >= 1 && !res.chi[1].empty()) {
    const auto terms = res.chi[1].sorted();
    auto best = terms.front();
    for (const auto& t : terms)
      if (std::abs(t.second) > std::abs(best.second)) best = t;
    res.chi[1].add(best.first, c.perturb);
  }

  for (int s = 1; s <= res.r; ++s) {
    const std::string tag = "[s=" + std::to_string(s) + "]";
    const double zmax = std::max(1.0, res.zeta[s].max_abs());
    out.push_back(tolerance_check("kernel_purity" + tag, lie_omega(res.zeta[s], lnf.omega).max_abs() / zmax, 1e-12));
    Poly resid = lie_omega(res.chi[s], lnf.omega) + seed_bracket(res.zeta0, res.chi[s]);
    resid -= res.zeta[s];
    resid -= res.psi[s];
    const double pmax = std::max(1e-300, res.psi[s].max_abs());
    out.push_back(tolerance_check("homological_residual" + tag, resid.max_abs() / pmax, 1e-10));
    const double cmax = std::max(1e-300, res.chi[s].max_abs());
    out.push_back(tolerance_check("reality" + tag, reality_defect(res.chi[s]) / cmax, 1e-12));
  }

  const ConstantsRecord cr = constants(lnf, c.order, sigma_choice(c, sub));
  const BoundReport rep = verify_decay_bounds(res, cr);
  int fails = 0;
  for (const auto& b : rep.checks) fails += b.status == Status::Fail;
  out.push_back(Check{"decay_bounds", static_cast<double>(fails), 0.0, fails == 0});

  SimConfig sim;
  sim.n = c.n;
  sim.a = c.a;
  sim.R = c.radius;
  sim.norm = parse_norm(c.norm);
  sim.dt = c.dt;
  sim.T = 10.0;
  sim.sample_every = 0.5;
  sim.seed = c.seed;
  sim.quartic_sign = c.quartic_sign;
  sim.keep_states = false;
  const Trajectory tr = integrate_kg(sim);
  double drift = 0.0;
  for (double e : tr.energy_error) drift = std::max(drift, std::abs(e));
  out.push_back(tolerance_check("energy_conservation", drift, 1e-6));
  return out;
}

int cmd_verify(const RunConfig& c, const CLI::App* sub) {
  validate(c);
  const std::vector<Check> checks = run_suite(c, sub);
  bool ok = true;
  for (const auto& ch : checks) ok = ok && ch.pass;
  if (c.json) {
    json a = json::array();
    for (const auto& ch : checks)
      a.push_back({{"name", ch.name},
                   {"measured", ch.measured},
                   {"tolerance", ch.tolerance},
                   {"status", ch.pass ? "PASS" : "FAIL"}});
    std::cout << json{{"all_pass", ok}, {"checks", a}}.dump(2) << "\n";
  } else {
    for (const auto& ch : checks) {
      char line[160];
      std::snprintf(line, sizeof line, "%-28s %-12s %-10s %s", ch.name.c_str(), fmt_short(ch.measured).c_str(),
                    fmt_short(ch.tolerance).c_str(), ch.pass ? "PASS" : "FAIL");
      std::cout << line << "\n";
    }
    std::cout << (ok ? "all invariants hold" : "invariant failure") << "\n";
  }
  return ok ? kExitOk : kExitVerify;
}

void report_error(const std::string& msg, int code, bool as_json) {
  if (as_json)
    std::cerr << json{{"error", msg}, {"exit_code", code}}.dump() << "\n";
  else
    std::cerr << "error: " << msg << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonant normal forms of periodic Klein-Gordon chains"};
  app.require_subcommand(1);

  using Handler = int (*)(const RunConfig&, const CLI::App*);
  struct Command {
    const char* name;
    const char* help;
    Handler run;
    RunConfig cfg;
    CLI::App* app = nullptr;
  };
  std::vector<Command> cmds;
  cmds.push_back({"normalize", "compute the normal form and its bound report", cmd_normalize, {}});
  cmds.push_back({"gdnls", "extract the generalized dNLS model", cmd_gdnls, {}});
  cmds.push_back({"simulate", "integrate the chain and measure the drift of H_Omega", cmd_simulate, {}});
  cmds.push_back({"bounds", "check the quantitative estimates", cmd_bounds, {}});
  cmds.push_back({"verify", "run the invariant suite", cmd_verify, {}});
  for (auto& cmd : cmds) cmd.cfg.command = cmd.name;
  cmds[2].cfg.n = 16;
  cmds[2].cfg.radius = 0.1;
  cmds[2].cfg.order = 2;
  cmds[4].cfg.n = 6;
  cmds[4].cfg.ring = true;
  cmds[4].cfg.radius = 0.1;

  for (auto& cmd : cmds) {
    cmd.app = app.add_subcommand(cmd.name, cmd.help);
    add_common(cmd.app, cmd.cfg);
    if (std::string(cmd.name) == "simulate" || std::string(cmd.name) == "verify") add_dynamics(cmd.app, cmd.cfg);
    if (std::string(cmd.name) == "bounds")
      cmd.app->add_option("--samples", cmd.cfg.samples, "sampled states of the deformation check")
          ->capture_default_str();
    if (std::string(cmd.name) == "gdnls") {
      cmd.app->add_option("--dnls-a", cmd.cfg.dnls_a, "coupling of the standard dNLS reference")
          ->capture_default_str();
      cmd.app->add_option("--dnls-E", cmd.cfg.dnls_E, "quartic strength of the standard dNLS reference")
          ->capture_default_str();
    }
    if (std::string(cmd.name) == "verify")
      cmd.app->add_option("--perturb", cmd.cfg.perturb, "add this amount to one coefficient of chi_1");
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  bool as_json = given_on_line(args, "--json");
  try {
    // Locate the subcommand and the config file, then splice the file's values in
    // ahead of the explicit flags.
    std::string config;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
    }
    if (!config.empty()) {
      std::size_t pos = args.size();
      CLI::App* sub = nullptr;
      for (std::size_t i = 0; i < args.size() && !sub; ++i)
        for (auto& cmd : cmds)
          if (args[i] == cmd.name) {
            sub = cmd.app;
            pos = i;
          }
      if (!sub) {
        std::ifstream in(config);
        json cfg = json::parse(in, nullptr, false);
        if (cfg.is_object() && cfg.contains("command") && cfg["command"].is_string())
          for (auto& cmd : cmds)
            if (cfg["command"].get<std::string>() == cmd.name) sub = cmd.app;
        if (!sub) throw InvalidInput("no command given on the line or in the config file");
        args.insert(args.begin(), sub->get_name());
        pos = 0;
      }
      std::vector<std::string> extra = config_args(config, sub, args);
      if (std::find(extra.begin(), extra.end(), "--json") != extra.end()) as_json = true;
      args.insert(args.begin() + pos + 1, extra.begin(), extra.end());
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    report_error(std::string(e.get_name()) + ": " + e.what(), kExitInput, as_json);
    return kExitInput;
  } catch (const std::exception& e) {
    report_error(e.what(), kExitInput, as_json);
    return kExitInput;
  }

  for (auto& cmd : cmds) {
    if (!cmd.app->parsed()) continue;
    try {
      return cmd.run(cmd.cfg, cmd.app);
    } catch (const DivergenceError& e) {
      report_error(std::string(e.what()) + " (step " + std::to_string(e.step()) + ")", kExitDiverge, cmd.cfg.json);
      return kExitDiverge;
    } catch (const InstabilityError& e) {
      report_error(e.what(), kExitDiverge, cmd.cfg.json);
      return kExitDiverge;
    } catch (const std::exception& e) {
      report_error(e.what(), kExitInput, cmd.cfg.json);
      return kExitInput;
    }
  }
  return kExitOk;
}
