#include "kgnf/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "kgnf/bounds.hpp"
#include "kgnf/cyclic.hpp"

namespace kgnf {

const char* norm_name(NormKind k) { return k == NormKind::L2 ? "l2" : "linf"; }

NormKind parse_norm(const std::string& s) {
  if (s == "l2") return NormKind::L2;
  if (s == "linf") return NormKind::Linf;
  throw InvalidInput("norm must be l2 or linf, got '" + s + "'");
}

namespace {

double vec_norm(const std::vector<double>& z, NormKind k) {
  double s = 0.0;
  for (double v : z) s = k == NormKind::Linf ? std::max(s, std::abs(v)) : s + v * v;
  return k == NormKind::Linf ? s : std::sqrt(s);
}

Circulant from_spectrum(std::vector<double> sp) {
  Circulant c;
  c.n = static_cast<int>(sp.size());
  c.row = symmetric_idft(sp);
  for (int k = 1; k < c.n; ++k) c.row[k] = c.row[c.n - k] = 0.5 * (c.row[k] + c.row[c.n - k]);
  c.spectrum = std::move(sp);
  return c;
}

Circulant chain_matrix(double a, int n) {
  if (a > 0.0) return build_A(a, n);
  std::vector<double> row(n, 0.0);
  row[0] = 1.0;
  return make_circulant(std::move(row));
}

// Exact linear flow over time h in the DFT basis, W = diag(omega_k).  With divide
// set it is x' = cos(W h) x + W^{-1} sin(W h) y, y' = -W sin(W h) x + cos(W h) y;
// otherwise both sine blocks are plain +-sin(W h).
struct Rotation {
  Circulant c, sp, sm;
};

Rotation rotation(const std::vector<double>& freq, double h, bool divide) {
  const int n = static_cast<int>(freq.size());
  std::vector<double> c(n), sp(n), sm(n);
  for (int k = 0; k < n; ++k) {
    const double w = freq[k];
    c[k] = std::cos(w * h);
    sp[k] = divide ? std::sin(w * h) / w : std::sin(w * h);
    sm[k] = divide ? -w * std::sin(w * h) : -std::sin(w * h);
  }
  return {from_spectrum(c), from_spectrum(sp), from_spectrum(sm)};
}

void rotate(const Circulant& c, const Circulant& sp, const Circulant& sm, std::vector<double>& z, int n) {
  std::vector<double> x(z.begin(), z.begin() + n), y(z.begin() + n, z.end());
  auto cx = circulant_apply(c, x), sy = circulant_apply(sp, y);
  auto sx = circulant_apply(sm, x), cy = circulant_apply(c, y);
  for (int j = 0; j < n; ++j) {
    z[j] = cx[j] + sy[j];
    z[n + j] = sx[j] + cy[j];
  }
}

void rotate(const Rotation& r, std::vector<double>& z, int n) { rotate(r.c, r.sp, r.sm, z, n); }

std::vector<double> frequencies(const Circulant& A) {
  std::vector<double> w(A.n);
  for (int k = 0; k < A.n; ++k) w[k] = std::sqrt(A.spectrum[k]);
  return w;
}

}  // namespace

void SimConfig::validate() const {
  if (n < 1) throw InvalidInput("n must be positive");
  if (!(a >= 0.0)) throw InvalidInput("a must be non-negative");
  if (!(R > 0.0)) throw InvalidInput("radius must be positive");
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  if (!(T > 0.0)) throw InvalidInput("T must be positive");
  if (dt * std::sqrt(1.0 + 4.0 * a) >= 0.5) throw InvalidInput("dt too large: dt * max frequency must stay below 0.5");
  const double ratio = T / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) throw InvalidInput("T / dt must be an integer");
  if (!(sample_every >= dt)) throw InvalidInput("sample interval must be at least dt");
  if (quartic_sign != 1 && quartic_sign != -1) throw InvalidInput("quartic sign must be +1 or -1");
  if (init == InitRecipe::User && static_cast<int>(state.size()) != 2 * n)
    throw InvalidInput("user state must have length 2n");
}

long SimConfig::steps() const { return std::lround(T / dt); }

int SimConfig::sample_stride() const { return std::max(1, static_cast<int>(std::lround(sample_every / dt))); }

std::vector<double> initial_state(const SimConfig& cfg, const LinearNF& lnf) {
  if (cfg.init == InitRecipe::User) return cfg.state;
  const int n = cfg.n;
  std::vector<double> w(2 * n, 0.0);
  if (cfg.init == InitRecipe::SingleSite) {
    w[0] = cfg.R;
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (int j = 0; j < n; ++j) {
      const double ph = phase(rng);
      w[j] = std::cos(ph);
      w[n + j] = std::sin(ph);
    }
    const double s = cfg.R / vec_norm(w, cfg.norm);
    for (double& v : w) v *= s;
  }
  return apply_linear_inverse(lnf, w);
}

double kg_energy(const std::vector<double>& z, double a, int quartic_sign, bool harmonic) {
  const int n = static_cast<int>(z.size()) / 2;
  long double e = 0.0L;
  for (int j = 0; j < n; ++j) {
    const double x = z[j], y = z[n + j], d = z[(j + 1) % n] - x;
    e += 0.5L * (y * y + x * x + a * d * d);
    if (!harmonic) e += 0.25L * quartic_sign * x * x * x * x;
  }
  return static_cast<double>(e);
}

KgIntegrator::KgIntegrator(int n, double a, double dt, int quartic_sign, bool harmonic)
    : n_(n), dt_(dt), sign_(quartic_sign), harmonic_(harmonic) {
  Rotation r = rotation(frequencies(chain_matrix(a, n)), 0.5 * dt, true);
  c_ = std::move(r.c);
  s_plus_ = std::move(r.sp);
  s_minus_ = std::move(r.sm);
}

void KgIntegrator::step(std::vector<double>& z) const {
  rotate(c_, s_plus_, s_minus_, z, n_);
  if (!harmonic_)
    for (int j = 0; j < n_; ++j) z[n_ + j] -= sign_ * z[j] * z[j] * z[j] * dt_;
  rotate(c_, s_plus_, s_minus_, z, n_);
}

void KgIntegrator::run(std::vector<double>& z, long steps) const {
  for (long k = 0; k < steps; ++k) step(z);
}

Trajectory integrate_kg(const SimConfig& cfg) {
  cfg.validate();
  LinearOptions lo;
  lo.quartic_sign = cfg.quartic_sign;
  LinearNF lnf = linear_normalize(cfg.a, cfg.n, lo);
  std::vector<double> z = initial_state(cfg, lnf);
  KgIntegrator integ(cfg.n, cfg.a, cfg.dt, cfg.quartic_sign, cfg.harmonic);
  Trajectory tr;
  tr.n = cfg.n;
  const double e0 = kg_energy(z, cfg.a, cfg.quartic_sign, cfg.harmonic);
  auto record = [&](double t) {
    const double e = kg_energy(z, cfg.a, cfg.quartic_sign, cfg.harmonic);
    const double err = e0 != 0.0 ? (e - e0) / std::abs(e0) : e - e0;
    if (std::abs(err) > 1e-3)
      throw InstabilityError("relative energy error " + std::to_string(err) + " at t = " + std::to_string(t));
    tr.t.push_back(t);
    tr.H.push_back(e);
    tr.energy_error.push_back(err);
    if (cfg.keep_states) tr.states.push_back(z);
  };
  record(0.0);
  const long steps = cfg.steps();
  const int stride = cfg.sample_stride();
  for (long k = 1; k <= steps; ++k) {
    integ.step(z);
    if (k % stride == 0 || k == steps) record(k * cfg.dt);
  }
  return tr;
}

std::vector<double> evaluate_along(const Trajectory& traj, const LinearNF& lnf, const Poly& seed, double prune) {
  Poly real = seed.kind() == Kind::Real ? seed : to_real(seed);
  if (prune > 0.0) real.prune(prune);
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& z : traj.states) out.push_back(evaluate_cyclic(real, apply_linear(lnf, z), traj.n));
  return out;
}

void observables(Trajectory& traj, const NormalFormResult& res, int order) {
  if (traj.states.empty()) throw InvalidInput("observables need stored states");
  if (traj.n != res.lnf.n) throw InvalidInput("trajectory and normal form use different chain sizes");
  if (order < 0 || order > res.r) order = res.r;
  const LinearNF& lnf = res.lnf;
  traj.H_omega.clear();
  for (const auto& z : traj.states) {
    auto w = apply_linear(lnf, z);
    double s = 0.0;
    for (double v : w) s += v * v;
    traj.H_omega.push_back(0.5 * lnf.omega * s);
  }
  traj.Z = evaluate_along(traj, lnf, lnf.zeta0);
  for (int s = 1; s <= order; ++s) {
    auto v = evaluate_along(traj, lnf, res.zeta[s]);
    for (std::size_t i = 0; i < v.size(); ++i) traj.Z[i] += v[i];
  }
}

namespace {

double max_delta(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x - v.front()));
  return m;
}

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw InvalidInput("slope needs at least two matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DriftReport drift_experiment(const SimConfig& base, const std::vector<double>& ladder, const NormalFormResult& res,
                             int order, double phi_prune,
                             const std::function<void(double, const Trajectory&)>& on_run) {
  if (ladder.empty()) throw InvalidInput("ladder needs at least one amplitude");
  if (order < 0 || order > res.r) throw InvalidInput("integral order must lie in [0, r]");
  const LinearNF& lnf = res.lnf;
  std::vector<Poly> phi;
  for (int k = 0; k <= order; ++k) phi.push_back(approximate_integral(res, k));
  const double Cz = envelope(birkhoff_seed(lnf.zeta0, 0), lnf.sigma0);
  const double Ch = envelope(birkhoff_seed(lnf.h1, 0), lnf.sigma1);
  DriftReport rep;
  for (double R : ladder) {
    SimConfig cfg = base;
    cfg.R = R;
    cfg.keep_states = true;
    Trajectory tr = integrate_kg(cfg);
    observables(tr, res);
    DriftPoint p;
    p.R = R;
    p.max_dH_omega = max_delta(tr.H_omega);
    p.max_dZ = max_delta(tr.Z);
    for (const Poly& f : phi) {
      tr.Phi.push_back(evaluate_along(tr, lnf, f, phi_prune));
      p.max_dPhi.push_back(max_delta(tr.Phi.back()));
    }
    for (double e : tr.energy_error) p.energy_drift = std::max(p.energy_drift, std::abs(e));
    p.bound_omega = lnf.omega * std::pow(R, 4);
    p.bound_z = std::pow(R, 4) * (Cz * lnf.mu + Ch * R * R);
    rep.points.push_back(std::move(p));
    if (on_run) on_run(R, tr);
  }
  std::vector<double> xs, ys;
  for (const auto& p : rep.points) {
    xs.push_back(p.R);
    ys.push_back(p.max_dH_omega);
  }
  rep.slope = xs.size() >= 2 ? loglog_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
  auto sorted = rep.points;
  std::sort(sorted.begin(), sorted.end(), [](const DriftPoint& l, const DriftPoint& r) { return l.R < r.R; });
  rep.monotone = true;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (!(sorted[i].max_dH_omega > sorted[i - 1].max_dH_omega)) rep.monotone = false;
  return rep;
}

Trajectory integrate_gdnls(const GdnlsModel& model, const LinearNF& lnf, const SimConfig& cfg) {
  cfg.validate();
  if (model.n != cfg.n || lnf.n != cfg.n) throw InvalidInput("model, linear data and config disagree on n");
  const int n = cfg.n;
  Rotation half = rotation(frequencies(lnf.A), 0.5 * cfg.dt, false);
  Poly z1 = to_real(model.zeta1);
  Poly zeta0 = lnf.zeta0;
  auto K = [&](const std::vector<double>& w) {
    double s = 0.0;
    for (double v : w) s += v * v;
    return 0.5 * lnf.omega * s + evaluate_cyclic(zeta0, w, n) + evaluate_cyclic(z1, w, n);
  };
  std::vector<double> w = apply_linear(lnf, initial_state(cfg, lnf));
  Trajectory tr;
  tr.n = n;
  const double k0 = K(w);
  auto record = [&](double t) {
    const double k = K(w);
    const double err = k0 != 0.0 ? (k - k0) / std::abs(k0) : k - k0;
    if (std::abs(err) > 1e-3) throw InstabilityError("relative energy error " + std::to_string(err));
    tr.t.push_back(t);
    tr.H.push_back(k);
    tr.energy_error.push_back(err);
    double s = 0.0;
    for (double v : w) s += v * v;
    tr.H_omega.push_back(0.5 * lnf.omega * s);
    if (cfg.keep_states) tr.states.push_back(w);
  };
  record(0.0);
  const long steps = cfg.steps();
  const int stride = cfg.sample_stride();
  std::vector<double> mid(2 * n), next(2 * n);
  for (long k = 1; k <= steps; ++k) {
    rotate(half, w, n);
    next = w;
    for (int it = 0; it < 100; ++it) {
      for (int i = 0; i < 2 * n; ++i) mid[i] = 0.5 * (w[i] + next[i]);
      auto X = field_eval(z1, mid, n);
      double change = 0.0, size = 0.0;
      for (int i = 0; i < 2 * n; ++i) {
        const double v = w[i] + cfg.dt * X[i];
        change = std::max(change, std::abs(v - next[i]));
        size = std::max(size, std::abs(v));
        next[i] = v;
      }
      if (change <= 1e-15 * size) break;
    }
    w = next;
    rotate(half, w, n);
    if (k % stride == 0 || k == steps) record(k * cfg.dt);
  }
  return tr;
}

Comparison compare_models(const Trajectory& kg, const Trajectory& gdnls, const LinearNF& lnf) {
  if (kg.states.size() != gdnls.states.size()) throw InvalidInput("trajectories have different sample counts");
  Comparison c;
  double scale = 0.0;
  for (std::size_t i = 0; i < kg.states.size(); ++i) {
    auto q = apply_linear(lnf, kg.states[i]);
    double d = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) d = std::max(d, std::abs(q[j] - gdnls.states[i][j]));
    if (i == 0)
      for (double v : q) scale = std::max(scale, std::abs(v));
    c.t.push_back(kg.t[i]);
    c.deviation.push_back(d);
    c.max_deviation = std::max(c.max_deviation, d);
  }
  c.relative = scale > 0.0 ? c.max_deviation / scale : 0.0;
  return c;
}

}  // namespace kgnf
