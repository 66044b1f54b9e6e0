#include "kgnf/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "kgnf/cyclic.hpp"

namespace kgnf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1 - e^{-x} with x = +inf giving 1.
double one_minus_exp(double x) { return std::isinf(x) ? 1.0 : -std::expm1(-x); }

}  // namespace

double envelope(const Poly& f, double sigma) {
  double C = 0.0;
  for (const auto& [m, part] : decay_decompose(f)) {
    double nm = poly_norm(part, 1.0);
    if (nm == 0.0) continue;
    if (std::isinf(sigma))
      C = m == 0 ? std::max(C, nm) : kInf;
    else
      C = std::max(C, nm * std::exp(sigma * m));
  }
  return C;
}

ConstantsRecord constants(const LinearNF& lnf, int r, std::optional<double> sigma_star) {
  if (r < 1) throw InvalidInput("order r must be at least 1");
  ConstantsRecord c;
  c.a = lnf.a;
  c.mu = lnf.mu;
  c.omega = lnf.omega;
  c.r = r;
  c.sigma0 = lnf.sigma0;
  c.sigma1 = lnf.sigma1;
  const bool decoupled = std::isinf(c.sigma0);
  c.window_lo = std::max(std::log(4.0), c.sigma0 / 4.0);
  c.window_hi = c.sigma1;
  c.window_empty = !(c.window_lo < c.window_hi);
  if (sigma_star) {
    if (!(*sigma_star >= c.window_lo && *sigma_star < c.window_hi))
      throw InvalidInput("sigma_star outside the admissible window [" + std::to_string(c.window_lo) + ", " +
                         std::to_string(c.window_hi) + ")");
    c.sigma_star = *sigma_star;
  } else {
    c.sigma_star = c.window_lo;
    c.sigma_star_admissible = !c.window_empty;
  }
  for (int s = 1; s <= r; ++s)
    c.sigma_s.push_back(decoupled ? kInf : c.sigma1 - double(s - 1) / r * (c.sigma1 - c.sigma_star));

  Poly z0 = birkhoff_seed(lnf.zeta0, 0), h1 = birkhoff_seed(lnf.h1, 0);
  c.C_zeta0 = envelope(z0, c.sigma0);
  c.C_h1 = envelope(h1, c.sigma1);

  const double gap = decoupled ? kInf : c.sigma0 - c.sigma_star;
  c.E0_star = decoupled ? 1.0 / 3.0 : std::min(c.sigma0 - c.sigma1, c.sigma1 - c.sigma_star) / gap;
  const double geom = one_minus_exp(c.sigma0) * one_minus_exp(gap) * c.E0_star;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  // An empty window gives E0* <= 0 and no meaningful constants.
  c.mu_star = !(geom > 0.0) ? nan : c.C_zeta0 == 0.0 ? kInf : c.omega * geom / (8.0 * c.C_zeta0 * std::exp(c.sigma1));
  c.C_K = c.mu / c.mu_star;
  c.gamma = 2.0 * c.omega * (1.0 - r * c.C_K);
  c.C_star = c.gamma > 0.0 ? c.C_h1 / (c.gamma * geom) : nan;
  c.C_r = 64.0 * r * r * c.C_star;
  c.C_tilde = 96.0 * r * r * c.C_star;
  c.C_tilde_alt = 2.0 * c.C_r;
  c.R_star = std::sqrt(2.0 / (3.0 * (1.0 + std::numbers::e) * c.C_r));
  const double ratio = c.mu_star / (2.0 * c.mu);
  c.r_max = std::isnan(ratio)   ? 0
            : std::isinf(ratio) ? std::numeric_limits<int>::max()
                                : static_cast<int>(std::floor(ratio));
  c.order_admissible = 2.0 * r * c.mu < c.mu_star;
  return c;
}

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    default: return "ADVISORY";
  }
}

bool BoundReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& b) { return b.status == Status::Pass; });
}

BoundReport verify_decay_bounds(const NormalFormResult& res, const ConstantsRecord& c) {
  if (c.r != res.r) throw InvalidInput("constants computed for a different order");
  BoundReport rep;
  auto add = [&](const std::string& name, int s, double sigma, const Poly& f, double bound) {
    BoundCheck b{name, s, sigma, envelope(f, sigma), bound, Status::Pass};
    if (!(b.measured <= b.bound)) b.status = c.hypotheses() ? Status::Fail : Status::Advisory;
    rep.checks.push_back(b);
  };
  for (int s = 1; s <= res.r; ++s) {
    const double grow = std::pow(c.C_r, s - 1) * c.C_h1;
    add("chi", s, c.sigma_s[s - 1], res.chi[s], grow / (c.gamma * s));
    add("zeta", s, c.sigma_s[s - 1], res.zeta[s], grow / s);
  }
  for (std::size_t k = 0; k < res.head.size(); ++k) {
    int s = res.r + 1 + static_cast<int>(k);
    add("remainder", s, c.sigma_star, res.head[k], 2.0 * std::pow(c.C_tilde, s - 1) * c.C_h1);
  }
  return rep;
}

const char* bracket_case_name(BracketCase c) {
  switch (c) {
    case BracketCase::General: return "general";
    case BracketCase::DistinctRates: return "distinct-rates";
    default: return "zero-base";
  }
}

BracketPrediction bracket_decay_bound(double C_f, double s1, int r1, double C_g, double s2, int r2,
                                      std::optional<double> sigma_out, bool f_zero_base) {
  if (!(s1 > 0.0) || !(s2 > 0.0)) throw InvalidInput("decay rates must be positive");
  const double base = double(r1) * r2 * C_f * C_g;
  const double mx = std::max(s1, s2);
  BracketPrediction p;
  if (f_zero_base) {
    if (!(s1 > s2)) throw InvalidInput("the zero-base case needs sigma' > sigma''");
    p.which = BracketCase::ZeroBase;
    p.sigma = s2;
    p.C = 2.0 * std::exp(-(s1 - s2)) * base / (one_minus_exp(s1) * one_minus_exp(s1 - s2));
    return p;
  }
  if (!sigma_out) {
    if (s1 == s2) throw InvalidInput("equal rates need an output rate below them");
    p.which = BracketCase::DistinctRates;
    p.sigma = std::min(s1, s2);
    p.C = base / (one_minus_exp(mx) * one_minus_exp(std::abs(s1 - s2)));
    return p;
  }
  if (!(*sigma_out < std::min(s1, s2)) || !(*sigma_out >= 0.0))
    throw InvalidInput("output rate must lie in [0, min(sigma', sigma''))");
  p.which = BracketCase::General;
  p.sigma = *sigma_out;
  p.C = base / (one_minus_exp(mx) * one_minus_exp(mx - *sigma_out));
  return p;
}

double field_norm_decay_bound(double C_f, double sigma, int r, double R) {
  const double d = one_minus_exp(sigma);
  return 4.0 * r * std::pow(R, r - 1) * C_f / (d * d);
}

bool DeformationReport::pass() const {
  if (sampled_total > total_bound) return false;
  return std::all_of(steps.begin(), steps.end(), [](const DeformationStep& s) { return s.sampled_max <= s.bound; });
}

namespace {

double state_norm(const std::vector<double>& z, bool linf) {
  double s = 0.0;
  for (double v : z) s = linf ? std::max(s, std::abs(v)) : s + v * v;
  return linf ? s : std::sqrt(s);
}

std::vector<double> time_one_flow(const Poly& seed, std::vector<double> z, int n, int steps) {
  const double h = 1.0 / steps;
  const std::size_t d = z.size();
  std::vector<double> t(d);
  for (int k = 0; k < steps; ++k) {
    auto k1 = field_eval(seed, z, n);
    for (std::size_t i = 0; i < d; ++i) t[i] = z[i] + 0.5 * h * k1[i];
    auto k2 = field_eval(seed, t, n);
    for (std::size_t i = 0; i < d; ++i) t[i] = z[i] + 0.5 * h * k2[i];
    auto k3 = field_eval(seed, t, n);
    for (std::size_t i = 0; i < d; ++i) t[i] = z[i] + h * k3[i];
    auto k4 = field_eval(seed, t, n);
    for (std::size_t i = 0; i < d; ++i) z[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return z;
}

}  // namespace

DeformationReport deformation_bound(const NormalFormResult& res, double R, const ConstantsRecord& c, int n,
                                    int samples, unsigned seed, bool linf) {
  if (!(R > 0.0)) throw InvalidInput("radius must be positive");
  if (res.ring != 0 && res.ring != n) throw InvalidInput("chain size does not match the ring binding");
  DeformationReport rep;
  rep.R = R;
  rep.radius_admissible = R < c.R_star;
  rep.total_bound = std::pow(4.0, 4) * c.C_star * R * R * R;
  const int r = res.r;
  const double delta = r > 0 ? R / (3.0 * r) : 0.0;
  std::vector<Poly> real_chi;
  for (int s = 1; s <= r; ++s) {
    Poly chi = res.chi[s];
    if (res.ring == 0) chi.set_n(n);
    real_chi.push_back(to_real(chi));
    DeformationStep st;
    st.s = s;
    st.radius = R - (s - 1) * delta;
    st.field_norm = field_norm(field_seed(real_chi.back()), st.radius);
    st.bound = (1.0 + std::numbers::e) * st.field_norm;
    rep.steps.push_back(st);
  }
  if (r == 0) return rep;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 0; k < samples; ++k) {
    std::vector<double> z(2 * n);
    for (double& v : z) v = gauss(rng);
    const double scale = (2.0 * R / 3.0) * (k == 0 ? 1.0 : std::sqrt(unif(rng))) / state_norm(z, linf);
    for (double& v : z) v *= scale;
    std::vector<double> w = z;
    for (int s = 1; s <= r; ++s) {
      auto next = time_one_flow(real_chi[s - 1], w, n, 16);
      std::vector<double> d(w.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = next[i] - w[i];
      rep.steps[s - 1].sampled_max = std::max(rep.steps[s - 1].sampled_max, state_norm(d, linf));
      w = std::move(next);
    }
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= z[i];
    rep.sampled_total = std::max(rep.sampled_total, state_norm(w, linf));
  }
  rep.samples = samples;
  return rep;
}

}  // namespace kgnf
