#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kgnf/bounds.hpp"
#include "kgnf/cyclic.hpp"
#include "kgnf/dynamics.hpp"
#include "kgnf/linearize.hpp"
#include "kgnf/normalform.hpp"
#include "support.hpp"

using namespace kgnf;
using kgtest::Dense;
using kgtest::Key;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3e", v);
  return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::MatrixXd dense_A(double a, int n) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) += 1.0 + 2.0 * a;
    A(i, (i + 1) % n) -= a;
    A(i, (i + n - 1) % n) -= a;
  }
  return A;
}

Eigen::MatrixXd sym_power(const Eigen::MatrixXd& A, double alpha) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  Eigen::VectorXd d = es.eigenvalues().array().pow(alpha);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int n : {3, 4, 5, 6}) {
    for (int i = 0; i < 100; ++i) {
      const Poly f = kgtest::random_seed(rng), g = kgtest::random_seed(rng);
      const Dense lhs = kgtest::dense_realize(seed_bracket(f, g), n);
      const Dense rhs = kgtest::bracket(kgtest::dense_realize(f, n), kgtest::dense_realize(g, n));
      worst = std::max(worst, kgtest::max_diff(lhs, rhs));
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 30.0, "max diff " + sci(worst) + ", " + sci(t) + " s"};
}

Outcome ac2() {
  const int n = 8;
  const double a = 0.05;
  const LinearNF lnf = linear_normalize(a, n);
  const Eigen::MatrixXd S = sym_power(dense_A(a, n), 0.5);
  Dense expect(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Key kq(2 * n, 0), kp(2 * n, 0);
      kq[i] += 1;
      kq[j] += 1;
      kp[n + i] += 1;
      kp[n + j] += 1;
      expect.add(kq, 0.5 * S(i, j));
      expect.add(kp, 0.5 * S(i, j));
    }
  const double d = kgtest::max_diff(kgtest::dense_realize(lnf.h_omega + lnf.zeta0, n), expect);
  const double comm =
      kgtest::max_abs(kgtest::bracket(kgtest::dense_realize(lnf.h_omega, n), kgtest::dense_realize(lnf.zeta0, n)));
  bool base_zero = true;
  for (const auto& [m, c] : lnf.zeta0.terms())
    if (m.diameter() == 0) base_zero = false;
  return {d <= 1e-12 && comm <= 1e-12 && base_zero,
          "quadratic form " + sci(d) + ", {H_Omega, Z_0} " + sci(comm) + ", zeta0^(0) " + (base_zero ? "0" : "nonzero")};
}

Outcome ac3() {
  double worst_formula = 0.0, worst_eigen = 0.0;
  for (int n : {4, 16, 64})
    for (double a : {0.01, 0.1}) {
      const Circulant A = build_A(a, n);
      std::vector<double> lam = A.spectrum;
      for (int k = 0; k < n; ++k) {
        const double s = std::sin(std::numbers::pi * k / n);
        worst_formula = std::max(worst_formula, std::abs(lam[k] - (1.0 + 4.0 * a * s * s)));
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_A(a, n));
      std::sort(lam.begin(), lam.end());
      for (int k = 0; k < n; ++k) worst_eigen = std::max(worst_eigen, std::abs(lam[k] - es.eigenvalues()(k)));
    }
  return {worst_formula <= 1e-12 && worst_eigen <= 1e-12,
          "closed form " + sci(worst_formula) + ", dense eigensolver " + sci(worst_eigen)};
}

// Criteria 4 and 5 share one normal form.
struct RoundTrip {
  NormalFormResult res;
  double seconds = 0.0;
};

const RoundTrip& round_trip_run() {
  static RoundTrip rt = [] {
    RoundTrip r;
    const auto t0 = std::chrono::steady_clock::now();
    const LinearNF lnf = linear_normalize(0.05, 6);
    NormalFormOptions o;
    o.ring = 6;
    o.s_max = 3;
    r.res = normal_form(lnf, 2, o);
    r.seconds = seconds_since(t0);
    return r;
  }();
  return rt;
}

Outcome ac4() {
  const auto t0 = std::chrono::steady_clock::now();
  const RoundTrip& rt = round_trip_run();
  const NormalFormResult& res = rt.res;
  const Poly Z = res.h_omega + res.zeta0 + res.zeta[1] + res.zeta[2] + res.head[0];
  const Poly H = res.transform().apply(Z, 8);
  const Poly lhs = realize(H.truncated(8), 6);
  const Poly rhs = realize(res.h_omega + res.zeta0 + res.h1, 6);
  const double d = max_coeff_diff(lhs, rhs);
  const double t = rt.seconds + seconds_since(t0);
  return {d <= 1e-10 && t < 300.0, "max coefficient diff " + sci(d) + " up to degree 8, " + sci(t) + " s"};
}

Outcome ac5() {
  const NormalFormResult& res = round_trip_run().res;
  double worst = 0.0;
  for (int s = 1; s <= res.r; ++s) {
    // L_Omega on the realized polynomial, monomial by monomial
    const Dense Z = kgtest::dense_realize(res.zeta[s], 6);
    for (const auto& [k, c] : Z.t) {
      int dj = 0, dk = 0;
      for (int i = 0; i < 6; ++i) {
        dj += k[i];
        dk += k[6 + i];
      }
      worst = std::max(worst, std::abs(res.lnf.omega * (dk - dj) * c));
    }
  }
  return {worst <= 1e-12, "max |L_Omega Z_s| " + sci(worst)};
}

// One oscillator i xi eta + q^4/4 in Birkhoff variables with {xi, eta} = 1.
Outcome ac6() {
  const LinearNF lnf = linear_normalize(0.0, 8);
  NormalFormOptions o;
  o.s_max = 2;
  const NormalFormResult res = normal_form(lnf, 1, o);

  Poly expect(Kind::Real);
  const double c = 3.0 / 32.0;
  expect.add(Monomial::single(0, 4, 0), c);
  expect.add(Monomial::single(0, 2, 2), 2.0 * c);
  expect.add(Monomial::single(0, 0, 4), c);
  const double dz = max_coeff_diff(to_real(res.zeta[1]), expect);

  const cplx I(0.0, 1.0);
  Dense q(1), H0(1);
  q.add({1, 0}, 1.0 / std::sqrt(2.0));
  q.add({0, 1}, I / std::sqrt(2.0));
  H0.add({1, 1}, I);
  const Dense q2 = kgtest::product(q, q);
  const Dense h1 = kgtest::product(q2, q2).scaled(0.25);
  Dense chi(1);
  for (const auto& [k, v] : h1.t)
    if (k[0] != k[1]) chi.add(k, -v / (I * double(k[1] - k[0])));
  const Dense h2 =
      kgtest::bracket(chi, kgtest::bracket(chi, H0)).scaled(0.5) + kgtest::bracket(chi, h1).scaled(-1.0);
  const double dh = kgtest::max_diff(kgtest::dense_from(res.head[0], 1), h2);
  return {dz <= 1e-13 && dh <= 1e-11, "zeta_1 vs (3/32)(q^2+p^2)^2 " + sci(dz) + ", remainder vs N=1 oracle " + sci(dh)};
}

Outcome ac7() {
  std::vector<double> z0, z1;
  for (int n : {8, 16, 32}) {
    NormalFormOptions o;
    o.s_max = 0;
    const NormalFormResult res = normal_form(linear_normalize(0.05, n), 1, o);
    z0.push_back(poly_norm(res.zeta0));
    z1.push_back(poly_norm(res.zeta[1]));
  }
  double spread = 0.0;
  for (int i = 1; i < 3; ++i)
    spread = std::max({spread, std::abs(z0[i] - z0[0]), std::abs(z1[i] - z1[0])});
  return {spread <= 1e-10, "norms zeta0 " + sci(z0[0]) + ", zeta1 " + sci(z1[0]) + ", spread " + sci(spread)};
}

Outcome ac8() {
  const int n = 32;
  NormalFormOptions o;
  o.s_max = 0;
  const NormalFormResult res = normal_form(linear_normalize(0.05, n), 1, o);
  const GdnlsModel g = extract_gdnls(res);
  const double s0 = fit_decay(res.zeta0).sigma;
  const double s1 = g.zeta1_decay.sigma;
  const double sigma0 = res.lnf.sigma0;
  bool b_ok = true;
  double worst = 0.0;
  for (std::size_t m = 1; m <= g.b.size(); ++m) {
    const double bound = std::abs(g.b[0]) * std::pow(2.0 * g.mu, double(m) - 1.0) * 1.5;
    worst = std::max(worst, std::abs(g.b[m - 1]) / bound);
    if (std::abs(g.b[m - 1]) > bound) b_ok = false;
  }
  return {s0 >= sigma0 - 0.05 && s1 >= sigma0 - 0.1 && b_ok,
          "sigma(zeta0) " + sci(s0) + ", sigma(zeta1) " + sci(s1) + ", sigma0 " + sci(sigma0) +
              ", max |b_m|/bound " + sci(worst)};
}

Outcome ac9() {
  const LinearNF lnf = linear_normalize(1e-3, 16);
  std::ostringstream os;
  bool ok = true;
  for (int r = 1; r <= 3; ++r) {
    NormalFormOptions o;
    o.s_max = r + 1;
    const NormalFormResult res = normal_form(lnf, r, o);
    const BoundReport rep = verify_decay_bounds(res, constants(lnf, r));
    int pass = 0;
    for (const auto& b : rep.checks) pass += b.status == Status::Pass;
    ok = ok && rep.all_pass();
    os << "r=" << r << ": " << pass << "/" << rep.checks.size() << " PASS; ";
  }
  return {ok, os.str()};
}

Outcome ac10() {
  const double a = 0.05, E = 0.1;
  const StandardDnls d = standard_dnls(a, E, 6);
  const bool exact = d.linear_coefficient == a / 2.0 && d.quartic_coefficient == 3.0 * E / 8.0;

  // coupling a (X_0^2 - X_0 X_1) and quartic E X_0^4 / 4, projected on the resonance module
  Poly coupling(Kind::Real), quartic(Kind::Real);
  coupling.add(Monomial::single(0, 2, 0), a);
  coupling.add(Monomial::from_factors({{0, 1, 0}, {1, 1, 0}}), -a);
  quartic.add(Monomial::single(0, 4, 0), E / 4.0);
  auto resonant = [](const Dense& f) {
    Dense out(f.n);
    for (const auto& [k, c] : f.t) {
      int s = 0;
      for (int i = 0; i < f.n; ++i) s += k[f.n + i] - k[i];
      if (s == 0) out.add(k, c);
    }
    return out;
  };
  const double d0 =
      kgtest::max_diff(resonant(kgtest::dense_realize(to_complex(coupling), 6)), kgtest::dense_realize(d.z0, 6));
  const double d1 =
      kgtest::max_diff(resonant(kgtest::dense_realize(to_complex(quartic), 6)), kgtest::dense_realize(d.z1, 6));
  std::ostringstream os;
  os.precision(17);
  os << "coefficients (" << d.linear_coefficient << ", " << d.quartic_coefficient << "), projection diffs " << sci(d0)
     << ", " << sci(d1);
  return {exact && d0 <= 1e-14 && d1 <= 1e-14, os.str()};
}

Outcome ac11() {
  const int n = 8;
  std::mt19937_64 rng(111);
  std::uniform_int_distribution<int> deg(2, 5);
  long violations = 0, samples = 0;
  double worst = 0.0;
  for (int h = 0; h < 20; ++h) {
    const int d = deg(rng);
    const Poly f = kgtest::random_homogeneous(rng, d, 2, 5);
    const double bound1 = field_norm(field_seed(f), 1.0);
    const Dense F = kgtest::dense_realize(f, n);
    std::vector<Dense> X;
    for (int i = 0; i < n; ++i) X.push_back(kgtest::derivative(F, n + i));
    for (int i = 0; i < n; ++i) X.push_back(kgtest::derivative(F, i).scaled(-1.0));
    for (bool linf : {false, true}) {
      for (int k = 0; k < 1000; ++k) {
        const std::vector<double> z = kgtest::random_vector(rng, 2 * n);
        std::vector<double> v(2 * n);
        for (int i = 0; i < 2 * n; ++i) v[i] = kgtest::eval(X[i], z);
        const double nz = linf ? kgtest::norm_inf(z) : kgtest::norm2(z);
        const double nv = linf ? kgtest::norm_inf(v) : kgtest::norm2(v);
        const double rhs = bound1 * std::pow(nz, d - 1);
        worst = std::max(worst, nv / rhs);
        if (nv > rhs * (1.0 + 1e-12)) ++violations;
        ++samples;
      }
    }
  }
  return {violations == 0,
          std::to_string(violations) + " violations in " + std::to_string(samples) + " samples, max ratio " + sci(worst)};
}

struct Drift {
  DriftReport ladder, small;
  double seconds = 0.0;
};

const Drift& drift_run() {
  static Drift d = [] {
    Drift out;
    const auto t0 = std::chrono::steady_clock::now();
    SimConfig base;
    base.n = 16;
    base.a = 0.05;
    base.T = 1000.0;
    base.dt = 0.002;
    base.seed = 12;
    const LinearNF lnf = linear_normalize(base.a, base.n);
    NormalFormOptions o;
    o.s_max = 0;
    const NormalFormResult r1 = normal_form(lnf, 1, o);
    out.ladder = drift_experiment(base, {0.1, 0.05, 0.02, 0.01}, r1, 0);
    const NormalFormResult r2 = normal_form(lnf, 2, o);
    out.small = drift_experiment(base, {0.01}, r2, 2);
    out.seconds = seconds_since(t0);
    return out;
  }();
  return d;
}

Outcome ac12() {
  const Drift& d = drift_run();
  bool within = true;
  double drift = 0.0;
  std::ostringstream os;
  for (const auto& p : d.ladder.points) {
    within = within && p.max_dH_omega <= 10.0 * p.bound_omega;
    drift = std::max(drift, p.energy_drift);
    os << "R=" << p.R << " dH " << sci(p.max_dH_omega) << "; ";
  }
  os << "slope " << sci(d.ladder.slope) << ", energy drift " << sci(drift) << ", " << sci(d.seconds) << " s";
  return {d.ladder.slope >= 3.0 && d.ladder.monotone && within && drift <= 1e-6 && d.seconds < 600.0, os.str()};
}

Outcome ac13() {
  const Drift& d = drift_run();
  const auto& phi = d.small.points.front().max_dPhi;
  bool ok = true;
  std::ostringstream os;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    if (k > 0 && phi[k] > phi[k - 1]) ok = false;
    os << "r=" << k << " " << sci(phi[k]) << "; ";
  }
  return {ok, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC-1 seed bracket equals full bracket", ac1},
      {"AC-2 quadratic normalization", ac2},
      {"AC-3 circulant spectrum", ac3},
      {"AC-4 normal form round trip", ac4},
      {"AC-5 kernel purity", ac5},
      {"AC-6 decoupled limit", ac6},
      {"AC-7 extensivity", ac7},
      {"AC-8 decay envelopes", ac8},
      {"AC-9 decay bounds at a = 1e-3", ac9},
      {"AC-10 standard dNLS", ac10},
      {"AC-11 field norm bound", ac11},
      {"AC-12 drift scaling", ac12},
      {"AC-13 order monotonicity", ac13},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
