#include "kgnf/normalform.hpp"

#include <cmath>

#include "kgnf/cyclic.hpp"

namespace kgnf {

namespace {

Poly as_birkhoff(const Poly& f) { return f.kind() == Kind::Birkhoff ? f : to_complex(f); }

int resonance(const Monomial& m) { return m.degree_b() - m.degree_a(); }

}  // namespace

Poly lie_omega(const Poly& f0, double omega) {
  Poly f = as_birkhoff(f0);
  Poly out(Kind::Birkhoff, f.n());
  for (const auto& [m, c] : f.terms()) {
    int k = resonance(m);
    if (k != 0) out.add(m, c * cplx(0.0, omega * k));
  }
  return out;
}

Poly project_kernel(const Poly& f0) {
  Poly f = as_birkhoff(f0);
  Poly out(Kind::Birkhoff, f.n());
  for (const auto& [m, c] : f.terms())
    if (resonance(m) == 0) out.add(m, c);
  return out;
}

Poly project_range(const Poly& f0) {
  Poly f = as_birkhoff(f0);
  Poly out(Kind::Birkhoff, f.n());
  for (const auto& [m, c] : f.terms())
    if (resonance(m) != 0) out.add(m, c);
  return out;
}

Poly invert_lie_omega(const Poly& g0, double omega, double tol) {
  if (!(omega > 0.0)) throw InvalidInput("frequency must be positive");
  Poly g = as_birkhoff(g0);
  const double cut = tol * g.max_abs();
  Poly out(Kind::Birkhoff, g.n());
  for (const auto& [m, c] : g.terms()) {
    int k = resonance(m);
    if (k == 0) {
      if (std::abs(c) > cut) throw InvalidInput("cannot invert L_Omega on a kernel term: " + m.str(Kind::Birkhoff));
      continue;
    }
    out.add(m, c / cplx(0.0, omega * k));
  }
  return out;
}

void Cleanup::apply(Poly& f) const {
  if (tail > 0.0 && f.is_free()) f = truncate_tail(f, tail);
  f.prune(prune);
}

void Cleanup::apply(Poly& f, const Poly& ref) const {
  if (tail > 0.0 && f.is_free()) f = truncate_tail(f, tail, max_part_norm(ref));
  const double mx = f.max_abs();
  if (mx > 0.0) f.prune(prune * ref.max_abs() / mx);
}

HomologicalResult solve_homological(const Poly& psi0, const Poly& zeta0, double omega, double tol, int max_iter,
                                    const Cleanup& clean) {
  Poly psi = as_birkhoff(psi0);
  HomologicalResult res;
  res.zeta = project_kernel(psi);
  res.zeta *= -1.0;
  const double scale = poly_norm(psi);
  Poly u = invert_lie_omega(project_range(psi), omega);
  clean.apply(u);
  res.chi = u;
  if (scale == 0.0) return res;
  Poly z0 = as_birkhoff(zeta0);
  const Poly u0 = u;
  double prev = poly_norm(u);
  int growth = 0;
  while (prev >= tol * scale) {
    if (res.iterations >= max_iter) throw DivergenceError("Neumann series did not reach tolerance", 0);
    Poly w = seed_bracket(z0, u);
    u = invert_lie_omega(w, omega);
    u *= -1.0;
    clean.apply(u, u0);
    ++res.iterations;
    double nu = poly_norm(u);
    growth = nu > prev ? growth + 1 : 0;
    if (growth >= 3) throw DivergenceError("Neumann series terms grew three times in a row", 0);
    res.chi += u;
    prev = nu;
  }
  res.last_term = prev / scale;
  clean.apply(res.chi);
  return res;
}

// ---------------------------------------------------------------- Lie transform

LieTransform::LieTransform(std::vector<Poly> chi, Cleanup clean) : chi_(std::move(chi)), clean_(clean) {
  if (!chi_.empty()) zero_ = Poly(chi_.front().kind(), chi_.front().n());
}

const Poly& LieTransform::chi(int s) const {
  if (s < 1) throw InvalidInput("generating functions are indexed from 1");
  return s <= order() ? chi_[s - 1] : zero_;
}

Poly LieTransform::bracket(int j, const Poly& f) const {
  const Poly& c = chi(j);
  if (c.empty()) return Poly(f.kind(), f.n());
  Poly out = seed_bracket(c, f);
  clean_.apply(out);
  return out;
}

std::vector<Poly> LieTransform::E_series(const Poly& f, int smax) const {
  std::vector<Poly> E;
  E.push_back(f);
  for (int s = 1; s <= smax; ++s) {
    Poly acc(f.kind(), f.n());
    for (int j = 1; j <= std::min(s, order()); ++j) {
      Poly t = bracket(j, E[s - j]);
      t *= double(j) / s;
      acc += t;
    }
    clean_.apply(acc);
    E.push_back(std::move(acc));
  }
  return E;
}

Poly LieTransform::D(int s, const Poly& f) const {
  if (s == 0) return f;
  Poly acc(f.kind(), f.n());
  for (int j = 1; j <= std::min(s, order()); ++j) {
    Poly t = D(s - j, bracket(j, f));
    t *= -double(j) / s;
    acc += t;
  }
  clean_.apply(acc);
  return acc;
}

namespace {

std::map<int, Poly> by_degree(const Poly& f) {
  std::map<int, Poly> parts;
  for (const auto& [m, c] : f.terms()) {
    auto it = parts.find(m.degree());
    if (it == parts.end()) it = parts.emplace(m.degree(), Poly(f.kind(), f.n())).first;
    it->second.add(m, c);
  }
  return parts;
}

}  // namespace

Poly LieTransform::apply(const Poly& f, int degree_cap) const {
  Poly out(f.kind(), f.n());
  for (const auto& [d, part] : by_degree(f)) {
    if (d > degree_cap) continue;
    for (const Poly& e : E_series(part, (degree_cap - d) / 2)) out += e;
  }
  clean_.apply(out);
  return out;
}

Poly LieTransform::inverse(const Poly& f, int degree_cap) const {
  Poly out(f.kind(), f.n());
  for (const auto& [d, part] : by_degree(f)) {
    if (d > degree_cap) continue;
    for (int s = 0; d + 2 * s <= degree_cap; ++s) out += D(s, part);
  }
  clean_.apply(out);
  return out;
}

// ---------------------------------------------------------------- recursion

Poly birkhoff_seed(const Poly& real_seed, int ring) {
  Poly c = as_birkhoff(real_seed);
  if (ring > 0) {
    c.set_n(ring);
    c = left_align(c);
  }
  return c;
}

LieTransform NormalFormResult::transform(const Cleanup& clean) const {
  return LieTransform(std::vector<Poly>(chi.begin() + 1, chi.end()), clean);
}

NormalFormResult normal_form(const LinearNF& lnf, int r, const NormalFormOptions& opt) {
  if (r < 0) throw InvalidInput("order r must be non-negative");
  if (opt.ring != 0 && opt.ring != lnf.n) throw InvalidInput("ring binding must match the chain size");
  NormalFormResult res;
  res.lnf = lnf;
  res.r = r;
  res.ring = opt.ring;
  res.h_omega = birkhoff_seed(lnf.h_omega, opt.ring);
  res.zeta0 = birkhoff_seed(lnf.zeta0, opt.ring);
  res.h1 = birkhoff_seed(lnf.h1, opt.ring);
  res.chi.assign(r + 1, Poly(Kind::Birkhoff, opt.ring));
  res.zeta = res.chi;
  res.psi = res.chi;
  res.neumann_iterations.assign(r + 1, 0);

  for (int s = 1; s <= r; ++s) {
    Poly psi(Kind::Birkhoff, opt.ring);
    if (s == 1) {
      psi = res.h1;
      psi *= -1.0;
    } else {
      LieTransform T(std::vector<Poly>(res.chi.begin() + 1, res.chi.begin() + s), opt.clean);
      Poly t = T.bracket(s - 1, res.h1);
      t *= double(s - 1) / s;
      psi += t;
      for (int j = 1; j < s; ++j) {
        Poly e = T.E_series(res.zeta[j], s - j).back();
        e *= double(j) / s;
        psi += e;
      }
      opt.clean.apply(psi);
    }
    HomologicalResult hr;
    try {
      hr = solve_homological(psi, res.zeta0, lnf.omega, opt.tol, opt.max_iter, opt.clean);
    } catch (const DivergenceError& e) {
      throw DivergenceError(std::string(e.what()) + " at step " + std::to_string(s), s);
    }
    res.psi[s] = std::move(psi);
    res.chi[s] = std::move(hr.chi);
    res.zeta[s] = std::move(hr.zeta);
    res.neumann_iterations[s] = hr.iterations;
  }
  int s_max = opt.s_max < 0 ? r + 1 : opt.s_max;
  if (s_max > r) res.head = remainder_head(res, s_max, opt.clean);
  return res;
}

std::vector<Poly> remainder_head(const NormalFormResult& res, int s_max, const Cleanup& clean) {
  if (s_max <= res.r) throw InvalidInput("s_max must exceed the normal-form order");
  LieTransform T = res.transform(clean);
  std::vector<Poly> head;
  for (int s = res.r + 1; s <= s_max; ++s) {
    Poly h = T.D(s - 1, res.h1);
    for (int j = 1; j <= res.r; ++j) {
      Poly t = T.D(s - j, res.zeta[j] + res.psi[j]);
      t *= double(j) / s;
      h += t;
    }
    clean.apply(h);
    head.push_back(std::move(h));
  }
  return head;
}

Poly approximate_integral(const NormalFormResult& res, int r, const Cleanup& clean) {
  if (r < 0 || r > res.r) throw InvalidInput("integral order must lie in [0, r]");
  LieTransform T(std::vector<Poly>(res.chi.begin() + 1, res.chi.begin() + 1 + r), clean);
  Poly out(Kind::Birkhoff, res.ring);
  for (const Poly& e : T.E_series(res.h_omega, r)) out += e;
  clean.apply(out);
  return out;
}

// ---------------------------------------------------------------- GdNLS

GdnlsModel extract_gdnls(const NormalFormResult& res) {
  if (res.r < 1) throw InvalidInput("the GdNLS model needs order r >= 1");
  GdnlsModel g;
  g.a = res.lnf.a;
  g.mu = res.lnf.mu;
  g.omega = res.lnf.omega;
  g.n = res.lnf.n;
  g.quartic_sign = res.lnf.quartic_sign;
  g.b = zeta0_coefficients(res.lnf);
  g.zeta0 = res.zeta0;
  g.zeta1 = res.zeta[1];
  g.zeta1_parts = symmetric_decompose(symmetric_align(res.zeta[1], res.ring));
  g.zeta1_decay = fit_decay(g.zeta1_parts);
  // (q^2 + p^2)^2 = -4 xi^2 eta^2.
  g.zeta1_leading = (res.zeta[1].coeff(Monomial::single(0, 2, 2)) / -4.0).real();
  g.dnls_coupling = 0.5 * g.mu;
  return g;
}

StandardDnls standard_dnls(double a, double E, int n) {
  if (!(a >= 0.0) || !(E >= 0.0)) throw InvalidInput("a and E must be non-negative");
  if (n < 1) throw InvalidInput("chain size n must be positive");
  StandardDnls d;
  d.a = a;
  d.E = E;
  d.n = n;
  Poly h(Kind::Real, 0), f0(Kind::Real, 0), quartic(Kind::Real, 0);
  h.add(Monomial::single(0, 2, 0), 0.5);
  h.add(Monomial::single(0, 0, 2), 0.5);
  f0.add(Monomial::single(0, 2, 0), a);
  f0.add(Monomial::from_factors({{0, 1, 0}, {1, 1, 0}}), -a);
  quartic.add(Monomial::single(0, 4, 0), 0.25 * E);

  Poly fc = left_align(to_complex(f0));
  d.z0 = project_kernel(fc);
  d.chi0 = invert_lie_omega(project_range(fc), 1.0);
  Poly qc = to_complex(quartic);
  d.z1 = project_kernel(qc);
  d.chi1 = invert_lie_omega(project_range(qc), 1.0);
  d.hamiltonian = to_complex(h) + d.z0 + d.z1;
  d.linear_coefficient = (d.z0.coeff(Monomial::from_factors({{0, 1, 0}, {1, 0, 1}})) / cplx(0.0, -1.0)).real();
  d.quartic_coefficient = -d.z1.coeff(Monomial::single(0, 2, 2)).real();
  return d;
}

}  // namespace kgnf
