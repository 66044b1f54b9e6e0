#include "kgnf/cyclic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace kgnf {

const char* alignment_name(Alignment a) { return a == Alignment::Left ? "left" : "symmetric"; }

Poly cyclic_shift(const Poly& f, int l) {
  Poly out(f.kind(), f.n());
  for (const auto& [m, c] : f.terms()) out.add(m.shifted(-l), c);
  return out;
}

Poly realize(const Poly& seed, int n, int cap) {
  if (n < 1) throw InvalidInput("realize needs a positive chain size");
  if (n > cap) throw InvalidInput("realize is limited to chains of at most " + std::to_string(cap) + " sites");
  Poly out(seed.kind(), n);
  for (const auto& [m, c] : seed.terms())
    for (int l = 0; l < n; ++l) out.add(m.shifted(-l), c);
  out.prune(0.0);
  return out;
}

Poly realize(const CyclicFn& F, int cap) { return realize(F.seed, F.n, cap); }

Poly seed_bracket(const Poly& f, const Poly& g, int max_degree) {
  if (f.kind() != g.kind()) throw InvalidInput("coordinate kind mismatch");
  if (f.n() != g.n()) throw InvalidInput("chain size mismatch");
  const int n = f.n();
  Poly out(f.kind(), n);
  std::vector<int> shifts;
  for (const auto& [mf, cf] : f.terms()) {
    const int df = mf.degree();
    for (const auto& [mg, cg] : g.terms()) {
      if (max_degree >= 0 && df + mg.degree() - 2 > max_degree) continue;
      shifts.clear();
      for (const Factor& a : mf) {
        for (const Factor& b : mg) {
          int d = a.site - b.site;
          if (n > 0) d = ((d % n) + n) % n;
          shifts.push_back(d);
        }
      }
      std::sort(shifts.begin(), shifts.end());
      shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());
      for (int d : shifts) {
        Monomial h = mg.shifted(d);
        if (n > 0) h = h.reduced(n);
        accumulate_bracket(mf, h, cf * cg, out, true);
      }
    }
  }
  out.prune();
  return out;
}

namespace {

int cyclic_abs(int s, int n) {
  if (n <= 0) return std::abs(s);
  int r = ((s % n) + n) % n;
  return std::min(r, n - r);
}

}  // namespace

Poly symmetric_align(const Poly& f, int n) {
  Poly out(f.kind(), n);
  for (const auto& [m0, c] : f.terms()) {
    Monomial m = canonical_monomial(m0, f.n() > 0 ? f.n() : 0);
    if (m.is_constant()) {
      out.add(m, c);
      continue;
    }
    int best_pivot = 0, best_reach = std::numeric_limits<int>::max();
    for (const Factor& p : m) {
      int reach = std::max(p.site - m.min_site(), m.max_site() - p.site);
      if (reach < best_reach || (reach == best_reach && p.site > best_pivot)) {
        best_reach = reach;
        best_pivot = p.site;
      }
    }
    out.add(m.shifted(-best_pivot), c);
  }
  out.prune(0.0);
  return out;
}

std::map<int, Poly> symmetric_decompose(const Poly& f) {
  std::map<int, Poly> parts;
  for (const auto& [m, c] : f.terms()) {
    int d = 0;
    for (const Factor& x : m) d = std::max(d, cyclic_abs(x.site, f.n()));
    auto it = parts.find(d);
    if (it == parts.end()) it = parts.emplace(d, Poly(f.kind(), f.n())).first;
    it->second.add(m, c);
  }
  return parts;
}

FieldSeed field_seed(const Poly& f) {
  FieldSeed fs{Poly(f.kind(), f.n()), Poly(f.kind(), f.n()), std::max(f.max_degree() - 1, 0)};
  for (const auto& [m, c] : f.terms()) {
    for (int i = 0; i < m.size(); ++i) {
      const Factor x = m[i];
      std::vector<Factor> v(m.begin(), m.end());
      if (x.b > 0) {
        v[i].b = static_cast<uint8_t>(x.b - 1);
        fs.x1.add(Monomial::from_factors(v).shifted(-x.site), c * double(x.b));
        v[i].b = x.b;
      }
      if (x.a > 0) {
        v[i].a = static_cast<uint8_t>(x.a - 1);
        fs.xn1.add(Monomial::from_factors(v).shifted(-x.site), -c * double(x.a));
      }
    }
  }
  fs.x1.prune(0.0);
  fs.xn1.prune(0.0);
  return fs;
}

double field_norm(const FieldSeed& fs, double R) { return poly_norm(fs.x1, R) + poly_norm(fs.xn1, R); }

namespace {

void check_state(const Poly& f, const std::vector<double>& z, int n) {
  if (f.kind() != Kind::Real) throw InvalidInput("evaluation needs a real polynomial");
  if (n < 1 || static_cast<int>(z.size()) != 2 * n) throw InvalidInput("state length must be 2n");
}

inline int wrap(int s, int n) { return ((s % n) + n) % n; }

inline double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

double evaluate(const Poly& f, const std::vector<double>& z, int n) {
  check_state(f, z, n);
  double s = 0.0;
  for (const auto& [m, c] : f.terms()) {
    double v = c.real();
    for (const Factor& x : m) {
      int j = wrap(x.site, n);
      v *= ipow(z[j], x.a) * ipow(z[n + j], x.b);
    }
    s += v;
  }
  return s;
}

double evaluate_cyclic(const Poly& seed, const std::vector<double>& z, int n) {
  check_state(seed, z, n);
  double s = 0.0;
  for (const auto& [m, c] : seed.terms()) {
    for (int l = 0; l < n; ++l) {
      double v = c.real();
      for (const Factor& x : m) {
        int j = wrap(x.site - l, n);
        v *= ipow(z[j], x.a) * ipow(z[n + j], x.b);
      }
      s += v;
    }
  }
  return s;
}

std::vector<double> gradient_cyclic(const Poly& seed, const std::vector<double>& z, int n) {
  check_state(seed, z, n);
  std::vector<double> g(2 * n, 0.0);
  std::vector<int> idx;
  std::vector<double> fx, fy;
  for (const auto& [m, c] : seed.terms()) {
    const int k = m.size();
    idx.resize(k);
    fx.resize(k);
    fy.resize(k);
    for (int l = 0; l < n; ++l) {
      for (int i = 0; i < k; ++i) {
        idx[i] = wrap(m[i].site - l, n);
        fx[i] = ipow(z[idx[i]], m[i].a);
        fy[i] = ipow(z[n + idx[i]], m[i].b);
      }
      for (int i = 0; i < k; ++i) {
        double others = c.real();
        for (int t = 0; t < k; ++t)
          if (t != i) others *= fx[t] * fy[t];
        const int j = idx[i];
        if (m[i].a > 0) g[j] += others * m[i].a * ipow(z[j], m[i].a - 1) * fy[i];
        if (m[i].b > 0) g[n + j] += others * m[i].b * fx[i] * ipow(z[n + j], m[i].b - 1);
      }
    }
  }
  return g;
}

std::vector<double> field_eval(const Poly& seed, const std::vector<double>& z, int n) {
  std::vector<double> g = gradient_cyclic(seed, z, n);
  std::vector<double> X(2 * n);
  for (int j = 0; j < n; ++j) {
    X[j] = g[n + j];
    X[n + j] = -g[j];
  }
  return X;
}

}  // namespace kgnf
