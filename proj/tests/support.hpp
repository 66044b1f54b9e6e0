#pragma once

// Independent oracles and generators shared by the unit and acceptance tests.
// The dense polynomial here never calls the library's algebra: exponents are
// plain vectors over all 2n variables and brackets come from term-by-term
// differentiation.

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include "kgnf/poly.hpp"

namespace kgtest {

using kgnf::cplx;
using kgnf::Factor;
using kgnf::Kind;
using kgnf::Monomial;
using kgnf::Poly;

/// Exponents (a_0..a_{n-1}, b_0..b_{n-1}) of a monomial in the 2n ring variables.
using Key = std::vector<int>;

struct Dense {
  int n = 0;
  std::map<Key, cplx> t;

  explicit Dense(int n_ = 0) : n(n_) {}

  void add(const Key& k, cplx c) {
    cplx& v = t[k];
    v += c;
    if (v == cplx{}) t.erase(k);
  }
  Dense& operator+=(const Dense& o) {
    for (const auto& [k, c] : o.t) add(k, c);
    return *this;
  }
  Dense& operator-=(const Dense& o) {
    for (const auto& [k, c] : o.t) add(k, -c);
    return *this;
  }
  Dense scaled(cplx s) const {
    Dense out(n);
    for (const auto& [k, c] : t) out.add(k, s * c);
    return out;
  }
};

inline Dense operator+(Dense a, const Dense& b) { return a += b; }
inline Dense operator-(Dense a, const Dense& b) { return a -= b; }

inline int wrap(int s, int n) { return ((s % n) + n) % n; }

/// Sites of a (possibly free) polynomial read mod n, without any shift sum.
inline Dense dense_from(const Poly& f, int n) {
  Dense d(n);
  for (const auto& [m, c] : f.terms()) {
    Key k(2 * n, 0);
    for (const Factor& x : m) {
      k[wrap(x.site, n)] += x.a;
      k[n + wrap(x.site, n)] += x.b;
    }
    d.add(k, c);
  }
  return d;
}

/// Sum of the n cyclic translates of a seed.
inline Dense dense_realize(const Poly& seed, int n) {
  Dense d(n);
  for (const auto& [m, c] : seed.terms()) {
    for (int l = 0; l < n; ++l) {
      Key k(2 * n, 0);
      for (const Factor& x : m) {
        k[wrap(x.site + l, n)] += x.a;
        k[n + wrap(x.site + l, n)] += x.b;
      }
      d.add(k, c);
    }
  }
  return d;
}

inline Dense derivative(const Dense& f, int var) {
  Dense out(f.n);
  for (const auto& [k, c] : f.t) {
    if (k[var] == 0) continue;
    Key k2 = k;
    k2[var] -= 1;
    out.add(k2, c * double(k[var]));
  }
  return out;
}

inline Dense product(const Dense& f, const Dense& g) {
  Dense out(f.n);
  for (const auto& [kf, cf] : f.t)
    for (const auto& [kg, cg] : g.t) {
      Key k(kf.size());
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = kf[i] + kg[i];
      out.add(k, cf * cg);
    }
  return out;
}

/// {f, g} = sum_l df/dx_l dg/dy_l - df/dy_l dg/dx_l (first block against second).
inline Dense bracket(const Dense& f, const Dense& g) {
  Dense out(f.n);
  for (int l = 0; l < f.n; ++l) {
    out += product(derivative(f, l), derivative(g, f.n + l));
    out -= product(derivative(f, f.n + l), derivative(g, l));
  }
  return out;
}

inline double max_diff(const Dense& f, const Dense& g) {
  double mx = 0.0;
  for (const auto& [k, c] : f.t) {
    auto it = g.t.find(k);
    mx = std::max(mx, std::abs(c - (it == g.t.end() ? cplx{} : it->second)));
  }
  for (const auto& [k, c] : g.t)
    if (!f.t.count(k)) mx = std::max(mx, std::abs(c));
  return mx;
}

inline double max_abs(const Dense& f) {
  double mx = 0.0;
  for (const auto& [k, c] : f.t) mx = std::max(mx, std::abs(c));
  return mx;
}

inline Dense truncated(const Dense& f, int max_deg) {
  Dense out(f.n);
  for (const auto& [k, c] : f.t) {
    int d = 0;
    for (int e : k) d += e;
    if (d <= max_deg) out.add(k, c);
  }
  return out;
}

/// Real value at z = (x_0..x_{n-1}, y_0..y_{n-1}).
inline double eval(const Dense& f, const std::vector<double>& z) {
  cplx s = 0.0;
  for (const auto& [k, c] : f.t) {
    double v = 1.0;
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i]) v *= std::pow(z[i], k[i]);
    s += c * v;
  }
  return s.real();
}

/// Random real seed: 1..max_terms monomials of degree 1..max_deg on sites [0, max_site].
inline Poly random_seed(std::mt19937_64& rng, int max_deg = 4, int max_site = 2, int max_terms = 4,
                        int min_deg = 1) {
  std::uniform_int_distribution<int> nt(1, max_terms), dg(min_deg, max_deg), site(0, max_site), blk(0, 1);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Poly f(Kind::Real);
  const int k = nt(rng);
  for (int t = 0; t < k; ++t) {
    std::vector<Factor> fs;
    const int d = dg(rng);
    for (int i = 0; i < d; ++i) {
      const int b = blk(rng);
      fs.push_back({static_cast<int16_t>(site(rng)), static_cast<uint8_t>(1 - b), static_cast<uint8_t>(b)});
    }
    f.add(Monomial::from_factors(fs), coef(rng));
  }
  f.prune(0.0);
  return f;
}

/// Random homogeneous real seed of degree deg.
inline Poly random_homogeneous(std::mt19937_64& rng, int deg, int max_site = 2, int max_terms = 4) {
  return random_seed(rng, deg, max_site, max_terms, deg);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, int len, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(len);
  for (double& x : v) x = g(rng);
  return v;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm_inf(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace kgtest
