#include "kgnf/linearize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kgnf {

namespace {

std::vector<long double> cos_table(int n) {
  std::vector<long double> t(n);
  const long double w = 2.0L * std::numbers::pi_v<long double> / n;
  for (int k = 0; k < n; ++k) t[k] = std::cos(w * k);
  return t;
}

void check_row(const std::vector<double>& row) {
  const int n = static_cast<int>(row.size());
  if (n < 1) throw InvalidInput("circulant needs at least one site");
  for (int k = 1; k < n; ++k)
    if (row[k] != row[n - k]) throw InvalidInput("circulant row must be symmetric");
}

}  // namespace

std::vector<double> symmetric_dft(const std::vector<double>& row) {
  const int n = static_cast<int>(row.size());
  auto c = cos_table(n);
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    long double s = 0.0L;
    for (int j = 0; j < n; ++j) s += row[j] * c[(static_cast<long long>(j) * k) % n];
    out[k] = static_cast<double>(s);
  }
  return out;
}

std::vector<double> symmetric_idft(const std::vector<double>& spectrum) {
  const int n = static_cast<int>(spectrum.size());
  auto c = cos_table(n);
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    long double s = 0.0L;
    for (int k = 0; k < n; ++k) s += spectrum[k] * c[(static_cast<long long>(j) * k) % n];
    out[j] = static_cast<double>(s / n);
  }
  return out;
}

Circulant make_circulant(std::vector<double> row) {
  check_row(row);
  Circulant c;
  c.n = static_cast<int>(row.size());
  c.spectrum = symmetric_dft(row);
  c.row = std::move(row);
  return c;
}

Circulant build_A(double a, int n) {
  if (!(a > 0.0)) throw InvalidInput("coupling a must be positive");
  if (n < 1) throw InvalidInput("chain size must be positive");
  std::vector<double> row(n, 0.0);
  row[0] = 1.0 + 2.0 * a;
  if (n == 1) {
    row[0] = 1.0;
  } else if (n == 2) {
    row[1] = -2.0 * a;
  } else {
    row[1] -= a;
    row[n - 1] -= a;
  }
  return make_circulant(std::move(row));
}

Circulant circulant_power(const Circulant& c, double alpha) {
  std::vector<double> sp(c.n);
  for (int k = 0; k < c.n; ++k) {
    if (!(c.spectrum[k] > 0.0)) throw InvalidInput("circulant power needs a positive spectrum");
    sp[k] = std::pow(c.spectrum[k], alpha);
  }
  std::vector<double> row = symmetric_idft(sp);
  for (int k = 1; k < c.n; ++k) row[k] = row[c.n - k] = 0.5 * (row[k] + row[c.n - k]);
  Circulant out;
  out.n = c.n;
  out.row = std::move(row);
  out.spectrum = std::move(sp);
  return out;
}

std::vector<double> circulant_apply(const Circulant& c, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != c.n) throw InvalidInput("vector length does not match circulant size");
  std::vector<double> out(c.n);
  for (int i = 0; i < c.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < c.n; ++j) {
      int d = j - i;
      if (d < 0) d += c.n;
      s += c.row[d] * v[j];
    }
    out[i] = s;
  }
  return out;
}

std::vector<double> infinite_kernel(double a, double alpha, double rel) {
  if (a < 0.0) throw InvalidInput("coupling a must be non-negative");
  if (a == 0.0) return {1.0};
  const double rho = 2.0 * a / (1.0 + 2.0 * a);
  int L = 64;
  while (L < (1 << 14) && std::pow(rho, L / 2) >= 1e-25) L *= 2;
  auto c = cos_table(L);
  std::vector<long double> sp(L);
  for (int k = 0; k < L; ++k) {
    long double s = std::sin(std::numbers::pi_v<long double> * k / L);
    sp[k] = std::pow(1.0L + 4.0L * a * s * s, static_cast<long double>(alpha));
  }
  std::vector<double> ker(L / 2 + 1);
  for (int m = 0; m <= L / 2; ++m) {
    long double s = 0.0L;
    for (int k = 0; k < L; ++k) s += sp[k] * c[(static_cast<long long>(m) * k) % L];
    ker[m] = static_cast<double>(s / L);
  }
  int last = 0;
  for (int m = 0; m <= L / 2; ++m)
    if (std::abs(ker[m]) >= rel * std::abs(ker[0])) last = m;
  ker.resize(last + 1);
  return ker;
}

namespace {

Circulant identity_circulant(int n) {
  std::vector<double> row(n, 0.0);
  row[0] = 1.0;
  return make_circulant(std::move(row));
}

Poly quartic_seed(const std::vector<double>& c, double tail, double prune) {
  const int K = static_cast<int>(c.size()) - 1;
  Poly out(Kind::Real, 0);
  auto cof = [&](int i) { return c[std::abs(i)]; };
  for (int i1 = -K; i1 <= K; ++i1)
    for (int i2 = i1; i2 <= K; ++i2)
      for (int i3 = i2; i3 <= K; ++i3)
        for (int i4 = i3; i4 <= K; ++i4) {
          int idx[4] = {i1, i2, i3, i4};
          // Multinomial 4! / prod(multiplicity!) over runs of equal indices.
          double mult = 24.0;
          int run = 1;
          for (int t = 1; t <= 4; ++t) {
            if (t < 4 && idx[t] == idx[t - 1]) {
              ++run;
            } else {
              for (int f = 2; f <= run; ++f) mult /= f;
              run = 1;
            }
          }
          double v = 0.25 * mult * cof(i1) * cof(i2) * cof(i3) * cof(i4);
          if (v == 0.0) continue;
          std::vector<Factor> fs;
          for (int t = 0; t < 4; ++t) fs.push_back({static_cast<int16_t>(idx[t]), 1, 0});
          out.add(canonical_monomial(Monomial::from_factors(fs), 0), v);
        }
  out = truncate_tail(out, tail);
  out.prune(prune);
  return out;
}

}  // namespace

LinearNF linear_normalize(double a, int n, const LinearOptions& opt) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidInput("coupling a must be non-negative");
  if (n < 1) throw InvalidInput("chain size n must be positive");
  if (opt.quartic_sign != 1 && opt.quartic_sign != -1) throw InvalidInput("quartic sign must be +1 or -1");
  LinearNF nf;
  nf.a = a;
  nf.n = n;
  nf.quartic_sign = opt.quartic_sign;
  nf.mu = a / (1.0 + 2.0 * a);
  nf.sigma0 = a > 0.0 ? -std::log(2.0 * nf.mu) : std::numeric_limits<double>::infinity();
  nf.sigma1 = 0.5 * nf.sigma0;

  nf.A = a > 0.0 ? build_A(a, n) : identity_circulant(n);
  nf.quarter = circulant_power(nf.A, 0.25);
  nf.mquarter = circulant_power(nf.A, -0.25);
  double s = 0.0;
  for (double l : nf.A.spectrum) s += std::sqrt(l);
  nf.omega = s / n;

  nf.half_kernel = infinite_kernel(a, 0.5, opt.kernel_rel);
  nf.mquarter_kernel = infinite_kernel(a, -0.25, opt.kernel_rel);

  nf.h_omega = Poly(Kind::Real, 0);
  nf.h_omega.add(Monomial::single(0, 2, 0), 0.5 * nf.omega);
  nf.h_omega.add(Monomial::single(0, 0, 2), 0.5 * nf.omega);

  // Terms at distances m = 0 mod n alias onto the diagonal, which H_Omega carries.
  nf.zeta0 = Poly(Kind::Real, 0);
  for (int m = 1; m < static_cast<int>(nf.half_kernel.size()); ++m) {
    if (m % n == 0) continue;
    const double b = nf.half_kernel[m];
    nf.zeta0.add(Monomial::from_factors({{0, 1, 0}, {static_cast<int16_t>(m), 1, 0}}), b);
    nf.zeta0.add(Monomial::from_factors({{0, 0, 1}, {static_cast<int16_t>(m), 0, 1}}), b);
  }
  nf.zeta0 = truncate_tail(nf.zeta0, opt.tail);
  nf.zeta0.prune(opt.prune);

  nf.h1 = quartic_seed(nf.mquarter_kernel, opt.tail, opt.prune);
  nf.h1 *= double(opt.quartic_sign);
  return nf;
}

std::vector<double> apply_linear(const LinearNF& nf, const std::vector<double>& z) {
  if (static_cast<int>(z.size()) != 2 * nf.n) throw InvalidInput("state length must be 2n");
  std::vector<double> x(z.begin(), z.begin() + nf.n), y(z.begin() + nf.n, z.end());
  auto q = circulant_apply(nf.quarter, x);
  auto p = circulant_apply(nf.mquarter, y);
  q.insert(q.end(), p.begin(), p.end());
  return q;
}

std::vector<double> apply_linear_inverse(const LinearNF& nf, const std::vector<double>& w) {
  if (static_cast<int>(w.size()) != 2 * nf.n) throw InvalidInput("state length must be 2n");
  std::vector<double> q(w.begin(), w.begin() + nf.n), p(w.begin() + nf.n, w.end());
  auto x = circulant_apply(nf.mquarter, q);
  auto y = circulant_apply(nf.quarter, p);
  x.insert(x.end(), y.begin(), y.end());
  return x;
}

std::vector<double> zeta0_coefficients(const LinearNF& nf) {
  const int n = nf.n;
  const int K = static_cast<int>(nf.half_kernel.size()) - 1;
  std::vector<double> b;
  for (int m = 1; m <= n / 2; ++m) {
    // Periodic entry M_N(m) = sum over k of M(|m + kN|).
    double s = 0.0;
    for (int k = -(K / n) - 2; k <= K / n + 2; ++k) {
      int d = std::abs(m + k * n);
      if (d <= K) s += nf.half_kernel[d];
    }
    b.push_back(2 * m == n ? 0.25 * s : 0.5 * s);
  }
  return b;
}

}  // namespace kgnf
