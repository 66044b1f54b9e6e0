#include "kgnf/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace kgnf {

const char* kind_name(Kind k) { return k == Kind::Real ? "real" : "birkhoff"; }

// ---------------------------------------------------------------- Monomial

void Monomial::push(Factor f) {
  if (n_ >= kMaxSites) throw std::length_error("monomial exceeds the supported number of sites");
  f_[n_++] = f;
}

Monomial Monomial::from_factors(std::vector<Factor> fs) {
  std::sort(fs.begin(), fs.end(), [](const Factor& l, const Factor& r) { return l.site < r.site; });
  Monomial m;
  for (const Factor& f : fs) {
    if (f.a == 0 && f.b == 0) continue;
    if (m.n_ > 0 && m.f_[m.n_ - 1].site == f.site) {
      Factor& last = m.f_[m.n_ - 1];
      if (last.a + f.a > 255 || last.b + f.b > 255) throw std::length_error("exponent overflow");
      last.a = static_cast<uint8_t>(last.a + f.a);
      last.b = static_cast<uint8_t>(last.b + f.b);
    } else {
      m.push(f);
    }
  }
  return m;
}

Monomial Monomial::single(int site, int a, int b) {
  if (a < 0 || b < 0) throw InvalidInput("negative exponent");
  return from_factors({Factor{static_cast<int16_t>(site), static_cast<uint8_t>(a), static_cast<uint8_t>(b)}});
}

int Monomial::degree() const {
  int d = 0;
  for (const Factor& f : *this) d += f.a + f.b;
  return d;
}

int Monomial::degree_a() const {
  int d = 0;
  for (const Factor& f : *this) d += f.a;
  return d;
}

int Monomial::degree_b() const {
  int d = 0;
  for (const Factor& f : *this) d += f.b;
  return d;
}

std::pair<int, int> Monomial::exps(int site) const {
  for (const Factor& f : *this)
    if (f.site == site) return {f.a, f.b};
  return {0, 0};
}

Monomial Monomial::shifted(int d) const {
  Monomial m = *this;
  for (int i = 0; i < n_; ++i) {
    int s = f_[i].site + d;
    if (s < std::numeric_limits<int16_t>::min() || s > std::numeric_limits<int16_t>::max())
      throw std::out_of_range("site index overflow");
    m.f_[i].site = static_cast<int16_t>(s);
  }
  return m;
}

Monomial Monomial::reduced(int n) const {
  if (n <= 0) return *this;
  bool inside = true;
  for (const Factor& f : *this)
    if (f.site < 0 || f.site >= n) inside = false;
  if (inside) return *this;
  std::array<Factor, kMaxSites> fs;
  for (int i = 0; i < n_; ++i) {
    fs[i] = f_[i];
    fs[i].site = static_cast<int16_t>(((f_[i].site % n) + n) % n);
  }
  // insertion sort: at most kMaxSites entries, mostly a rotation of a sorted run
  for (int i = 1; i < n_; ++i) {
    Factor x = fs[i];
    int j = i - 1;
    while (j >= 0 && fs[j].site > x.site) {
      fs[j + 1] = fs[j];
      --j;
    }
    fs[j + 1] = x;
  }
  Monomial m;
  for (int i = 0; i < n_; ++i) {
    const Factor& f = fs[i];
    if (m.n_ > 0 && m.f_[m.n_ - 1].site == f.site) {
      Factor& last = m.f_[m.n_ - 1];
      if (last.a + f.a > 255 || last.b + f.b > 255) throw std::length_error("exponent overflow");
      last.a = static_cast<uint8_t>(last.a + f.a);
      last.b = static_cast<uint8_t>(last.b + f.b);
    } else {
      m.f_[m.n_++] = f;
    }
  }
  return m;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial m;
  int i = 0, j = 0;
  while (i < n_ || j < o.n_) {
    if (j >= o.n_ || (i < n_ && f_[i].site < o.f_[j].site)) {
      m.push(f_[i++]);
    } else if (i >= n_ || o.f_[j].site < f_[i].site) {
      m.push(o.f_[j++]);
    } else {
      if (f_[i].a + o.f_[j].a > 255 || f_[i].b + o.f_[j].b > 255) throw std::length_error("exponent overflow");
      m.push(Factor{f_[i].site, static_cast<uint8_t>(f_[i].a + o.f_[j].a),
                    static_cast<uint8_t>(f_[i].b + o.f_[j].b)});
      ++i;
      ++j;
    }
  }
  return m;
}

Monomial Monomial::swapped() const {
  Monomial m = *this;
  for (int i = 0; i < n_; ++i) std::swap(m.f_[i].a, m.f_[i].b);
  return m;
}

bool Monomial::operator==(const Monomial& o) const {
  if (n_ != o.n_) return false;
  for (int i = 0; i < n_; ++i)
    if (f_[i].site != o.f_[i].site || f_[i].a != o.f_[i].a || f_[i].b != o.f_[i].b) return false;
  return true;
}

bool Monomial::operator<(const Monomial& o) const {
  int d1 = degree(), d2 = o.degree();
  if (d1 != d2) return d1 < d2;
  int k = std::min(n_, o.n_);
  for (int i = 0; i < k; ++i) {
    if (f_[i].site != o.f_[i].site) return f_[i].site < o.f_[i].site;
    if (f_[i].a != o.f_[i].a) return f_[i].a > o.f_[i].a;
    if (f_[i].b != o.f_[i].b) return f_[i].b > o.f_[i].b;
  }
  return n_ < o.n_;
}

std::size_t Monomial::hash() const {
  uint64_t h = 1469598103934665603ULL ^ n_;
  for (const Factor& f : *this) {
    uint32_t w = (static_cast<uint32_t>(static_cast<uint16_t>(f.site)) << 16) | (uint32_t(f.a) << 8) | f.b;
    h ^= w;
    h *= 1099511628211ULL;
    h ^= h >> 29;
  }
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  return static_cast<std::size_t>(h);
}

std::string Monomial::str(Kind k) const {
  if (n_ == 0) return "1";
  const char* va = k == Kind::Real ? "x" : "xi";
  const char* vb = k == Kind::Real ? "y" : "eta";
  std::ostringstream os;
  bool first = true;
  auto put = [&](const char* v, int site, int e) {
    if (e == 0) return;
    if (!first) os << '*';
    first = false;
    os << v << site;
    if (e > 1) os << '^' << e;
  };
  for (const Factor& f : *this) {
    put(va, f.site, f.a);
    put(vb, f.site, f.b);
  }
  return os.str();
}

namespace {

// Monomial with the exponents at `site` lowered by one in each block.
Monomial lowered(const Monomial& m, int site) {
  std::vector<Factor> fs;
  fs.reserve(m.size());
  for (const Factor& f : m) {
    if (f.site == site) {
      Factor g{f.site, static_cast<uint8_t>(f.a - 1), static_cast<uint8_t>(f.b - 1)};
      if (g.a || g.b) fs.push_back(g);
    } else {
      fs.push_back(f);
    }
  }
  return Monomial::from_factors(std::move(fs));
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

cplx ipow(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

// 2^{-d/2} with exact powers of two for even d.
double half_power(int d) {
  double s = std::ldexp(1.0, -(d / 2));
  return (d % 2) ? s * M_SQRT1_2 : s;
}

struct SiteTerm {
  int a, b;
  cplx c;
};

// Expansion of one site's factor under the coordinate change (without the
// 2^{-d/2} scale).  to_birkhoff selects the direction.
std::vector<SiteTerm> expand_site(int a, int b, bool to_birkhoff) {
  std::vector<SiteTerm> out;
  for (int p = 0; p <= a; ++p) {
    for (int q = 0; q <= b; ++q) {
      cplx c = binom(a, p) * binom(b, q);
      if (to_birkhoff) {
        // (xi + i eta)^a (i)^b (xi - i eta)^b
        c *= ipow(p) * ipow(-q) * ipow(b);
      } else {
        // (x - i y)^a (-i)^b (x + i y)^b
        c *= ipow(-p) * ipow(q) * ipow(-b);
      }
      out.push_back({a + b - p - q, p + q, c});
    }
  }
  return out;
}

Poly change_coordinates(const Poly& f, bool to_birkhoff) {
  // Accumulated in the complex kind; to_real checks and drops imaginary parts afterwards.
  Poly out(Kind::Birkhoff, f.n());
  std::vector<std::pair<std::vector<Factor>, cplx>> acc, next;
  for (const auto& [m, c] : f.terms()) {
    acc.clear();
    acc.push_back({{}, c * half_power(m.degree())});
    for (const Factor& fac : m) {
      auto terms = expand_site(fac.a, fac.b, to_birkhoff);
      next.clear();
      for (const auto& [fs, cc] : acc) {
        for (const SiteTerm& t : terms) {
          auto g = fs;
          g.push_back(Factor{fac.site, static_cast<uint8_t>(t.a), static_cast<uint8_t>(t.b)});
          next.push_back({std::move(g), cc * t.c});
        }
      }
      std::swap(acc, next);
    }
    for (auto& [fs, cc] : acc) out.add(Monomial::from_factors(std::move(fs)), cc);
  }
  out.prune(0.0);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Poly

Poly::Poly(Kind kind, int n) : kind_(kind), n_(n) {
  if (n < 0) throw InvalidInput("chain size must be non-negative");
}

void Poly::add(const Monomial& m, cplx c) {
  if (c == cplx(0.0, 0.0)) return;
  if (kind_ == Kind::Real) c.imag(0.0);
  if (n_ > 0 && (m.min_site() < 0 || m.max_site() >= n_)) {
    terms_[m.reduced(n_)] += c;
  } else {
    terms_[m] += c;
  }
}

cplx Poly::coeff(const Monomial& m) const {
  auto it = terms_.find(n_ > 0 ? m.reduced(n_) : m);
  return it == terms_.end() ? cplx{} : it->second;
}

void Poly::set_n(int n) {
  if (n < 0) throw InvalidInput("chain size must be non-negative");
  if (n == n_) return;
  Poly out(kind_, n);
  for (const auto& [m, c] : terms_) out.add(m, c);
  *this = std::move(out);
}

static void check_compatible(const Poly& a, const Poly& b) {
  if (a.kind() != b.kind()) throw InvalidInput("coordinate kind mismatch");
  if (a.n() != b.n()) throw InvalidInput("chain size mismatch");
}

Poly& Poly::operator+=(const Poly& o) {
  check_compatible(*this, o);
  for (const auto& [m, c] : o.terms_) terms_[m] += c;
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  check_compatible(*this, o);
  for (const auto& [m, c] : o.terms_) terms_[m] -= c;
  return *this;
}

Poly& Poly::operator*=(cplx s) {
  if (kind_ == Kind::Real && s.imag() != 0.0) throw InvalidInput("complex scaling of a real polynomial");
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Poly operator+(Poly a, const Poly& b) { return a += b; }
Poly operator-(Poly a, const Poly& b) { return a -= b; }
Poly operator*(cplx s, Poly a) { return a *= s; }

std::vector<std::pair<Monomial, cplx>> Poly::sorted() const {
  std::vector<std::pair<Monomial, cplx>> v(terms_.begin(), terms_.end());
  std::sort(v.begin(), v.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  return v;
}

int Poly::max_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

int Poly::min_degree() const {
  int d = std::numeric_limits<int>::max();
  for (const auto& [m, c] : terms_) d = std::min(d, m.degree());
  return terms_.empty() ? -1 : d;
}

Poly Poly::homogeneous(int d) const {
  Poly out(kind_, n_);
  for (const auto& [m, c] : terms_)
    if (m.degree() == d) out.terms_.emplace(m, c);
  return out;
}

Poly Poly::truncated(int max_deg) const {
  Poly out(kind_, n_);
  for (const auto& [m, c] : terms_)
    if (m.degree() <= max_deg) out.terms_.emplace(m, c);
  return out;
}

double Poly::max_abs() const {
  double mx = 0.0;
  for (const auto& [m, c] : terms_) mx = std::max(mx, std::abs(c));
  return mx;
}

void Poly::prune(double rel) {
  double cut = rel * max_abs();
  for (auto it = terms_.begin(); it != terms_.end();) {
    double a = std::abs(it->second);
    if (a == 0.0 || a <= cut)
      it = terms_.erase(it);
    else
      ++it;
  }
}

void Poly::make_real(double tol) {
  double mx = max_abs();
  for (auto& [m, c] : terms_) {
    if (std::abs(c.imag()) > tol * std::max(mx, 1e-300))
      throw InvalidInput("polynomial has a non-negligible imaginary part: " + m.str(kind_));
    c.imag(0.0);
  }
  kind_ = Kind::Real;
  prune(0.0);
}

Poly multiply(const Poly& f, const Poly& g) {
  check_compatible(f, g);
  Poly out(f.kind(), f.n());
  for (const auto& [mf, cf] : f.terms())
    for (const auto& [mg, cg] : g.terms()) out.add(mf * mg, cf * cg);
  out.prune(0.0);
  return out;
}

double max_coeff_diff(const Poly& f, const Poly& g) {
  if (f.kind() != g.kind()) throw InvalidInput("coordinate kind mismatch");
  double mx = 0.0;
  for (const auto& [m, c] : f.terms()) mx = std::max(mx, std::abs(c - g.coeff(m)));
  for (const auto& [m, c] : g.terms())
    if (f.terms().find(m) == f.terms().end()) mx = std::max(mx, std::abs(c));
  return mx;
}

// ---------------------------------------------------------------- brackets

void accumulate_bracket(const Monomial& f, const Monomial& g, cplx c, Poly& out, bool canonical) {
  int i = 0, j = 0;
  bool any = false;
  Monomial prod;
  while (i < f.size() && j < g.size()) {
    if (f[i].site < g[j].site) {
      ++i;
    } else if (g[j].site < f[i].site) {
      ++j;
    } else {
      int w = int(f[i].a) * g[j].b - int(f[i].b) * g[j].a;
      if (w != 0) {
        if (!any) {
          prod = f * g;
          any = true;
        }
        Monomial t = lowered(prod, f[i].site);
        out.add(canonical ? canonical_monomial(t, out.n()) : t, c * double(w));
      }
      ++i;
      ++j;
    }
  }
}

Poly poisson_bracket(const Poly& f, const Poly& g) {
  check_compatible(f, g);
  Poly out(f.kind(), f.n());
  for (const auto& [mf, cf] : f.terms())
    for (const auto& [mg, cg] : g.terms()) accumulate_bracket(mf, mg, cf * cg, out);
  out.prune();
  return out;
}

double poly_norm(const Poly& f, double R) {
  if (!(R > 0.0)) throw InvalidInput("norm radius must be positive");
  double s = 0.0;
  for (const auto& [m, c] : f.terms()) s += std::pow(R, m.degree()) * std::abs(c);
  return s;
}

Poly to_complex(const Poly& f) {
  if (f.kind() != Kind::Real) throw InvalidInput("to_complex expects a real polynomial");
  return change_coordinates(f, true);
}

Poly to_real(const Poly& f) {
  if (f.kind() != Kind::Birkhoff) throw InvalidInput("to_real expects a Birkhoff polynomial");
  Poly out = change_coordinates(f, false);
  out.make_real();
  return out;
}

double reality_defect(const Poly& f) {
  if (f.kind() != Kind::Birkhoff) throw InvalidInput("reality condition applies to Birkhoff polynomials");
  double mx = 0.0;
  for (const auto& [m, c] : f.terms()) {
    cplx expected = ipow(m.degree()) * std::conj(c);
    const Monomial sw = m.swapped();
    cplx partner = f.coeff(sw);
    // a ring seed stores one rotation per class, which need not be sw itself
    if (partner == cplx{} && f.n() > 0) partner = f.coeff(canonical_monomial(sw, f.n()));
    mx = std::max(mx, std::abs(partner - expected));
  }
  return mx;
}

// ---------------------------------------------------------------- support

Monomial canonical_monomial(const Monomial& m, int n) {
  if (m.is_constant()) return m;
  if (n <= 0) return m.shifted(-m.min_site());
  Monomial best;
  int best_d = std::numeric_limits<int>::max();
  for (const Factor& f : m) {
    Monomial r = m.shifted(-f.site).reduced(n);
    int d = r.max_site();
    if (d < best_d || (d == best_d && r < best)) {
      best = r;
      best_d = d;
    }
  }
  return best;
}

int interaction_distance(const Monomial& m, int n) {
  if (n <= 0) return m.diameter();
  return canonical_monomial(m, n).max_site();
}

SupportInfo support_info(const Poly& f) {
  SupportInfo info;
  std::vector<int> s;
  for (const auto& [m, c] : f.terms())
    for (const Factor& fac : m) s.push_back(fac.site);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  info.sites = s;
  info.distance = s.empty() ? 0 : s.back() - s.front();
  info.left_aligned = s.empty() || s.front() == 0;
  return info;
}

Poly left_align(const Poly& f) {
  Poly out(f.kind(), f.n());
  for (const auto& [m, c] : f.terms()) out.add(canonical_monomial(m, f.n()), c);
  out.prune(0.0);
  return out;
}

std::map<int, Poly> decay_decompose(const Poly& f) {
  std::map<int, Poly> parts;
  for (const auto& [m, c] : f.terms()) {
    int d = interaction_distance(m, f.n());
    auto it = parts.find(d);
    if (it == parts.end()) it = parts.emplace(d, Poly(f.kind(), f.n())).first;
    it->second.add(m, c);
  }
  return parts;
}

DecayProfile fit_decay(const std::map<int, Poly>& parts, double floor) {
  DecayProfile p;
  p.method = "anchored";
  double mx = 0.0;
  for (const auto& [m, part] : parts) {
    double nm = poly_norm(part, 1.0);
    p.norms.push_back({m, nm});
    mx = std::max(mx, nm);
  }
  if (mx == 0.0) {
    p.sigma = std::numeric_limits<double>::infinity();
    p.C = 0.0;
    return p;
  }
  int m0 = -1;
  double n0 = 0.0;
  double sigma = std::numeric_limits<double>::infinity();
  for (const auto& [m, nm] : p.norms) {
    if (nm < floor * mx) continue;
    if (m0 < 0) {
      m0 = m;
      n0 = nm;
      continue;
    }
    sigma = std::min(sigma, std::log(n0 / nm) / double(m - m0));
  }
  p.sigma = sigma;
  if (std::isinf(sigma)) {
    p.C = m0 == 0 ? n0 : std::numeric_limits<double>::infinity();
    p.method = "single-part";
    return p;
  }
  double C = 0.0;
  for (const auto& [m, nm] : p.norms) C = std::max(C, nm * std::exp(sigma * m));
  p.C = C;
  return p;
}

DecayProfile fit_decay(const Poly& f, double floor) { return fit_decay(decay_decompose(f), floor); }

double envelope_constant(const std::map<int, Poly>& parts, double sigma) {
  double C = 0.0;
  for (const auto& [m, part] : parts) C = std::max(C, poly_norm(part, 1.0) * std::exp(sigma * m));
  return C;
}

double envelope_constant(const Poly& f, double sigma) { return envelope_constant(decay_decompose(f), sigma); }

double max_part_norm(const Poly& f) {
  std::map<int, double> norms;
  for (const auto& [m, c] : f.terms()) norms[interaction_distance(m, f.n())] += std::abs(c);
  double mx = 0.0;
  for (const auto& [m, nm] : norms) mx = std::max(mx, nm);
  return mx;
}

Poly truncate_tail(const Poly& f, double rel, double ref) {
  std::map<int, double> norms;
  std::vector<std::pair<const Monomial*, int>> dist;
  dist.reserve(f.size());
  for (const auto& [m, c] : f.terms()) {
    int d = interaction_distance(m, f.n());
    norms[d] += std::abs(c);
    dist.push_back({&m, d});
  }
  double mx = ref;
  if (mx <= 0.0)
    for (const auto& [m, nm] : norms) mx = std::max(mx, nm);
  int keep = -1;
  for (const auto& [m, nm] : norms)
    if (nm >= rel * mx) keep = m;
  if (norms.empty() || keep == norms.rbegin()->first) return f;
  Poly out(f.kind(), f.n());
  for (const auto& [mp, d] : dist)
    if (d <= keep) out.add(*mp, f.coeff(*mp));
  return out;
}

}  // namespace kgnf
