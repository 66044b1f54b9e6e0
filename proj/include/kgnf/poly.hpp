#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kgnf {

using cplx = std::complex<double>;

/// Coordinate kind of a polynomial: real canonical (x, y) or complex
/// Birkhoff (xi, eta).
enum class Kind { Real, Birkhoff };

const char* kind_name(Kind k);

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One site of a monomial: exponents of the first block variable (x or xi)
/// and of the second block variable (y or eta).
struct Factor {
  int16_t site;
  uint8_t a;
  uint8_t b;
};

/**
 * Sparse monomial over chain sites.  Factors are kept sorted by site with
 * strictly positive total exponent per stored site.
 */
class Monomial {
 public:
  static constexpr int kMaxSites = 16;

  Monomial() = default;

  /// Builds from unsorted factors; duplicate sites are merged and empty ones dropped.
  static Monomial from_factors(std::vector<Factor> fs);
  static Monomial single(int site, int a, int b);

  int size() const { return n_; }
  const Factor& operator[](int i) const { return f_[i]; }
  const Factor* begin() const { return f_.data(); }
  const Factor* end() const { return f_.data() + n_; }

  int degree() const;
  int degree_a() const;
  int degree_b() const;
  bool is_constant() const { return n_ == 0; }

  int min_site() const { return n_ ? f_[0].site : 0; }
  int max_site() const { return n_ ? f_[n_ - 1].site : 0; }
  int diameter() const { return max_site() - min_site(); }

  /// Exponent pair at a site, (0, 0) if absent.
  std::pair<int, int> exps(int site) const;

  Monomial shifted(int d) const;
  /// Sites reduced mod n into [0, n); coinciding sites merge.
  Monomial reduced(int n) const;
  Monomial operator*(const Monomial& o) const;
  /// Exchanges the roles of the two variable blocks.
  Monomial swapped() const;

  bool operator==(const Monomial& o) const;
  bool operator!=(const Monomial& o) const { return !(*this == o); }
  /// Graded lexicographic order over (degree, then (site, a, b) sequence).
  bool operator<(const Monomial& o) const;

  std::size_t hash() const;
  std::string str(Kind k) const;

 private:
  void push(Factor f);
  std::array<Factor, kMaxSites> f_{};
  uint8_t n_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/**
 * Sparse polynomial in the 2N chain variables.  Used both for seeds of
 * cyclically symmetric functions and for fully realized polynomials.
 *
 * A chain size n = 0 means free site indices (any integer); n > 0 keeps
 * every site in [0, n).
 */
class Poly {
 public:
  using Map = std::unordered_map<Monomial, cplx, MonomialHash>;

  explicit Poly(Kind kind = Kind::Real, int n = 0);

  Kind kind() const { return kind_; }
  int n() const { return n_; }
  bool is_free() const { return n_ == 0; }
  const Map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Accumulates c onto monomial m (reduced mod n when bound).
  void add(const Monomial& m, cplx c);
  cplx coeff(const Monomial& m) const;
  void set_n(int n);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(cplx s);

  /// Terms sorted in graded lexicographic order.
  std::vector<std::pair<Monomial, cplx>> sorted() const;

  int max_degree() const;
  int min_degree() const;
  Poly homogeneous(int d) const;
  Poly truncated(int max_deg) const;
  double max_abs() const;

  /// Drops coefficients with |c| <= rel * max|c| (and exact zeros).
  void prune(double rel = 1e-15);
  /// Forces zero imaginary parts; throws if an imaginary part exceeds tol * max|c|.
  void make_real(double tol = 1e-14);

 private:
  Kind kind_;
  int n_;
  Map terms_;
};

Poly operator+(Poly a, const Poly& b);
Poly operator-(Poly a, const Poly& b);
Poly operator*(cplx s, Poly a);
/// Polynomial product.
Poly multiply(const Poly& f, const Poly& g);

/// Largest coefficient difference between two polynomials of the same kind.
double max_coeff_diff(const Poly& f, const Poly& g);

/// {f, g} = sum_l (df/dz_l dg/dw_l - df/dw_l dg/dz_l) over canonical pairs
/// (x, y) or (xi, eta).  Both operands must share kind and chain binding.
Poly poisson_bracket(const Poly& f, const Poly& g);
/// Bracket of two monomials, accumulated with weight c into out.  With
/// canonical set, every produced monomial is stored by its rotation-class
/// representative.
void accumulate_bracket(const Monomial& f, const Monomial& g, cplx c, Poly& out, bool canonical = false);

/// ||f||_R = sum over terms of R^deg |c|.
double poly_norm(const Poly& f, double R = 1.0);

/// x = (xi + i eta)/sqrt2, y = i(xi - i eta)/sqrt2.
Poly to_complex(const Poly& f);
Poly to_real(const Poly& f);

/// Largest violation of b_{k,j} = i^{|j|+|k|} conj(b_{j,k}) on a Birkhoff polynomial.
double reality_defect(const Poly& f);

struct SupportInfo {
  std::vector<int> sites;
  int distance = 0;
  bool left_aligned = true;
};

SupportInfo support_info(const Poly& f);
/// Interaction distance of a monomial; on a bound ring the smallest
/// diameter over all rotations.
int interaction_distance(const Monomial& m, int n);
/// Canonical representative of the rotation class of m (minimal site 0).
Monomial canonical_monomial(const Monomial& m, int n);
/// Reseeds every monomial to its canonical left-aligned representative.
Poly left_align(const Poly& f);

/// Disjoint split of a seed by interaction distance m.
std::map<int, Poly> decay_decompose(const Poly& f);

struct DecayProfile {
  std::vector<std::pair<int, double>> norms;
  double C = 0.0;
  double sigma = 0.0;
  std::string method;
};

/// Per-part norms with a fitted rate.  The rate is anchored at the leading
/// part: the largest sigma with ||f^(m)|| <= ||f^(m0)|| e^{-sigma (m - m0)}.
/// Parts below floor * max part are ignored for the rate.  C is the tight
/// envelope max_m ||f^(m)|| e^{sigma m}.
DecayProfile fit_decay(const std::map<int, Poly>& parts, double floor = 1e-13);
DecayProfile fit_decay(const Poly& f, double floor = 1e-13);
/// Tight envelope constant at a prescribed rate.
double envelope_constant(const std::map<int, Poly>& parts, double sigma);
double envelope_constant(const Poly& f, double sigma);
/// Drops distance parts beyond the last one whose norm reaches rel * ref, where
/// ref defaults (ref <= 0) to the largest part norm of f.
Poly truncate_tail(const Poly& f, double rel = 1e-14, double ref = 0.0);
/// Largest per-distance part norm.
double max_part_norm(const Poly& f);

}  // namespace kgnf
