#pragma once

#include <map>
#include <vector>

#include "kgnf/poly.hpp"

namespace kgnf {

enum class Alignment { Left, Symmetric };

const char* alignment_name(Alignment a);

/// A cyclically symmetric function F = f^+ on a ring of n sites, held by its seed.
struct CyclicFn {
  Poly seed;
  int n = 0;
  Alignment alignment = Alignment::Left;
};

/// Default cap on the ring size accepted by realize().
constexpr int kRealizeCap = 12;

/// tau^l: every site index decreases by l (mod n when the polynomial is bound).
Poly cyclic_shift(const Poly& f, int l);

/// Full 2n-variable polynomial sum_{l=0}^{n-1} tau^l f.  Test oracle only.
Poly realize(const Poly& seed, int n, int cap = kRealizeCap);
Poly realize(const CyclicFn& F, int cap = kRealizeCap);

/// Canonical seed of {f^+, g^+}: the left-aligned form of {f, g^+}, summing
/// only over shifts of g that overlap f.  Free seeds shift over Z, bound ones mod n.
/// Pairs whose bracket degree exceeds max_degree (when >= 0) are skipped.
Poly seed_bracket(const Poly& f, const Poly& g, int max_degree = -1);

/// Reseeds every monomial around one of its own sites so that it reaches
/// as little as possible to either side of site 0.  With n > 0 the result is
/// bound to the ring (site -m stored as n - m).
Poly symmetric_align(const Poly& f, int n);
/// Disjoint split by symmetric distance max_i |s_i| (cyclic when bound).
std::map<int, Poly> symmetric_decompose(const Poly& f);

/// The pair (X_1, X_{N+1}) of components of the Hamiltonian field of f^+:
/// X_1 = dF/dy_0 and X_{N+1} = -dF/dx_0 (xi/eta for Birkhoff seeds).
struct FieldSeed {
  Poly x1;
  Poly xn1;
  int degree = 0;
};

FieldSeed field_seed(const Poly& f);
double field_norm(const FieldSeed& fs, double R);

/// F(z) for a real seed at a ring state z = (x_0..x_{n-1}, y_0..y_{n-1}).
double evaluate_cyclic(const Poly& seed, const std::vector<double>& z, int n);
/// Gradient (dF/dx_0..dF/dx_{n-1}, dF/dy_0..dF/dy_{n-1}) of a real seed's cyclic sum.
std::vector<double> gradient_cyclic(const Poly& seed, const std::vector<double>& z, int n);
/// Hamiltonian field X_F(z) = (dF/dy, -dF/dx).
std::vector<double> field_eval(const Poly& seed, const std::vector<double>& z, int n);

/// Polynomial evaluation of a (non-cyclic) real polynomial at z on a ring of n sites.
double evaluate(const Poly& f, const std::vector<double>& z, int n);

}  // namespace kgnf
