#pragma once

#include <vector>

#include "kgnf/poly.hpp"

namespace kgnf {

/// Symmetric N x N circulant matrix, A_{j,k} = row[(k - j) mod N].
struct Circulant {
  int n = 0;
  std::vector<double> row;
  /// Eigenvalues, the DFT of the first row.
  std::vector<double> spectrum;
};

/// Real DFT of a symmetric row, accumulated in long double.
std::vector<double> symmetric_dft(const std::vector<double>& row);
/// Inverse of symmetric_dft.
std::vector<double> symmetric_idft(const std::vector<double>& spectrum);

Circulant make_circulant(std::vector<double> row);
/// A = (1 + 2a)[I - mu (tau + tau^T)], mu = a / (1 + 2a).  Requires a > 0.
Circulant build_A(double a, int n);
/// Spectrum mapped lambda -> lambda^alpha.  Requires a positive spectrum.
Circulant circulant_power(const Circulant& c, double alpha);
std::vector<double> circulant_apply(const Circulant& c, const std::vector<double>& v);

/// First-row entries k_0, k_1, ... of A^alpha on the infinite chain, cut after
/// the last entry with |k_m| >= rel * |k_0|.  a = 0 gives {1}.
std::vector<double> infinite_kernel(double a, double alpha, double rel = 1e-16);

struct LinearNF {
  double a = 0.0;
  double mu = 0.0;
  double omega = 1.0;
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  int n = 0;
  int quartic_sign = 1;

  Circulant A, quarter, mquarter;
  /// Infinite-chain kernels of A^{1/2} and A^{-1/4}, cut as in infinite_kernel.
  std::vector<double> half_kernel, mquarter_kernel;

  /// Real free seeds in the (q, p) variables.
  Poly h_omega, zeta0, h1;
};

struct LinearOptions {
  int quartic_sign = 1;
  double kernel_rel = 1e-16;
  double tail = 1e-14;
  double prune = 1e-15;
};

/// H_0 = H_Omega + Z_0 after q = A^{1/4} x, p = A^{-1/4} y, plus the quartic
/// seed of H_1 in the new variables.  a = 0 is the decoupled chain.
LinearNF linear_normalize(double a, int n, const LinearOptions& opt = {});

/// (x, y) -> (q, p).
std::vector<double> apply_linear(const LinearNF& nf, const std::vector<double>& z);
/// (q, p) -> (x, y).
std::vector<double> apply_linear_inverse(const LinearNF& nf, const std::vector<double>& w);

/// Coefficient b_m of the distance-m part b_m [q_0 (q_m + q_{N-m}) + p_0 (p_m + p_{N-m})]
/// of zeta_0 on a ring of n sites, m = 1 .. n/2.
std::vector<double> zeta0_coefficients(const LinearNF& nf);

}  // namespace kgnf
