#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgnf/linearize.hpp"
#include "kgnf/poly.hpp"

namespace kgnf {

/// Neumann series for the homological equation failed to converge.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int step) : std::runtime_error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

/// L_Omega f = {H_Omega, f}: xi^j eta^k -> i Omega (|k| - |j|) xi^j eta^k.  Birkhoff kind
/// (real input is converted first).
Poly lie_omega(const Poly& f, double omega);
Poly project_kernel(const Poly& f);
Poly project_range(const Poly& f);
/// Division by i Omega (|k| - |j|); throws when the kernel part exceeds tol * max|c|.
Poly invert_lie_omega(const Poly& g, double omega, double tol = 1e-12);

/// Seed post-processing shared by every bracket of the engine.
struct Cleanup {
  double prune = 1e-15;
  /// Distance-tail cut applied to free seeds; 0 disables it.
  double tail = 1e-14;
  void apply(Poly& f) const;
  /// Same cuts measured against a reference polynomial (its largest coefficient
  /// and largest distance part) instead of f itself.
  void apply(Poly& f, const Poly& ref) const;
};

struct HomologicalResult {
  Poly chi;
  Poly zeta;
  int iterations = 0;
  /// Relative seed norm of the last Neumann term.
  double last_term = 0.0;
};

/// Solves {H_0, chi} = zeta + psi with H_0 = H_Omega + Z_0: zeta = -Pi_kernel psi and
/// chi = (I + K)^{-1} L_Omega^{-1} Pi_range psi, K = L_Omega^{-1} L_{Z_0}, by the
/// Neumann series.  Throws DivergenceError (step 0) when terms grow three times in a row.
HomologicalResult solve_homological(const Poly& psi, const Poly& zeta0, double omega, double tol = 1e-14,
                                    int max_iter = 500, const Cleanup& clean = {});

/**
 * Lie transform T_chi = sum_s E_s of a generating sequence chi_1..chi_r
 * (chi_s homogeneous of degree 2s + 2), with L_chi f = {chi, f}.
 */
class LieTransform {
 public:
  LieTransform() = default;
  LieTransform(std::vector<Poly> chi, Cleanup clean = {});

  int order() const { return static_cast<int>(chi_.size()); }
  /// chi_s for s = 1..order(); zero beyond.
  const Poly& chi(int s) const;

  /// E_0 f .. E_smax f.
  std::vector<Poly> E_series(const Poly& f, int smax) const;
  /// D_s f with D_0 = I, D_s = -sum_j (j/s) D_{s-j} L_{chi_j}.
  Poly D(int s, const Poly& f) const;
  /// sum of E_s f over all grades with total degree <= degree_cap.
  Poly apply(const Poly& f, int degree_cap) const;
  /// sum of D_s f over all grades with total degree <= degree_cap.
  Poly inverse(const Poly& f, int degree_cap) const;

  Poly bracket(int j, const Poly& f) const;

 private:
  std::vector<Poly> chi_;
  Cleanup clean_;
  Poly zero_;
};

struct NormalFormOptions {
  double tol = 1e-14;
  int max_iter = 500;
  /// 0 keeps free seeds; n > 0 binds every seed to the ring of n sites.
  int ring = 0;
  Cleanup clean;
  /// Largest grade of the remainder head; -1 means r + 1, 0 skips it.
  int s_max = -1;
};

struct NormalFormResult {
  LinearNF lnf;
  int r = 0;
  int ring = 0;
  /// Birkhoff seeds of H_Omega, Z_0 and H_1.
  Poly h_omega, zeta0, h1;
  /// Index s = 1..r holds chi_s, zeta_s and psi_s (index 0 is unused).
  std::vector<Poly> chi, zeta, psi;
  /// Remainder head h^(r)_s for s = r+1..s_max, stored at index s - r - 1.
  std::vector<Poly> head;
  std::vector<int> neumann_iterations;

  LieTransform transform(const Cleanup& clean = {}) const;
};

/// Runs the normal-form recursion to order r.  Throws DivergenceError with the
/// failing step.
NormalFormResult normal_form(const LinearNF& lnf, int r, const NormalFormOptions& opt = {});

/// Remainder head seeds h^(r)_s, s = r+1..s_max.
std::vector<Poly> remainder_head(const NormalFormResult& res, int s_max, const Cleanup& clean = {});

/// Phi_r = sum_{k <= r} E_k h_Omega: the harmonic energy of the normalized
/// variables written in the linearly normalized ones, truncated at degree 2r + 2.
Poly approximate_integral(const NormalFormResult& res, int r, const Cleanup& clean = {});

/// Seed in Birkhoff coordinates of a real free seed, bound to ring when ring > 0.
Poly birkhoff_seed(const Poly& real_seed, int ring);

struct GdnlsModel {
  double a = 0.0;
  double mu = 0.0;
  double omega = 1.0;
  int n = 0;
  int quartic_sign = 1;
  /// b_1 .. b_{n/2}.
  std::vector<double> b;
  /// Birkhoff seeds of Z_0 and Z_1 (free).
  Poly zeta0, zeta1;
  /// Z_1 in the symmetric alignment, split by symmetric distance.
  std::map<int, Poly> zeta1_parts;
  DecayProfile zeta1_decay;
  /// Coefficient of (q_0^2 + p_0^2)^2 in Z_1.
  double zeta1_leading = 0.0;
  /// Reference constants: the kernel average 3/32 of q^4/4 and the 3/2 of the
  /// real-coordinate dNLS form.
  double leading_average = 3.0 / 32.0;
  double leading_display = 1.5;
  /// Nearest-neighbour coupling mu / 2 of the dNLS, the coefficient of
  /// q_j q_{j+1} + p_j p_{j+1}; the matching GdNLS value is 2 b_1.
  double dnls_coupling = 0.0;
};

GdnlsModel extract_gdnls(const NormalFormResult& res);

struct StandardDnls {
  double a = 0.0, E = 0.0;
  int n = 0;
  /// Birkhoff seeds of the two resonant terms after the scaling step.
  Poly z0, z1;
  /// Generating seeds of the two steps (range parts of coupling and quartic).
  Poly chi0, chi1;
  /// Assembled seed i sum |xi_j|^2 + Z_0^(0) + Z_1^(0).
  Poly hamiltonian;
  double linear_coefficient = 0.0;
  double quartic_coefficient = 0.0;
};

/// Two-step construction in the rescaled variables: coupling a (X_0^2 - X_0 X_1),
/// quartic E X_0^4 / 4, harmonic (X_0^2 + Y_0^2) / 2.
StandardDnls standard_dnls(double a, double E, int n);

}  // namespace kgnf
