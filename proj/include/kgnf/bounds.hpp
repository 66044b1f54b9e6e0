#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kgnf/normalform.hpp"

namespace kgnf {

struct ConstantsRecord {
  double a = 0.0, mu = 0.0, omega = 1.0;
  int r = 1;
  double sigma0 = 0.0, sigma1 = 0.0, sigma_star = 0.0;
  /// Admissible window [max(ln 4, sigma0/4), sigma1) for sigma_star.
  double window_lo = 0.0, window_hi = 0.0;
  bool window_empty = false;
  bool sigma_star_admissible = true;
  /// sigma_s for s = 1..r at index s - 1.
  std::vector<double> sigma_s;

  double C_zeta0 = 0.0, C_h1 = 0.0;
  double E0_star = 0.0;
  double mu_star = 0.0;
  double gamma = 0.0;
  double C_star = 0.0;
  double C_r = 0.0;
  double C_tilde = 0.0;
  /// 2 C_r, the alternative value of the remainder constant.
  double C_tilde_alt = 0.0;
  double C_K = 0.0;
  double R_star = 0.0;
  int r_max = 0;
  /// 2 r mu < mu_star.
  bool order_admissible = true;

  /// True when every hypothesis of the estimates holds.
  bool hypotheses() const { return !window_empty && sigma_star_admissible && order_admissible; }
};

/// Constants from the measured envelopes C_zeta0 (rate sigma0) and C_h1 (rate
/// sigma1) of the Birkhoff seeds of lnf.  An explicit sigma_star outside the
/// admissible window throws; the default is max(ln 4, sigma0 / 4).
ConstantsRecord constants(const LinearNF& lnf, int r, std::optional<double> sigma_star = std::nullopt);

/// Envelope constant max_m ||f^(m)||_1 e^{sigma m}; sigma may be infinite.
double envelope(const Poly& f, double sigma);

enum class Status { Pass, Fail, Advisory };
const char* status_name(Status s);

struct BoundCheck {
  std::string name;
  int s = 0;
  double sigma = 0.0;
  double measured = 0.0;
  double bound = 0.0;
  Status status = Status::Pass;
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  bool all_pass() const;
};

/// Measured envelopes of chi_s, zeta_s (rate sigma_s) and the remainder head
/// (rate sigma_star) against C_r^{s-1} C_h1 / (gamma s), C_r^{s-1} C_h1 / s and
/// 2 C_tilde^{s-1} C_h1.  A violation is Advisory when a hypothesis fails.
BoundReport verify_decay_bounds(const NormalFormResult& res, const ConstantsRecord& c);

enum class BracketCase { General, DistinctRates, ZeroBase };
const char* bracket_case_name(BracketCase c);

struct BracketPrediction {
  BracketCase which = BracketCase::General;
  double sigma = 0.0;
  double C = 0.0;
};

/// Predicted class of the seed of {F, G} for seeds f in D(C_f, s1), g in D(C_g, s2)
/// of degrees r1, r2.  With f_zero_base (f^(0) = 0 and s1 > s2) the rate is s2;
/// with s1 != s2 it is min(s1, s2); otherwise sigma_out < min(s1, s2) is required.
BracketPrediction bracket_decay_bound(double C_f, double s1, int r1, double C_g, double s2, int r2,
                                      std::optional<double> sigma_out = std::nullopt, bool f_zero_base = false);

/// 4 r R^{r-1} C_f / (1 - e^{-sigma})^2 for a seed of degree r in D(C_f, sigma).
double field_norm_decay_bound(double C_f, double sigma, int r, double R);

struct DeformationStep {
  int s = 0;
  double radius = 0.0;
  double field_norm = 0.0;
  double bound = 0.0;
  double sampled_max = 0.0;
};

struct DeformationReport {
  double R = 0.0;
  bool radius_admissible = true;
  std::vector<DeformationStep> steps;
  double total_bound = 0.0;
  double sampled_total = 0.0;
  int samples = 0;
  bool pass() const;
};

/// Field norms of the chi_s on the shrinking radii R_s = R - s R / (3r), the
/// per-step bound (1 + e) |||X_chi_s|||_{R_{s-1}}, the total 4^4 C_* R^3 and a
/// sampled check of the time-one flows on ||z|| <= 2R/3 at the chain size n.
DeformationReport deformation_bound(const NormalFormResult& res, double R, const ConstantsRecord& c, int n,
                                    int samples = 100, unsigned seed = 1, bool linf = false);

}  // namespace kgnf
