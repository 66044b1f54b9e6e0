#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kgnf/linearize.hpp"
#include "kgnf/normalform.hpp"

namespace kgnf {

enum class NormKind { L2, Linf };
enum class InitRecipe { SingleSite, RandomPhase, User };

const char* norm_name(NormKind k);
NormKind parse_norm(const std::string& s);

struct SimConfig {
  int n = 16;
  double a = 0.05;
  /// Norm of the initial state in the linearly normalized variables (q, p).
  double R = 0.1;
  NormKind norm = NormKind::L2;
  double dt = 0.002;
  double T = 1000.0;
  /// Observables are recorded every sample_every time units (rounded to steps).
  double sample_every = 0.25;
  InitRecipe init = InitRecipe::RandomPhase;
  /// Initial (x, y) for InitRecipe::User.
  std::vector<double> state;
  unsigned seed = 1;
  int quartic_sign = 1;
  /// Drops the quartic term (linear test mode).
  bool harmonic = false;
  bool keep_states = true;

  void validate() const;
  long steps() const;
  int sample_stride() const;
};

struct Trajectory {
  int n = 0;
  std::vector<double> t;
  /// Sampled states (x, y), kept when SimConfig::keep_states is set.
  std::vector<std::vector<double>> states;
  std::vector<double> H;
  std::vector<double> energy_error;
  /// Filled by observables().
  std::vector<double> H_omega, Z;
  /// Phi_0..Phi_order along the samples, filled by drift_experiment.
  std::vector<std::vector<double>> Phi;
};

/// Stopped integration: relative energy error above 1e-3.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Initial (x, y) of a configuration.
std::vector<double> initial_state(const SimConfig& cfg, const LinearNF& lnf);

/// Total energy of the chain at (x, y).
double kg_energy(const std::vector<double>& z, double a, int quartic_sign = 1, bool harmonic = false);

/**
 * Strang splitting: exact flow of the quadratic part (circulant propagators
 * cos(sqrt(A) t), A^{-1/2} sin(sqrt(A) t), -A^{1/2} sin(sqrt(A) t)) around a
 * kick by the quartic term.
 */
class KgIntegrator {
 public:
  KgIntegrator(int n, double a, double dt, int quartic_sign = 1, bool harmonic = false);
  void step(std::vector<double>& z) const;
  void run(std::vector<double>& z, long steps) const;

 private:
  int n_;
  double dt_;
  int sign_;
  bool harmonic_;
  Circulant c_, s_plus_, s_minus_;
};

Trajectory integrate_kg(const SimConfig& cfg);

/// H_Omega and Z = Z_0 + Z_1 + .. + Z_order on the sampled states, in q = A^{1/4} x,
/// p = A^{-1/4} y.  order = -1 uses every Z_s of res.
void observables(Trajectory& traj, const NormalFormResult& res, int order = -1);

/// Values of a Birkhoff seed along the sampled states (linearly normalized variables).
std::vector<double> evaluate_along(const Trajectory& traj, const LinearNF& lnf, const Poly& seed,
                                   double prune = 0.0);

struct DriftPoint {
  double R = 0.0;
  double max_dH_omega = 0.0;
  double max_dZ = 0.0;
  /// max |Delta Phi_k| for k = 0..order.
  std::vector<double> max_dPhi;
  double energy_drift = 0.0;
  double bound_omega = 0.0;  // Omega R^4
  double bound_z = 0.0;      // R^4 (C_zeta0 mu + C_h1 R^2)
};

struct DriftReport {
  std::vector<DriftPoint> points;
  /// NaN for a single amplitude.
  double slope = 0.0;
  bool monotone = false;
};

/// Runs the amplitude ladder on base_cfg and records the drift of H_Omega, Z
/// and the approximate integrals Phi_0..Phi_order of res.  on_run sees every
/// finished trajectory.
DriftReport drift_experiment(const SimConfig& base, const std::vector<double>& ladder, const NormalFormResult& res,
                             int order = 0, double phi_prune = 1e-13,
                             const std::function<void(double, const Trajectory&)>& on_run = {});

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Hamilton's equations of K = H_Omega + Z_0 + Z_1 in (q, p): exact linear flow
/// with the frequencies sqrt(lambda_k) around an implicit-midpoint step of Z_1.
/// Initial data is cfg's (x, y) mapped through apply_linear; samples are stored as (q, p).
Trajectory integrate_gdnls(const GdnlsModel& model, const LinearNF& lnf, const SimConfig& cfg);

struct Comparison {
  std::vector<double> t;
  std::vector<double> deviation;
  double max_deviation = 0.0;
  double relative = 0.0;
};

/// Sup-norm deviation in (q, p) between a KG trajectory (states in (x, y)) and a
/// GdNLS trajectory sampled at the same times.
Comparison compare_models(const Trajectory& kg, const Trajectory& gdnls, const LinearNF& lnf);

}  // namespace kgnf
