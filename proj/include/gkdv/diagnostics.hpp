#pragma once

#include "gkdv/field.hpp"
#include "gkdv/solver.hpp"
#include "gkdv/weights.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gkdv {

struct WeightedSample {
  double t = 0.0;
  WeightedNorm norm;
};

/// log_weighted_l2 of every snapshot, evaluated at the snapshot time.
std::vector<WeightedSample> weighted_series(const Trajectory& traj, const WeightSpec& spec,
                                            ObservationWindow window = {});

enum class TailModel {
  frac_exp,  // log|u| = log C - a |x|^{3/2}
  power,     // log|u| = log C - p log|x|, fitted to local maxima of |u|
};

struct TailWindow {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double origin = 0.0;  // fits use |x - origin| as the abscissa
};

struct TailFit {
  TailWindow window;
  TailModel model = TailModel::frac_exp;
  double rate = 0.0;  // a for frac_exp, p for power
  double log_c = 0.0;
  double residual_rms = 0.0;
  int samples = 0;
};

/// Samples below this fraction of the field peak never enter a tail fit.
inline constexpr double kTailFitFloor = 1e-12;
inline constexpr int kMinTailSamples = 20;

/// Linear least squares in the model's transformed coordinates. Throws
/// std::invalid_argument for an empty window, std::domain_error when fewer
/// than 20 usable samples remain or the abscissae are degenerate.
TailFit fit_tail(const Field& u, TailModel model, TailWindow window);

/// Right-tail window: x_lo = max(2 (3t)^{1/3}, first x right of the peak with
/// |u| < 0.01 peak), x_hi = last x with |u| > 1e-10 peak inside |x| <= limit.
/// Throws std::domain_error when the window is empty.
TailWindow right_tail_window(const Field& u, double elapsed, double limit);

struct PersistenceAudit {
  double beta = 0.0;
  std::vector<double> times;
  std::vector<double> norms;  // ||e^{beta x} u(t)||
  double growth = 0.0;        // fitted K
  double smoothing = 0.0;     // int_0^T e^{-K t} ||e^{beta x} u_x||^2 dt
  double bound = 0.0;         // ||e^{beta x} u0||^2 / (4 beta)
  double max_excess = 0.0;    // max_t log N(t) - (K t + log N(0))
  bool below_line = true;
  bool saturated = false;
  bool pass = false;
};

/// Checks ||e^{bx}u(t)|| <= e^{Kt} ||e^{bx}u0|| and the smoothing inequality
/// with the least-squares slope K of log ||e^{bx}u(t)|| against t.
/// `line_tolerance` is the relative slack allowed above the fitted line.
PersistenceAudit persistence_audit(const Trajectory& traj, double beta, double line_tolerance = 0.02);

struct InterpolationCheck {
  double lhs = 0.0;          // ||J^{theta a}(<x>^{(1-theta) b} f)||
  double rhs_product = 0.0;  // ||<x>^b f||^{1-theta} ||J^a f||^theta
  double ratio = 0.0;
};

InterpolationCheck interpolation_check(const Field& f, double a, double b, double theta);

struct ConservationReport {
  double mass_drift = 0.0;
  double l2_drift = 0.0;
  double hamiltonian_drift = 0.0;
  bool l2_nonincreasing = true;
};

/// Maximum drift of I1, I2, I3 relative to their initial values (absolute
/// when the initial value vanishes), over samples with |t - t0| <= horizon.
ConservationReport conserved_audit(const Trajectory& traj, double horizon = 1e300);

/// Residual of the weighted energy identity for k = 1,
///   d/dt int u^2 phi + 3 int u_x^2 phi_x - int u^2 (phi_xxx + phi_t) - 2/3 int u^3 phi_x,
/// with the time derivative taken by centered differences of the snapshots.
/// One entry per interior snapshot.
std::vector<double> energy_identity_residuals(const Trajectory& traj, int N, const DecaySchedule& sched);

/// Appends one row per sample to the trajectory's diagnostics table.
void record_series(Trajectory& traj, const std::string& name, const std::vector<WeightedSample>& series);

}  // namespace gkdv
