#pragma once

#include "gkdv/field.hpp"

#include <Eigen/Core>

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gkdv {

struct SpongeConfig {
  double width = 0.0;
  double strength = 0.0;
};

struct SolverConfig {
  int k = 1;
  /// Time step. A negative value runs backward in time; the snapshot times must
  /// then decrease from the start time.
  double dt = 1e-3;
  bool dealias = true;
  /// Drops u^k u_x entirely (linear Airy flow, still time-stepped).
  bool nonlinear = true;
  std::optional<SpongeConfig> sponge;
  std::vector<double> snapshot_times;
  /// Record conserved quantities every this many steps (0: snapshots only).
  int conservation_check_interval = 0;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate(const Grid& grid) const;
};

/// max |u| over |x| >= 0.98 L relative to max |u| (0 for the zero field).
double boundary_ratio(const Field& u);

/// 0.1 dx / max(1, ||u0||_inf)^k.
double default_dt(const Field& u0, int k);

/// Zero-padded size used for the degree-(k+1) nonlinearity on an n-point grid.
int dealias_size(int n, int k);

/// C^2 ramp: zero for |x| <= L - width, rising to 1 at the edge.
Eigen::ArrayXd sponge_profile(const Grid& grid, double width, double strength);

struct ConservationSample {
  double t = 0.0;
  double mass = 0.0;         // int u
  double l2sq = 0.0;         // int u^2
  double hamiltonian = 0.0;  // int u_x^2 / 2 - u^{k+2} / ((k+1)(k+2))
};

ConservationSample conserved_quantities(const Field& u, int k);

/// One row of the flat diagnostics table.
struct DiagnosticRow {
  double t = 0.0;
  std::string name;
  double value = 0.0;
  std::string flags;
};

struct TrajectoryFlags {
  bool blow_up = false;
  double blow_up_time = std::numeric_limits<double>::quiet_NaN();
  bool boundary_contamination = false;
  double max_edge_ratio = 0.0;
  double datum_tail_ratio = 0.0;  // spectral_tail_ratio of u0
  double max_tail_ratio = 0.0;    // over snapshots
  /// A snapshot's spectral tail exceeded max(kResolutionTolerance, 2 x the datum's).
  bool under_resolved = false;
};

struct Trajectory {
  SolverConfig config;
  std::vector<Field> snapshots;
  std::vector<ConservationSample> conservation;
  std::vector<DiagnosticRow> rows;
  TrajectoryFlags flags;

  bool clean() const { return !flags.blow_up && !flags.boundary_contamination; }
};

/// Integrating-factor RK4 in spectral space. The linear part exp(i xi^3 h)
/// is applied exactly; the nonlinear term -(u^{k+1})_x / (k+1) is formed in
/// physical space on a zero-padded grid.
class Stepper {
 public:
  Stepper(const Grid& grid, const SolverConfig& cfg);

  /// Advances by the configured dt, or by h when given.
  void advance(Eigen::ArrayXcd& coeffs, std::optional<double> h = std::nullopt);

  /// Multiplies by exp(-strength * profile * |h|) in physical space.
  void apply_sponge(Eigen::ArrayXcd& coeffs, double h);

 private:
  void nonlinear_term(const Eigen::ArrayXcd& in, Eigen::ArrayXcd& out);
  void phases(double h, Eigen::ArrayXcd& full, Eigen::ArrayXcd& half) const;

  Grid grid_;
  SolverConfig cfg_;
  int padded_;
  Eigen::ArrayXcd full_, half_;
  Eigen::ArrayXd damping_profile_;
  Eigen::ArrayXcd k1_, k2_, k3_, k4_, stage_, pad_spec_;
  Eigen::ArrayXd pad_phys_;
};

/// One step of size cfg.dt. Throws std::runtime_error if the result is not finite.
SpectralField step(const SpectralField& state, const SolverConfig& cfg);

/// Evolves u0 from u0.t through every snapshot time.
Trajectory evolve(const Field& u0, const SolverConfig& cfg);

/// Mirror x -> -x on the periodic grid (x_i -> x_{(n-i) mod n}).
Field reflect(const Field& u);

}  // namespace gkdv
