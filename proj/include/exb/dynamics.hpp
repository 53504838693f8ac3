#ifndef EXB_DYNAMICS_HPP
#define EXB_DYNAMICS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exb/fields.hpp"

namespace exb {

/// Embedded Dormand-Prince 5(4) controls. The estimated local error of an
/// accepted step never exceeds tol * h (error per unit step).
struct IntegratorOptions {
  double tol = 1e-8;  // accepted range [1e-13, 1e-6]
  double h_init = 1e-2;
  double h_min = 1e-12;
  double h_max = 0.7;
  bool track_energy = false;
};

/// Stroboscopic sample: position at t = 2*pi*section_index, landed on exactly.
struct PoincarePoint {
  int section_index;
  double x;
  double y;
};

struct TrajectoryRecord {
  double initial_x = 0.0;
  double initial_y = 0.0;
  double tau0 = 0.0;
  /// x is kept unwrapped; wrap y only when plotting.
  std::vector<PoincarePoint> poincare_points;
  /// E along the section samples (dE/dt = -dV/dt), when tracking is enabled.
  std::vector<double> energy_track;
  /// Section index of the first barrier crossing; points after it are dropped.
  std::optional<int> escaped_at;
  bool failed = false;
  std::string failure_reason;
  long n_steps = 0;
  long n_rejected = 0;
};

/// Escape accounting relative to the barrier images x0 + 2*pi*Z. The pair of
/// images bracketing the initial condition is used, so the rule is invariant
/// under shifting a trajectory by full periods.
struct EscapeRule {
  double barrier_x0 = 2.0;
  bool stop_on_escape = true;
};

using StepObserver = std::function<void(double t, double x, double y)>;

/// Integrate dx/dt = -dV/dy, dy/dt = +dV/dx from (x, y) at t = tau0 to
/// t_final, landing exactly on every section time t = 2*pi*k on the way.
/// Step-size underflow marks the record failed and returns the partial record.
/// Throws std::invalid_argument for tol outside [1e-13, 1e-6].
TrajectoryRecord integrate(const FieldModel& field, double x, double y,
                           double tau0, double t_final,
                           const IntegratorOptions& opts = {},
                           const std::optional<EscapeRule>& escape = std::nullopt,
                           const StepObserver& observer = {});

/// First section index whose x lies beyond the barrier images bracketing the
/// trajectory's initial condition (above the upper image or below the lower).
std::optional<int> detect_escape(const TrajectoryRecord& record, double x0);

struct EnsembleConfig {
  int n_traj = 200;
  double t_final = 2000.0;
  // Initial strip, default -1-pi <= x <= -pi, 0 <= y <= 2*pi, at tau0 = 0.
  double strip_x_min = -4.141592653589793;
  double strip_x_max = -3.141592653589793;
  double strip_y_min = 0.0;
  double strip_y_max = 6.283185307179586;
  ControlConfig control;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  bool grid_init = false;  // cell-centered grid instead of seeded draws
  bool stop_at_escape = true;
  bool track_energy = false;
  int n_threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct EnsembleReport {
  EnsembleConfig config;
  int n_traj = 0;
  int n_escaped = 0;
  int n_failed = 0;
  /// escaped / (n_traj - n_failed); failed integrations are excluded and
  /// surface through n_failed.
  double escape_fraction = 0.0;
  /// Per trajectory, t = 2*pi*k of the first crossing; NaN when confined.
  std::vector<double> first_crossing_times;
  double wall_time_seconds = 0.0;
};

struct EnsembleResult {
  EnsembleReport report;
  std::vector<TrajectoryRecord> records;
};

/// Integrate the whole seeded ensemble. Trajectories run independently (in
/// parallel when n_threads != 1) and are aggregated in index order, so the
/// result is deterministic for a fixed config.
EnsembleResult run_ensemble(const PotentialSpec& spec, const EnsembleConfig& cfg);

/// Same protocol with a caller-supplied drive field (cfg.control then only
/// provides the barrier position for escape accounting).
EnsembleResult run_ensemble(const FieldModel& field, const EnsembleConfig& cfg);

/// Initial conditions exactly as run_ensemble draws them.
std::vector<std::pair<double, double>> ensemble_initial_conditions(
    const EnsembleConfig& cfg);

/// Launch trajectories on the invariant curve of the exactly controlled field
/// (x = x0 - f'(y, t), which passes through x = x0 at t = 0) and report
/// max_t |x(t) - x0 + f'(y(t), t)| over all accepted steps, maximized across
/// the given y samples. With control_scale = 1 this measures how well the
/// integrator preserves the exact barrier; scales != 1 break the invariance
/// and serve as falsification probes.
double barrier_invariance_check(const PotentialSpec& spec, double x0,
                                std::span<const double> y_samples,
                                double t_final, double tol = 1e-10,
                                double control_scale = 1.0);

}  // namespace exb

#endif
