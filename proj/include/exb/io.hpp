#ifndef EXB_IO_HPP
#define EXB_IO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exb/diagnostics.hpp"
#include "exb/dynamics.hpp"

namespace exb {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a run needs, loadable from one JSON file; CLI flags override
/// individual keys. A run's echo string reproduces the run byte for byte
/// given the same binary.
struct RunConfig {
  // potential
  int n_modes = 25;
  double epsilon = 0.9;
  std::uint64_t rng_seed = 1;
  std::optional<std::vector<double>> phases;  // explicit override

  // control
  ControlConfig control{2.0, ControlMode::exact, 2, 1.0};

  // ensemble
  int n_traj = 200;
  double t_final = 2000.0;
  double tol = 1e-8;
  std::uint64_t ensemble_seed = 1;
  double strip_x_min = -1.0 - 3.141592653589793;
  double strip_x_max = -3.141592653589793;
  double strip_y_min = 0.0;
  double strip_y_max = 2.0 * 3.141592653589793;
  bool grid_init = false;
  bool stop_at_escape = true;
  bool track_energy = false;
  int n_threads = 0;

  // diagnostics
  int resolution = 128;
  std::vector<double> eps_sweep{0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.5};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  double msd_window_lo = 200.0;
  double msd_window_hi = 2000.0;
  double contour_time = 0.7853981633974483;  // pi/4
  int contour_resolution = 256;

  std::string output_dir = "out";
  bool plots = true;

  PotentialSpec make_spec() const;
  PotentialSpec make_spec(double eps, std::uint64_t seed) const;
  EnsembleConfig make_ensemble(ControlMode mode) const;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);
std::string run_config_to_json(const RunConfig& cfg);
/// Single-line JSON echo embedded at the top of every artifact.
std::string config_echo(const RunConfig& cfg);

std::string control_mode_name(ControlMode mode);
ControlMode control_mode_from_name(const std::string& name);

// ---- artifact writers (every file starts with "# <echo>" or embeds it) ----

void write_poincare_csv(const std::string& path,
                        const std::vector<TrajectoryRecord>& records,
                        const std::string& echo);

void write_ensemble_report_json(const std::string& path,
                                const EnsembleReport& report,
                                const std::string& echo);

/// Table of energy ratios, one row per epsilon (columns
/// epsilon,zeta_ex,zeta_tr,eta_ex,eta_tr), plus an optional seed column.
void write_energy_csv(const std::string& path,
                      const std::vector<EnergyReport>& rows,
                      const std::string& echo, bool with_seed = false);

/// Seed-averaged energy table with standard errors.
void write_energy_mean_csv(
    const std::string& path, const std::vector<double>& eps_list,
    const std::vector<std::vector<EnergyReport>>& per_seed_rows,
    const std::string& echo);

/// Escape-fraction table (epsilon,n_without,n_exact,n_tr).
void write_escape_csv(const std::string& path,
                      const std::vector<double>& eps_list,
                      const std::vector<std::array<double, 3>>& fractions,
                      const std::string& echo);

void write_comparison_csv(const std::string& path,
                          const std::vector<ComparisonRow>& rows,
                          const std::string& echo);

/// Plain-text rectangular grid: echo comment, then a one-line header
/// "nx ny x_min x_max y_min y_max t", then ny rows of nx values.
void write_grid_file(const std::string& path, const ScalarGrid& grid,
                     const std::string& echo);

/// Binary PPM heatmap with a symmetric diverging colormap.
void write_ppm_heatmap(const std::string& path, const ScalarGrid& grid,
                       const std::string& echo);

/// Poincare scatter; x unwrapped on the horizontal axis, y wrapped to
/// [0, 2*pi) on the vertical.
void write_portrait_svg(const std::string& path,
                        const std::vector<TrajectoryRecord>& records,
                        const std::string& title, const std::string& echo);

}  // namespace exb

#endif
