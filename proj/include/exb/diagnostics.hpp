#ifndef EXB_DIAGNOSTICS_HPP
#define EXB_DIAGNOSTICS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "exb/dynamics.hpp"
#include "exb/fields.hpp"

namespace exb {

/// Integrals of |fn| and fn^2 over the periodicity cube [0,2*pi)^3, by the
/// midpoint rule on a resolution^3 lattice. For 2*pi-periodic integrands the
/// rule is spectrally accurate, and exact for trigonometric polynomials of
/// degree below the resolution.
struct CubeAverage {
  double integral_abs;
  double integral_sq;
};

template <typename F>
CubeAverage cube_average(F&& fn, int resolution) {
  if (resolution < 16) {
    throw std::invalid_argument("cube_average: resolution must be >= 16");
  }
  const double h = 2.0 * std::numbers::pi / resolution;
  double sum_abs = 0.0, sum_sq = 0.0;
  for (int ix = 0; ix < resolution; ++ix) {
    const double x = (ix + 0.5) * h;
    for (int iy = 0; iy < resolution; ++iy) {
      const double y = (iy + 0.5) * h;
      double slab_abs = 0.0, slab_sq = 0.0;
      for (int it = 0; it < resolution; ++it) {
        const double v = fn(x, y, (it + 0.5) * h);
        slab_abs += std::fabs(v);
        slab_sq += v * v;
      }
      sum_abs += slab_abs;
      sum_sq += slab_sq;
    }
  }
  const double cell = h * h * h;
  return CubeAverage{sum_abs * cell, sum_sq * cell};
}

/// Analytic closed form of the cube integral of V^2: the random phases drop
/// out by mode orthogonality, leaving eps^2 (2*pi)^3 / 2 * sum (n^2+m^2)^{-3}.
double potential_sq_integral_closed_form(int n_modes, double epsilon);

/// Energy-cost ratios of the exact and truncated control terms relative to
/// the drive potential:
///   zeta = int F^2 / int V^2,  eta = int |grad F|^2 / int |grad V|^2
/// with grad the spatial (x, y) gradient, integrals over the periodicity
/// cube on a resolution^3 midpoint lattice.
struct EnergyReport {
  double epsilon = 0.0;
  double zeta_ex = 0.0, zeta_tr = 0.0;
  double eta_ex = 0.0, eta_tr = 0.0;
  int resolution = 0;
  std::uint64_t seed = 0;
};
EnergyReport energy_report(const PotentialSpec& spec, double x0, int resolution,
                           int harmonics = 2);

/// Escape-vs-cost comparison rows (one per epsilon).
struct ComparisonRow {
  double epsilon;
  double n_without, n_exact, n_tr;  // escape fractions
  double delta_n;                   // n_without - n_tr
  double delta_eta;                 // eta_ex - eta_tr
};
std::vector<ComparisonRow> comparison_table(
    const std::vector<double>& eps_list,
    const std::vector<std::array<double, 3>>& escape_fractions,
    const std::vector<EnergyReport>& energies);

/// Radial mean-squared-displacement fit over section times in
/// [window_lo, window_hi]: MSD(t) = <(x(t) - x(0))^2> fitted as 2 D t + c.
/// D_over_Dbar is D itself in dimensionless units (the reference diffusion
/// k^-2 omega is 1) and the Kubo number equals the drive amplitude.
/// A log-log slope well below 1 marks the trapped (sub-diffusive) regime; the
/// fit is still reported, flagged sublinear rather than failing.
struct MsdReport {
  double diffusion = 0.0;
  double d_over_dbar = 0.0;
  double kubo = 0.0;
  double loglog_slope = 0.0;
  double r_squared = 0.0;
  bool sublinear = false;
  int n_points = 0;
  double window_lo = 0.0, window_hi = 0.0;
};
MsdReport msd_diffusion(const std::vector<TrajectoryRecord>& records,
                        double kubo, double window_lo = 200.0,
                        double window_hi = 2000.0);

/// Rectangular sample of a scalar field at fixed t; no interpolation, values
/// are direct evaluator calls at the cell-centered lattice.
struct ScalarGrid {
  int nx = 0, ny = 0;
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  double t = 0.0;
  std::vector<double> values;  // row-major, y outer
};
ScalarGrid sample_grid(const std::function<double(double, double)>& fn,
                       double t, int resolution, double x_min = 0.0,
                       double x_max = 2.0 * std::numbers::pi, double y_min = 0.0,
                       double y_max = 2.0 * std::numbers::pi);

}  // namespace exb

#endif
