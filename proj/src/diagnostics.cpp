#include "exb/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace exb {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double potential_sq_integral_closed_form(int n_modes, double epsilon) {
  long double s = 0.0L;
  for (int n = 1; n <= n_modes; ++n) {
    for (int m = 1; m <= n_modes; ++m) {
      const long double q = static_cast<long double>(n) * n +
                            static_cast<long double>(m) * m;
      s += 1.0L / (q * q * q);
    }
  }
  const long double cube = static_cast<long double>(kTwoPi) * kTwoPi * kTwoPi;
  return static_cast<double>(0.5L * cube * s) * epsilon * epsilon;
}

EnergyReport energy_report(const PotentialSpec& spec, double x0, int resolution,
                           int harmonics) {
  if (resolution < 16) {
    throw std::invalid_argument("energy_report: resolution must be >= 16");
  }
  const PlainField plain(spec);
  const ExactControlledField exact(spec, x0);
  const TruncatedControlledField truncated(spec, x0, harmonics);

  const double h = kTwoPi / resolution;
  double v_sq = 0, gv_sq = 0;
  double f_sq = 0, gf_sq = 0;
  double ftr_sq = 0, gftr_sq = 0;
  for (int iy = 0; iy < resolution; ++iy) {
    const double y = (iy + 0.5) * h;
    for (int it = 0; it < resolution; ++it) {
      const double t = (it + 0.5) * h;
      for (int ix = 0; ix < resolution; ++ix) {
        const double x = (ix + 0.5) * h;
        const FieldSample v = plain.sample(x, y, t);
        const FieldSample e = exact.sample(x, y, t);
        const FieldSample r = truncated.sample(x, y, t);
        v_sq += v.value * v.value;
        gv_sq += v.grad_x * v.grad_x + v.grad_y * v.grad_y;
        const double fe = e.value - v.value;
        const double fex = e.grad_x - v.grad_x;
        const double fey = e.grad_y - v.grad_y;
        f_sq += fe * fe;
        gf_sq += fex * fex + fey * fey;
        const double ft = r.value - v.value;
        const double ftx = r.grad_x - v.grad_x;
        const double fty = r.grad_y - v.grad_y;
        ftr_sq += ft * ft;
        gftr_sq += ftx * ftx + fty * fty;
      }
    }
  }

  EnergyReport rep;
  rep.epsilon = spec.epsilon();
  rep.resolution = resolution;
  rep.seed = spec.rng_seed();
  rep.zeta_ex = v_sq > 0 ? f_sq / v_sq : 0.0;
  rep.zeta_tr = v_sq > 0 ? ftr_sq / v_sq : 0.0;
  rep.eta_ex = gv_sq > 0 ? gf_sq / gv_sq : 0.0;
  rep.eta_tr = gv_sq > 0 ? gftr_sq / gv_sq : 0.0;
  return rep;
}

std::vector<ComparisonRow> comparison_table(
    const std::vector<double>& eps_list,
    const std::vector<std::array<double, 3>>& escape_fractions,
    const std::vector<EnergyReport>& energies) {
  if (eps_list.size() != escape_fractions.size() ||
      eps_list.size() != energies.size()) {
    throw std::invalid_argument("comparison_table: mismatched input lengths");
  }
  std::vector<ComparisonRow> rows;
  rows.reserve(eps_list.size());
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (std::fabs(energies[i].epsilon - eps_list[i]) > 1e-12) {
      throw std::invalid_argument(
          "comparison_table: epsilon grids do not match");
    }
    ComparisonRow row;
    row.epsilon = eps_list[i];
    row.n_without = escape_fractions[i][0];
    row.n_exact = escape_fractions[i][1];
    row.n_tr = escape_fractions[i][2];
    row.delta_n = row.n_without - row.n_tr;
    row.delta_eta = energies[i].eta_ex - energies[i].eta_tr;
    rows.push_back(row);
  }
  return rows;
}

MsdReport msd_diffusion(const std::vector<TrajectoryRecord>& records,
                        double kubo, double window_lo, double window_hi) {
  MsdReport rep;
  rep.kubo = kubo;
  rep.window_lo = window_lo;
  rep.window_hi = window_hi;

  // Section grid common to all healthy records.
  std::size_t n_sections = 0;
  for (const auto& r : records) {
    if (r.failed || r.poincare_points.empty()) continue;
    n_sections = n_sections == 0
                     ? r.poincare_points.size()
                     : std::min(n_sections, r.poincare_points.size());
  }
  if (n_sections < 2) {
    throw std::invalid_argument("msd_diffusion: records carry no sections");
  }

  std::vector<double> times, msd;
  for (std::size_t k = 0; k < n_sections; ++k) {
    double acc = 0.0;
    int count = 0;
    double tk = 0.0;
    for (const auto& r : records) {
      if (r.failed || r.poincare_points.size() < n_sections) continue;
      const auto& p0 = r.poincare_points.front();
      const auto& pk = r.poincare_points[k];
      const double dx = pk.x - p0.x;
      acc += dx * dx;
      ++count;
      tk = kTwoPi * pk.section_index;
    }
    if (count == 0) continue;
    if (tk < window_lo || tk > window_hi) continue;
    times.push_back(tk);
    msd.push_back(acc / count);
  }
  rep.n_points = static_cast<int>(times.size());
  if (rep.n_points < 2) {
    throw std::invalid_argument(
        "msd_diffusion: fit window contains fewer than two sections");
  }

  auto linear_fit = [](const std::vector<double>& xs,
                       const std::vector<double>& ys, double& slope,
                       double& r2) {
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
      syy += ys[i] * ys[i];
    }
    const double det = n * sxx - sx * sx;
    slope = det != 0 ? (n * sxy - sx * sy) / det : 0.0;
    const double ss_tot = syy - sy * sy / n;
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = ys[i] - (intercept + slope * xs[i]);
      ss_res += e * e;
    }
    r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  };

  double slope = 0, r2 = 1;
  linear_fit(times, msd, slope, r2);
  rep.diffusion = 0.5 * std::max(slope, 0.0);
  rep.d_over_dbar = rep.diffusion;  // reference diffusion is 1 in these units
  rep.r_squared = r2;

  // Log-log slope for the anomalous-diffusion diagnostic.
  std::vector<double> lt, lm;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (msd[i] > 0 && times[i] > 0) {
      lt.push_back(std::log(times[i]));
      lm.push_back(std::log(msd[i]));
    }
  }
  if (lt.size() >= 2) {
    double lr2 = 0;
    linear_fit(lt, lm, rep.loglog_slope, lr2);
  } else {
    rep.loglog_slope = 0.0;  // immobile ensemble
  }
  rep.sublinear = rep.loglog_slope < 0.9;
  return rep;
}

ScalarGrid sample_grid(const std::function<double(double, double)>& fn,
                       double t, int resolution, double x_min, double x_max,
                       double y_min, double y_max) {
  if (resolution < 2) {
    throw std::invalid_argument("sample_grid: resolution must be >= 2");
  }
  ScalarGrid g;
  g.nx = g.ny = resolution;
  g.x_min = x_min;
  g.x_max = x_max;
  g.y_min = y_min;
  g.y_max = y_max;
  g.t = t;
  g.values.resize(static_cast<std::size_t>(resolution) * resolution);
  for (int iy = 0; iy < resolution; ++iy) {
    const double y = y_min + (y_max - y_min) * iy / (resolution - 1);
    for (int ix = 0; ix < resolution; ++ix) {
      const double x = x_min + (x_max - x_min) * ix / (resolution - 1);
      g.values[static_cast<std::size_t>(iy) * resolution + ix] = fn(x, y);
    }
  }
  return g;
}

}  // namespace exb
