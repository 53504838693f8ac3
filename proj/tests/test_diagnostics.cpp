#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "exb/diagnostics.hpp"
#include "exb/prng.hpp"

using namespace exb;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("cube_average: constants, |cos|, and the resolution floor") {
  const auto unit = cube_average([](double, double, double) { return 1.0; }, 16);
  const double cube = kTwoPi * kTwoPi * kTwoPi;
  CHECK(unit.integral_abs == doctest::Approx(cube).epsilon(1e-12));
  CHECK(unit.integral_sq == doctest::Approx(cube).epsilon(1e-12));

  const auto cosx =
      cube_average([](double x, double, double) { return std::cos(x); }, 256);
  CHECK(cosx.integral_abs ==
        doctest::Approx(4.0 * kTwoPi * kTwoPi).epsilon(1e-3));
  CHECK(cosx.integral_sq == doctest::Approx(0.5 * cube).epsilon(1e-12));

  CHECK_THROWS_AS(
      cube_average([](double, double, double) { return 1.0; }, 8),
      std::invalid_argument);
}

TEST_CASE("potential square integral matches the orthogonality closed form") {
  PotentialSpec spec(25, 0.6, 1);
  const double closed = potential_sq_integral_closed_form(25, 0.6);
  const auto avg = cube_average(
      [&](double x, double y, double t) { return spec.value(x, y, t); }, 64);
  CHECK(std::fabs(avg.integral_sq - closed) / closed < 1e-6);

  // seed independence: phases drop out by mode orthogonality
  PotentialSpec other(25, 0.6, 2);
  const auto avg2 = cube_average(
      [&](double x, double y, double t) { return other.value(x, y, t); }, 64);
  CHECK(std::fabs(avg.integral_sq - avg2.integral_sq) / closed < 1e-10);
}

TEST_CASE("midpoint quadrature error collapses once past the band limit") {
  PotentialSpec spec(25, 0.5, 3);
  const double closed = potential_sq_integral_closed_form(25, 0.5);
  auto err_at = [&](int res) {
    const auto avg = cube_average(
        [&](double x, double y, double t) { return spec.value(x, y, t); }, res);
    return std::fabs(avg.integral_sq - closed) / closed;
  };
  // Mode pairs alias onto the lattice only when n - n' and m - m' are both
  // multiples of the resolution while the t-harmonics already cancel; with
  // N = 25 the first such pairs appear at resolution 24 and below.
  const double e16 = err_at(16);
  const double e24 = err_at(24);
  const double e32 = err_at(32);
  const double e64 = err_at(64);
  const double e128 = err_at(128);
  CHECK(e16 > 100.0 * e32);
  CHECK(e24 > 10.0 * e32);
  CHECK(e32 < 1e-10);
  CHECK(e64 < 1e-10);
  CHECK(e128 < 1e-10);
}

TEST_CASE("energy report: small-amplitude ratios scale out quadratically") {
  EnergyReport r1, r2;
  {
    PotentialSpec spec(25, 0.01, 1);
    r1 = energy_report(spec, 2.0, 48);
  }
  {
    PotentialSpec spec(25, 0.02, 1);
    r2 = energy_report(spec, 2.0, 48);
  }
  // zeta_ex ~ c * eps^2: the ratio r2/r1 should be ~4
  CHECK(r2.zeta_ex / r1.zeta_ex == doctest::Approx(4.0).epsilon(0.05));
  CHECK(r2.eta_ex / r1.eta_ex == doctest::Approx(4.0).epsilon(0.05));
  CHECK(r1.zeta_ex > 0.0);
  CHECK(r1.eta_tr < r1.eta_ex);
}

TEST_CASE("energy report carries spec metadata and validates resolution") {
  PotentialSpec spec(25, 0.9, 7);
  const auto rep = energy_report(spec, 2.0, 16);
  CHECK(rep.epsilon == 0.9);
  CHECK(rep.seed == 7);
  CHECK(rep.resolution == 16);
  CHECK(rep.zeta_ex >= 0.0);
  CHECK_THROWS_AS(energy_report(spec, 2.0, 8), std::invalid_argument);
}

TEST_CASE("comparison table joins escape and energy rows") {
  std::vector<double> eps{0.4, 0.9};
  std::vector<std::array<double, 3>> esc{{0.22, 0.0, 0.06}, {0.68, 0.01, 0.44}};
  std::vector<EnergyReport> en(2);
  en[0].epsilon = 0.4;
  en[0].eta_ex = 0.7;
  en[0].eta_tr = 0.2;
  en[1].epsilon = 0.9;
  en[1].eta_ex = 1.4;
  en[1].eta_tr = 1.0;
  const auto rows = comparison_table(eps, esc, en);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].delta_n == doctest::Approx(0.16));
  CHECK(rows[0].delta_eta == doctest::Approx(0.5));
  CHECK(rows[1].delta_n == doctest::Approx(0.24));

  // equal without/truncated fractions give a zero difference
  esc[0][2] = esc[0][0];
  CHECK(comparison_table(eps, esc, en)[0].delta_n == doctest::Approx(0.0));

  en[1].epsilon = 0.8;
  CHECK_THROWS_AS(comparison_table(eps, esc, en), std::invalid_argument);
  en.pop_back();
  CHECK_THROWS_AS(comparison_table(eps, esc, en), std::invalid_argument);
}

TEST_CASE("msd fitter recovers a synthetic diffusive law") {
  // x_i(t) = x_i(0) +/- sqrt(2 D t) with equal splits: MSD(t) = 2 D t exactly
  const double d_true = 0.35;
  std::vector<TrajectoryRecord> records(8);
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& r = records[i];
    r.initial_x = 0.1 * i;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    for (int k = 0; k <= 318; ++k) {
      const double t = kTwoPi * k;
      r.poincare_points.push_back(
          {k, r.initial_x + sign * std::sqrt(2.0 * d_true * t), 0.0});
    }
  }
  const auto rep = msd_diffusion(records, 0.5);
  CHECK(rep.diffusion == doctest::Approx(d_true).epsilon(1e-6));
  CHECK(rep.d_over_dbar == doctest::Approx(d_true).epsilon(1e-6));
  CHECK(rep.kubo == 0.5);
  CHECK(rep.r_squared > 0.999999);
  CHECK(rep.loglog_slope == doctest::Approx(1.0).epsilon(0.01));
  CHECK(!rep.sublinear);
  CHECK(rep.window_lo == 200.0);
  CHECK(rep.window_hi == 2000.0);
}

TEST_CASE("msd of a frozen ensemble is zero and flagged sublinear") {
  PotentialSpec spec(25, 0.0, 1);
  EnsembleConfig cfg;
  cfg.n_traj = 4;
  cfg.t_final = 2000.0;
  cfg.tol = 1e-8;
  cfg.n_threads = 1;
  cfg.stop_at_escape = false;
  const auto res = run_ensemble(spec, cfg);
  const auto rep = msd_diffusion(res.records, 0.0);
  CHECK(rep.diffusion == 0.0);
  CHECK(rep.sublinear);

  CHECK_THROWS_AS(msd_diffusion(res.records, 0.0, 1900.0, 1905.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(msd_diffusion({}, 0.0), std::invalid_argument);
}

TEST_CASE("grid sampling is a direct evaluator transcription") {
  PotentialSpec zero(25, 0.0, 1);
  const auto gz = sample_grid(
      [&](double x, double y) { return zero.value(x, y, 0.3); }, 0.3, 32);
  for (double v : gz.values) CHECK(v == 0.0);

  PotentialSpec spec(25, 0.6, 1);
  const double t = 0.7853981633974483;
  const auto g = sample_grid(
      [&](double x, double y) { return spec.value(x, y, t); }, t, 33);
  CHECK(g.nx == 33);
  CHECK(g.ny == 33);
  // lattice points hit the evaluator bit for bit (no interpolation)
  const double x7 = g.x_min + (g.x_max - g.x_min) * 7 / 32.0;
  const double y5 = g.y_min + (g.y_max - g.y_min) * 5 / 32.0;
  CHECK(g.values[5 * 33 + 7] == spec.value(x7, y5, t));
  CHECK_THROWS_AS(sample_grid([](double, double) { return 0.0; }, 0.0, 1),
                  std::invalid_argument);
}

TEST_CASE("controlled and uncontrolled grids stay visually close at eps = 0.6") {
  PotentialSpec spec(25, 0.6, 1);
  BarrierGeometry geom(spec, 2.0);
  const double t = 0.7853981633974483;  // pi/4
  const auto v = sample_grid(
      [&](double x, double y) { return spec.value(x, y, t); }, t, 128);
  const auto vt = sample_grid(
      [&](double x, double y) {
        return spec.value(x + geom.f_prime(y, t), y, t);
      },
      t, 128);
  double sup_v = 0.0, sup_diff = 0.0;
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    sup_v = std::max(sup_v, std::fabs(v.values[i]));
    sup_diff = std::max(sup_diff, std::fabs(vt.values[i] - v.values[i]));
  }
  CHECK(sup_diff / sup_v <= 0.5);
}
