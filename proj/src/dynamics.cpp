#include "exb/dynamics.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "exb/prng.hpp"

namespace exb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (5th-order weights minus the embedded 4th-order weights).
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                 e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                 e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

struct State {
  double x, y, e;
};

struct Deriv {
  double dx, dy, de;
};

inline Deriv rhs(const FieldModel& field, double t, const State& s) {
  const FieldSample f = field.sample(s.x, s.y, t);
  return Deriv{-f.grad_y, f.grad_x, -f.dt_value};
}

// Barrier images x0 + 2*pi*Z; escape when x leaves the pair bracketing x_init.
struct EscapeWindow {
  double upper, lower;
  EscapeWindow(double x0, double x_init) {
    upper = x0 + kTwoPi * std::ceil((x_init - x0) / kTwoPi);
    lower = upper - kTwoPi;
  }
  bool escaped(double x) const { return x > upper || x < lower; }
};

}  // namespace

TrajectoryRecord integrate(const FieldModel& field, double x, double y,
                           double tau0, double t_final,
                           const IntegratorOptions& opts,
                           const std::optional<EscapeRule>& escape,
                           const StepObserver& observer) {
  if (!(opts.tol >= 1e-13 && opts.tol <= 1e-6)) {
    throw std::invalid_argument("integrate: tol must lie in [1e-13, 1e-6]");
  }
  if (t_final < tau0) {
    throw std::invalid_argument("integrate: t_final must be >= tau0");
  }

  TrajectoryRecord rec;
  rec.initial_x = x;
  rec.initial_y = y;
  rec.tau0 = tau0;

  std::optional<EscapeWindow> window;
  if (escape) window.emplace(escape->barrier_x0, x);

  State s{x, y, 0.0};
  double t = tau0;

  // Section bookkeeping: land on every t = 2*pi*k in [tau0, t_final].
  long section_k = static_cast<long>(std::ceil(tau0 / kTwoPi - 1e-12));
  auto record_section = [&](long k) -> bool {
    rec.poincare_points.push_back(
        {static_cast<int>(k), s.x, s.y});
    if (opts.track_energy) rec.energy_track.push_back(s.e);
    if (window && window->escaped(s.x)) {
      rec.escaped_at = static_cast<int>(k);
      return escape->stop_on_escape;
    }
    return false;
  };
  if (std::fabs(section_k * kTwoPi - tau0) < 1e-9) {
    t = section_k * kTwoPi;
    if (record_section(section_k)) return rec;
    ++section_k;
  }

  double h = std::clamp(opts.h_init, opts.h_min, opts.h_max);
  Deriv k1 = rhs(field, t, s);

  const double tiny = 1e-12;
  while (t < t_final - tiny) {
    const double section_t = section_k * kTwoPi;
    const double target = std::min(section_t, t_final);
    bool landing = false;
    double h_try = h;
    if (t + h_try >= target - tiny) {
      h_try = target - t;
      landing = true;
    }

    const State s2{s.x + h_try * a21 * k1.dx, s.y + h_try * a21 * k1.dy,
                   s.e + h_try * a21 * k1.de};
    const Deriv k2 = rhs(field, t + c2 * h_try, s2);
    const State s3{s.x + h_try * (a31 * k1.dx + a32 * k2.dx),
                   s.y + h_try * (a31 * k1.dy + a32 * k2.dy),
                   s.e + h_try * (a31 * k1.de + a32 * k2.de)};
    const Deriv k3 = rhs(field, t + c3 * h_try, s3);
    const State s4{s.x + h_try * (a41 * k1.dx + a42 * k2.dx + a43 * k3.dx),
                   s.y + h_try * (a41 * k1.dy + a42 * k2.dy + a43 * k3.dy),
                   s.e + h_try * (a41 * k1.de + a42 * k2.de + a43 * k3.de)};
    const Deriv k4 = rhs(field, t + c4 * h_try, s4);
    const State s5{
        s.x + h_try * (a51 * k1.dx + a52 * k2.dx + a53 * k3.dx + a54 * k4.dx),
        s.y + h_try * (a51 * k1.dy + a52 * k2.dy + a53 * k3.dy + a54 * k4.dy),
        s.e + h_try * (a51 * k1.de + a52 * k2.de + a53 * k3.de + a54 * k4.de)};
    const Deriv k5 = rhs(field, t + c5 * h_try, s5);
    const State s6{s.x + h_try * (a61 * k1.dx + a62 * k2.dx + a63 * k3.dx +
                                  a64 * k4.dx + a65 * k5.dx),
                   s.y + h_try * (a61 * k1.dy + a62 * k2.dy + a63 * k3.dy +
                                  a64 * k4.dy + a65 * k5.dy),
                   s.e + h_try * (a61 * k1.de + a62 * k2.de + a63 * k3.de +
                                  a64 * k4.de + a65 * k5.de)};
    const Deriv k6 = rhs(field, t + h_try, s6);
    const State s7{s.x + h_try * (b1 * k1.dx + b3 * k3.dx + b4 * k4.dx +
                                  b5 * k5.dx + b6 * k6.dx),
                   s.y + h_try * (b1 * k1.dy + b3 * k3.dy + b4 * k4.dy +
                                  b5 * k5.dy + b6 * k6.dy),
                   s.e + h_try * (b1 * k1.de + b3 * k3.de + b4 * k4.de +
                                  b5 * k5.de + b6 * k6.de)};
    const Deriv k7 = rhs(field, t + h_try, s7);  // FSAL

    const double ex = h_try * (e1 * k1.dx + e3 * k3.dx + e4 * k4.dx +
                               e5 * k5.dx + e6 * k6.dx + e7 * k7.dx);
    const double ey = h_try * (e1 * k1.dy + e3 * k3.dy + e4 * k4.dy +
                               e5 * k5.dy + e6 * k6.dy + e7 * k7.dy);
    const double ee = h_try * (e1 * k1.de + e3 * k3.de + e4 * k4.de +
                               e5 * k5.de + e6 * k6.de + e7 * k7.de);
    const double err =
        std::max({std::fabs(ex), std::fabs(ey), std::fabs(ee)});

    if (err <= opts.tol * h_try) {
      s = s7;
      k1 = k7;
      ++rec.n_steps;
      if (landing) {
        if (target == section_t && section_t <= t_final + tiny) {
          t = section_t;  // kill accumulated time drift at every section
          if (record_section(section_k)) return rec;
          ++section_k;
        } else {
          t = target;
        }
      } else {
        t += h_try;
      }
      if (observer) observer(t, s.x, s.y);
      if (!landing) {
        const double grow =
            0.9 * std::pow(opts.tol * h_try / std::max(err, 1e-300), 0.2);
        h = std::min(h_try * std::clamp(grow, 0.2, 5.0), opts.h_max);
      }
    } else {
      ++rec.n_rejected;
      const double shrink = 0.9 * std::pow(opts.tol * h_try / err, 0.2);
      h = h_try * std::clamp(shrink, 0.1, 0.9);
      if (h < opts.h_min) {
        rec.failed = true;
        rec.failure_reason = "step size underflow at t = " + std::to_string(t);
        return rec;
      }
    }
  }
  return rec;
}

std::optional<int> detect_escape(const TrajectoryRecord& record, double x0) {
  if (record.poincare_points.empty()) return std::nullopt;
  const EscapeWindow window(x0, record.initial_x);
  for (const auto& p : record.poincare_points) {
    if (window.escaped(p.x)) return p.section_index;
  }
  return std::nullopt;
}

void EnsembleConfig::validate() const {
  if (n_traj < 1) throw std::invalid_argument("EnsembleConfig: n_traj must be >= 1");
  if (!(t_final > 0)) throw std::invalid_argument("EnsembleConfig: t_final must be > 0");
  if (!(strip_x_max > strip_x_min) || !(strip_y_max > strip_y_min)) {
    throw std::invalid_argument("EnsembleConfig: empty initial strip");
  }
  control.validate();
}

std::vector<std::pair<double, double>> ensemble_initial_conditions(
    const EnsembleConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<double, double>> ics;
  ics.reserve(cfg.n_traj);
  if (cfg.grid_init) {
    const int nx = static_cast<int>(std::ceil(std::sqrt(double(cfg.n_traj))));
    const int ny = (cfg.n_traj + nx - 1) / nx;
    for (int i = 0; i < cfg.n_traj; ++i) {
      const int ix = i % nx, iy = i / nx;
      ics.emplace_back(
          cfg.strip_x_min +
              (ix + 0.5) * (cfg.strip_x_max - cfg.strip_x_min) / nx,
          cfg.strip_y_min +
              (iy + 0.5) * (cfg.strip_y_max - cfg.strip_y_min) / ny);
    }
  } else {
    SplitMix64 rng(cfg.seed);
    for (int i = 0; i < cfg.n_traj; ++i) {
      const double x = rng.next_double(cfg.strip_x_min, cfg.strip_x_max);
      const double y = rng.next_double(cfg.strip_y_min, cfg.strip_y_max);
      ics.emplace_back(x, y);
    }
  }
  return ics;
}

EnsembleResult run_ensemble(const PotentialSpec& spec, const EnsembleConfig& cfg) {
  const auto field = make_field(spec, cfg.control);
  return run_ensemble(*field, cfg);
}

EnsembleResult run_ensemble(const FieldModel& field, const EnsembleConfig& cfg) {
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();
  const auto ics = ensemble_initial_conditions(cfg);

  IntegratorOptions opts;
  opts.tol = cfg.tol;
  opts.track_energy = cfg.track_energy;
  const EscapeRule rule{cfg.control.x0, cfg.stop_at_escape};

  EnsembleResult result;
  result.records.resize(cfg.n_traj);

  unsigned n_threads = cfg.n_threads > 0
                           ? static_cast<unsigned>(cfg.n_threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, cfg.n_traj);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= cfg.n_traj) break;
      result.records[i] = integrate(field, ics[i].first, ics[i].second, 0.0,
                                    cfg.t_final, opts, rule);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  EnsembleReport& rep = result.report;
  rep.config = cfg;
  rep.n_traj = cfg.n_traj;
  rep.first_crossing_times.assign(cfg.n_traj,
                                  std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < cfg.n_traj; ++i) {
    const auto& r = result.records[i];
    if (r.failed) {
      ++rep.n_failed;
      continue;
    }
    if (r.escaped_at) {
      ++rep.n_escaped;
      rep.first_crossing_times[i] = kTwoPi * (*r.escaped_at);
    }
  }
  const int counted = rep.n_traj - rep.n_failed;
  rep.escape_fraction = counted > 0 ? double(rep.n_escaped) / counted : 0.0;
  rep.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

double barrier_invariance_check(const PotentialSpec& spec, double x0,
                                std::span<const double> y_samples,
                                double t_final, double tol,
                                double control_scale) {
  const ExactControlledField field(spec, x0, control_scale);
  const BarrierGeometry geom(spec, x0);
  IntegratorOptions opts;
  opts.tol = tol;
  double worst = 0.0;
  for (const double y0 : y_samples) {
    double dev = 0.0;
    // The invariant curve of V(x + f'(y,t), y, t) is x = x0 - f'(y, t):
    // on it the shifted argument x + f' equals x0, so dx/dt = -V_x(x0) f''
    // - V_y(x0) while d/dt[-f'] = -f'' dy/dt - df'/dt with dy/dt = V_x(x0)
    // and df'/dt = V_y(x0); the two cancel identically.
    auto watch = [&](double t, double x, double y) {
      const double d = std::fabs(x - x0 + geom.f_prime(y, t));
      if (d > dev) dev = d;
    };
    // f'(y, 0) = 0, so the curve passes through x = x0 at tau0 = 0.
    const auto rec = integrate(field, x0, y0, 0.0, t_final, opts, std::nullopt,
                               watch);
    if (rec.failed) {
      throw std::runtime_error("barrier_invariance_check: integration failed");
    }
    if (dev > worst) worst = dev;
  }
  return worst;
}

}  // namespace exb
