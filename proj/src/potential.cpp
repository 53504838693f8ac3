#include "exb/potential.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "exb/prng.hpp"

namespace exb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Scratch for e^{i m y}, m = 1..N. thread_local keeps evaluation reentrant.
thread_local std::vector<double> tl_eyr, tl_eyi;

void fill_unit_powers(double angle, int n, std::vector<double>& re,
                      std::vector<double>& im) {
  re.resize(n);
  im.resize(n);
  const double cr = std::cos(angle);
  const double ci = std::sin(angle);
  double pr = cr, pi = ci;
  for (int k = 0; k < n; ++k) {
    re[k] = pr;
    im[k] = pi;
    const double nr = pr * cr - pi * ci;
    pi = pr * ci + pi * cr;
    pr = nr;
  }
}

}  // namespace

std::vector<double> sample_phases(int n_modes, std::uint64_t seed) {
  if (n_modes < 1) {
    throw std::invalid_argument("sample_phases: n_modes must be >= 1");
  }
  SplitMix64 rng(seed);
  std::vector<double> phases(static_cast<std::size_t>(n_modes) * n_modes);
  for (auto& p : phases) p = kTwoPi * rng.next_double();
  return phases;
}

double epsilon_from_physical(double v0, double b_field, double length_x,
                             double length_y, double omega, double c) {
  if (v0 <= 0 || b_field <= 0 || length_x <= 0 || length_y <= 0 || omega <= 0 ||
      c <= 0) {
    throw std::invalid_argument(
        "epsilon_from_physical: all arguments must be positive");
  }
  return 4.0 * std::numbers::pi * std::numbers::pi * (c * v0 / b_field) /
         (length_x * length_y * omega);
}

PotentialSpec::PotentialSpec(int n_modes, double epsilon, std::uint64_t rng_seed)
    : n_modes_(n_modes),
      epsilon_(epsilon),
      rng_seed_(rng_seed),
      phases_(sample_phases(n_modes, rng_seed)) {
  build_tables();
}

PotentialSpec::PotentialSpec(int n_modes, double epsilon,
                             std::vector<double> phases, std::uint64_t rng_seed)
    : n_modes_(n_modes),
      epsilon_(epsilon),
      rng_seed_(rng_seed),
      phases_(std::move(phases)) {
  if (n_modes_ < 1) {
    throw std::invalid_argument("PotentialSpec: n_modes must be >= 1");
  }
  if (phases_.size() != static_cast<std::size_t>(n_modes_) * n_modes_) {
    throw std::invalid_argument("PotentialSpec: phases must have n_modes^2 entries");
  }
  build_tables();
}

PotentialSpec PotentialSpec::with_epsilon(double epsilon) const {
  PotentialSpec out = *this;
  out.epsilon_ = epsilon;
  return out;
}

void PotentialSpec::build_tables() {
  const std::size_t count = static_cast<std::size_t>(n_modes_) * n_modes_;
  wre_.resize(count);
  wim_.resize(count);
  std::size_t idx = 0;
  for (int n = 1; n <= n_modes_; ++n) {
    for (int m = 1; m <= n_modes_; ++m, ++idx) {
      const double w =
          1.0 / std::pow(static_cast<double>(n) * n + static_cast<double>(m) * m,
                         1.5);
      wre_[idx] = w * std::cos(phases_[idx]);
      wim_[idx] = w * std::sin(phases_[idx]);
    }
  }
}

// Both evaluators share one kernel so value() and sample().value agree bit for
// bit. Per mode, cos/sin(n x + m y + phi - t) come from the complex product
// e^{i(n x - t)} * e^{i m y} * (w e^{i phi}); only two sincos calls per point.
FieldSample PotentialSpec::sample(double x, double y, double t) const {
  const int n_max = n_modes_;
  fill_unit_powers(y, n_max, tl_eyr, tl_eyi);
  const double* eyr = tl_eyr.data();
  const double* eyi = tl_eyi.data();

  const double cx = std::cos(x), sx = std::sin(x);
  // a = e^{i(n x - t)}, advanced by e^{i x} per row.
  double ar = std::cos(x - t), ai = std::sin(x - t);

  double sum_c = 0.0;   // sum w cos(chi)
  double sum_s = 0.0;   // sum w sin(chi)
  double sum_ns = 0.0;  // sum n w sin(chi)
  double sum_ms = 0.0;  // sum m w sin(chi)

  std::size_t idx = 0;
  for (int n = 1; n <= n_max; ++n) {
    double row_c0 = 0.0, row_c1 = 0.0;
    double row_s0 = 0.0, row_s1 = 0.0;
    double row_ms0 = 0.0, row_ms1 = 0.0;
    const double* wr = &wre_[idx];
    const double* wi = &wim_[idx];
    int m = 0;
    const int pairs = n_max & ~1;
    for (; m < pairs; m += 2) {
      const double br0 = ar * eyr[m] - ai * eyi[m];
      const double bi0 = ar * eyi[m] + ai * eyr[m];
      const double c0 = br0 * wr[m] - bi0 * wi[m];
      const double s0 = br0 * wi[m] + bi0 * wr[m];
      row_c0 += c0;
      row_s0 += s0;
      row_ms0 += (m + 1) * s0;
      const double br1 = ar * eyr[m + 1] - ai * eyi[m + 1];
      const double bi1 = ar * eyi[m + 1] + ai * eyr[m + 1];
      const double c1 = br1 * wr[m + 1] - bi1 * wi[m + 1];
      const double s1 = br1 * wi[m + 1] + bi1 * wr[m + 1];
      row_c1 += c1;
      row_s1 += s1;
      row_ms1 += (m + 2) * s1;
    }
    if (m < n_max) {
      const double br = ar * eyr[m] - ai * eyi[m];
      const double bi = ar * eyi[m] + ai * eyr[m];
      const double c = br * wr[m] - bi * wi[m];
      const double s = br * wi[m] + bi * wr[m];
      row_c0 += c;
      row_s0 += s;
      row_ms0 += (m + 1) * s;
    }
    const double row_c = row_c0 + row_c1;
    const double row_s = row_s0 + row_s1;
    sum_c += row_c;
    sum_s += row_s;
    sum_ns += n * row_s;
    sum_ms += row_ms0 + row_ms1;
    idx += n_max;
    const double nar = ar * cx - ai * sx;
    ai = ar * sx + ai * cx;
    ar = nar;
  }

  FieldSample out;
  out.value = epsilon_ * sum_c;
  out.grad_x = -epsilon_ * sum_ns;
  out.grad_y = -epsilon_ * sum_ms;
  out.dt_value = epsilon_ * sum_s;
  return out;
}

double PotentialSpec::value(double x, double y, double t) const {
  return sample(x, y, t).value;
}

double potential_value(const PotentialSpec& spec, double x, double y, double t) {
  return spec.value(x, y, t);
}

FieldSample field_sample(const PotentialSpec& spec, double x, double y, double t) {
  return spec.sample(x, y, t);
}

}  // namespace exb
