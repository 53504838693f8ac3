#include "exb/control.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "exb/bessel.hpp"

namespace exb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

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

void ControlConfig::validate() const {
  if (mode == ControlMode::truncated && harmonics < 0) {
    throw std::invalid_argument("ControlConfig: harmonics must be >= 0");
  }
  if (!std::isfinite(x0) || !std::isfinite(control_scale)) {
    throw std::invalid_argument("ControlConfig: x0 and control_scale must be finite");
  }
}

BarrierGeometry::BarrierGeometry(const PotentialSpec& spec, double x0)
    : spec_(spec), x0_(x0) {
  const int nm = spec_.n_modes();
  cr_.assign(nm, 0.0);
  ci_.assign(nm, 0.0);
  // C_m = sum_n e^{i(n x0)} (w e^{i phi})_{n,m}; collapsing the n sum here makes
  // every later evaluation O(N) instead of O(N^2).
  const double cx = std::cos(x0), sx = std::sin(x0);
  double ar = cx, ai = sx;  // e^{i n x0}
  const auto& wre = spec_.weight_re();
  const auto& wim = spec_.weight_im();
  std::size_t idx = 0;
  for (int n = 1; n <= nm; ++n) {
    for (int m = 0; m < nm; ++m, ++idx) {
      cr_[m] += ar * wre[idx] - ai * wim[idx];
      ci_[m] += ar * wim[idx] + ai * wre[idx];
    }
    const double nar = ar * cx - ai * sx;
    ai = ar * sx + ai * cx;
    ar = nar;
  }
}

BarrierGeometry::YSums BarrierGeometry::ysums(double y) const {
  const int nm = spec_.n_modes();
  fill_unit_powers(y, nm, tl_eyr, tl_eyi);
  YSums s{0, 0, 0, 0, 0, 0};
  for (int m = 0; m < nm; ++m) {
    const double er = tl_eyr[m] * cr_[m] - tl_eyi[m] * ci_[m];
    const double ei = tl_eyr[m] * ci_[m] + tl_eyi[m] * cr_[m];
    const double mw = m + 1;
    s.pr += er;
    s.pi += ei;
    s.qr += mw * er;
    s.qi += mw * ei;
    s.rr += mw * mw * er;
    s.ri += mw * mw * ei;
  }
  return s;
}

BarrierGeometry::Transverse BarrierGeometry::transverse(double y) const {
  const YSums s = ysums(y);
  // d/dy (F_c + i F_s) = i sum m^2 C_m e^{imy}
  return Transverse{s.qr, s.qi, -s.ri, s.rr};
}

double BarrierGeometry::f(double y, double t) const {
  const YSums s = ysums(y);
  // f = eps Im[(1 - e^{-it}) P]
  const double ct = std::cos(t), st = std::sin(t);
  const double br = 1.0 - ct, bi = st;
  return spec_.epsilon() * (s.pr * bi + s.pi * br);
}

double BarrierGeometry::f_prime(double y, double t) const {
  const Transverse v = transverse(y);
  return spec_.epsilon() * (v.fc * (1.0 - std::cos(t)) - v.fs * std::sin(t));
}

double BarrierGeometry::f_second(double y, double t) const {
  const Transverse v = transverse(y);
  return spec_.epsilon() * (v.dfc * (1.0 - std::cos(t)) - v.dfs * std::sin(t));
}

double BarrierGeometry::f_prime_dot(double y, double t) const {
  const Transverse v = transverse(y);
  return spec_.epsilon() * (v.fc * std::sin(t) - v.fs * std::cos(t));
}

double BarrierGeometry::f_dot(double y, double t) const {
  return spec_.value(x0_, y, t);
}

double f_of(const PotentialSpec& spec, double x0, double y, double t) {
  return BarrierGeometry(spec, x0).f(y, t);
}

double f_prime(const PotentialSpec& spec, double x0, double y, double t) {
  return BarrierGeometry(spec, x0).f_prime(y, t);
}

double f_dot(const PotentialSpec& spec, double x0, double y, double t) {
  return spec.value(x0, y, t);
}

double exact_controlled_potential(const PotentialSpec& spec, double x0, double x,
                                  double y, double t) {
  BarrierGeometry geom(spec, x0);
  return spec.value(x + geom.f_prime(y, t), y, t);
}

double exact_control_term(const PotentialSpec& spec, double x0, double x,
                          double y, double t) {
  BarrierGeometry geom(spec, x0);
  return spec.value(x + geom.f_prime(y, t), y, t) - spec.value(x, y, t);
}

ControlGeometry control_geometry(const PotentialSpec& spec, double x0, double x,
                                 double y) {
  BarrierGeometry geom(spec, x0);
  const auto v = geom.transverse(y);
  const double eps = spec.epsilon();
  ControlGeometry out;
  out.f_c = v.fc;
  out.f_s = v.fs;
  out.rho = eps * std::hypot(v.fc, v.fs);
  out.theta = out.rho > 0.0 ? std::atan2(-eps * v.fc, -eps * v.fs) : 0.0;
  const int nm = spec.n_modes();
  out.eta.resize(static_cast<std::size_t>(nm) * nm);
  std::size_t idx = 0;
  for (int n = 1; n <= nm; ++n) {
    for (int m = 1; m <= nm; ++m, ++idx) {
      out.eta[idx] = n * x + m * y + spec.phase(n, m) + n * eps * v.fc;
    }
  }
  return out;
}

double fourier_mode_k(const PotentialSpec& spec, double x0, int k, double x,
                      double y, double t) {
  BarrierGeometry geom(spec, x0);
  const auto v = geom.transverse(y);
  const double eps = spec.epsilon();
  const double rho = eps * std::hypot(v.fc, v.fs);
  const double theta = rho > 0.0 ? std::atan2(-eps * v.fc, -eps * v.fs) : 0.0;
  const int nm = spec.n_modes();
  const int ak = k < 0 ? -k : k;
  std::vector<double> jk(ak + 1);
  double sum = 0.0;
  for (int n = 1; n <= nm; ++n) {
    bessel_jn_array(ak, n * rho, jk.data());
    double jn = jk[ak];
    if (k < 0 && (ak & 1)) jn = -jn;
    for (int m = 1; m <= nm; ++m) {
      const double eta = n * x + m * y + spec.phase(n, m) + n * eps * v.fc;
      const double w = 1.0 / std::pow(static_cast<double>(n) * n +
                                          static_cast<double>(m) * m,
                                      1.5);
      sum += jn * w * std::cos(eta + k * theta + (k - 1) * t);
    }
  }
  return eps * sum;
}

double truncated_controlled_potential(const PotentialSpec& spec, double x0,
                                      double x, double y, double t) {
  BarrierGeometry geom(spec, x0);
  const auto v = geom.transverse(y);
  const double eps = spec.epsilon();
  const double rho = eps * std::hypot(v.fc, v.fs);
  const double theta = rho > 0.0 ? std::atan2(-eps * v.fc, -eps * v.fs) : 0.0;
  const int nm = spec.n_modes();
  const double c1 = std::cos(t), s1 = std::sin(t);
  const double c2 = std::cos(2 * t), s2 = std::sin(2 * t);
  double sum = 0.0;
  double jk[4];
  for (int n = 1; n <= nm; ++n) {
    bessel_jn_array(3, n * rho, jk);
    for (int m = 1; m <= nm; ++m) {
      const double eta = n * x + m * y + spec.phase(n, m) + n * eps * v.fc;
      const double w = 1.0 / std::pow(static_cast<double>(n) * n +
                                          static_cast<double>(m) * m,
                                      1.5);
      const double a0 = jk[1] * std::cos(eta + theta);
      const double a1 = jk[0] * std::cos(eta) + jk[2] * std::cos(eta + 2 * theta);
      const double b1 = jk[0] * std::sin(eta) - jk[2] * std::sin(eta + 2 * theta);
      const double a2 =
          jk[3] * std::cos(eta + 3 * theta) - jk[1] * std::cos(eta - theta);
      const double b2 =
          -jk[3] * std::sin(eta + 3 * theta) - jk[1] * std::sin(eta - theta);
      sum += w * (a0 + a1 * c1 + b1 * s1 + a2 * c2 + b2 * s2);
    }
  }
  return eps * sum;
}

double truncated_potential(const PotentialSpec& spec, double x0, int harmonics,
                           double x, double y, double t) {
  if (harmonics < 0) {
    throw std::invalid_argument("truncated_potential: harmonics must be >= 0");
  }
  double sum = 0.0;
  for (int k = 1 - harmonics; k <= 1 + harmonics; ++k) {
    sum += fourier_mode_k(spec, x0, k, x, y, t);
  }
  return sum;
}

double norm_bound_epsilon_max(int n_modes) {
  return std::sqrt(std::numbers::pi) /
         (2.0 * n_modes * std::exp(1.5));
}

NormBoundReport verify_norm_bound(const PotentialSpec& spec, double x0,
                                  int resolution) {
  if (resolution < 2) {
    throw std::invalid_argument("verify_norm_bound: resolution must be >= 2");
  }
  const double eps = spec.epsilon();
  const double eps_max = norm_bound_epsilon_max(spec.n_modes());
  if (eps > eps_max) {
    throw std::domain_error(
        "verify_norm_bound: epsilon exceeds sqrt(pi)/(2 N e^{3/2})");
  }

  // sup |V(x + f', y, t) - V(x, y, t)| on the midpoint lattice. For each
  // (y, t) the shift f' is constant in x, so the n-row sums over m are hoisted
  // per y and each x evaluation is O(N).
  BarrierGeometry geom(spec, x0);
  const int nm = spec.n_modes();
  const int res = resolution;
  const double h = kTwoPi / res;
  std::vector<double> rowr(nm), rowi(nm);  // R_n(y) = sum_m (w e^{i phi}) e^{imy}
  const auto& wre = spec.weight_re();
  const auto& wim = spec.weight_im();
  double sup = 0.0;
  for (int iy = 0; iy < res; ++iy) {
    const double y = (iy + 0.5) * h;
    fill_unit_powers(y, nm, tl_eyr, tl_eyi);
    std::size_t idx = 0;
    for (int n = 0; n < nm; ++n) {
      double sr = 0.0, si = 0.0;
      for (int m = 0; m < nm; ++m, ++idx) {
        sr += tl_eyr[m] * wre[idx] - tl_eyi[m] * wim[idx];
        si += tl_eyr[m] * wim[idx] + tl_eyi[m] * wre[idx];
      }
      rowr[n] = sr;
      rowi[n] = si;
    }
    const auto tv = geom.transverse(y);
    for (int it = 0; it < res; ++it) {
      const double t = (it + 0.5) * h;
      const double shift =
          eps * (tv.fc * (1.0 - std::cos(t)) - tv.fs * std::sin(t));
      for (int ix = 0; ix < res; ++ix) {
        const double x = (ix + 0.5) * h;
        // V at (x, .) and (x + shift, .): two O(N) phase recurrences
        double v0 = 0.0, v1 = 0.0;
        {
          const double cs = std::cos(x - t), sn = std::sin(x - t);
          const double cx = std::cos(x), sx = std::sin(x);
          double ar = cs, ai = sn;
          for (int n = 0; n < nm; ++n) {
            v0 += ar * rowr[n] - ai * rowi[n];
            const double nar = ar * cx - ai * sx;
            ai = ar * sx + ai * cx;
            ar = nar;
          }
        }
        {
          const double xs = x + shift;
          const double cs = std::cos(xs - t), sn = std::sin(xs - t);
          const double cx = std::cos(xs), sx = std::sin(xs);
          double ar = cs, ai = sn;
          for (int n = 0; n < nm; ++n) {
            v1 += ar * rowr[n] - ai * rowi[n];
            const double nar = ar * cx - ai * sx;
            ai = ar * sx + ai * cx;
            ar = nar;
          }
        }
        const double control = std::fabs(eps * (v1 - v0));
        if (control > sup) sup = control;
      }
    }
  }

  NormBoundReport report;
  report.epsilon = eps;
  report.epsilon_max = eps_max;
  report.sup_control = sup;
  report.bound = eps * eps * static_cast<double>(spec.n_modes()) *
                 spec.n_modes() * std::exp(3.0) / (4.0 * std::numbers::pi);
  report.holds = report.sup_control <= report.bound;
  report.resolution = res;
  return report;
}

}  // namespace exb
