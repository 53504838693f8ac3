#include "exb/fields.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "exb/bessel.hpp"

namespace exb {

namespace {

thread_local std::vector<double> tl_eyr, tl_eyi;
thread_local std::vector<double> tl_dr, tl_di, tl_er, tl_ei;
thread_local std::vector<double> tl_jk;
thread_local std::vector<std::complex<double>> tl_gk;

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

inline double signed_order(const double* table, int k) {
  if (k >= 0) return table[k];
  return (k & 1) ? -table[-k] : table[-k];
}

FieldSample blend(const FieldSample& base, const FieldSample& controlled,
                  double scale) {
  FieldSample out;
  out.value = base.value + scale * (controlled.value - base.value);
  out.grad_x = base.grad_x + scale * (controlled.grad_x - base.grad_x);
  out.grad_y = base.grad_y + scale * (controlled.grad_y - base.grad_y);
  out.dt_value = base.dt_value + scale * (controlled.dt_value - base.dt_value);
  return out;
}

}  // namespace

ExactControlledField::ExactControlledField(PotentialSpec spec, double x0,
                                           double control_scale)
    : geom_(spec, x0), scale_(control_scale) {}

FieldSample ExactControlledField::sample(double x, double y, double t) const {
  const auto& spec = geom_.spec();
  const double eps = spec.epsilon();
  const auto tv = geom_.transverse(y);
  const double ct = std::cos(t), st = std::sin(t);
  const double shift = eps * (tv.fc * (1.0 - ct) - tv.fs * st);
  const double shift_y = eps * (tv.dfc * (1.0 - ct) - tv.dfs * st);
  const double shift_t = eps * (tv.fc * st - tv.fs * ct);

  const FieldSample s = spec.sample(x + shift, y, t);
  FieldSample out;
  out.value = s.value;
  out.grad_x = s.grad_x;
  out.grad_y = s.grad_x * shift_y + s.grad_y;
  out.dt_value = s.grad_x * shift_t + s.dt_value;
  if (scale_ == 1.0) return out;
  return blend(spec.sample(x, y, t), out, scale_);
}

TruncatedControlledField::TruncatedControlledField(PotentialSpec spec, double x0,
                                                   int harmonics,
                                                   double control_scale)
    : geom_(spec, x0), harmonics_(harmonics), scale_(control_scale) {
  if (harmonics_ < 0) {
    throw std::invalid_argument(
        "TruncatedControlledField: harmonics must be >= 0");
  }
}

FieldSample TruncatedControlledField::sample(double x, double y, double t) const {
  const auto& spec = geom_.spec();
  const double eps = spec.epsilon();
  const int nm = spec.n_modes();
  const auto tv = geom_.transverse(y);

  const double rho = eps * std::hypot(tv.fc, tv.fs);
  double sin_th = 0.0, cos_th = 1.0, drho = 0.0, dth = 0.0;
  if (rho > 0.0) {
    sin_th = -eps * tv.fc / rho;
    cos_th = -eps * tv.fs / rho;
    drho = eps * eps * (tv.fc * tv.dfc + tv.fs * tv.dfs) / rho;
    dth = eps * eps * (tv.fs * tv.dfc - tv.fc * tv.dfs) / (rho * rho);
  }

  // Inner m-sums D_n = sum_m w e^{i eta_part}, E_n = sum_m m w e^{i eta_part}
  // with eta_{n,m} = n(x + eps F_c) + m y + phi_{n,m}.
  fill_unit_powers(y, nm, tl_eyr, tl_eyi);
  tl_dr.resize(nm);
  tl_di.resize(nm);
  tl_er.resize(nm);
  tl_ei.resize(nm);
  const auto& wre = spec.weight_re();
  const auto& wim = spec.weight_im();
  std::size_t idx = 0;
  for (int n = 0; n < nm; ++n) {
    double dr = 0, di = 0, er = 0, ei = 0;
    for (int m = 0; m < nm; ++m, ++idx) {
      const double cr = tl_eyr[m] * wre[idx] - tl_eyi[m] * wim[idx];
      const double cim = tl_eyr[m] * wim[idx] + tl_eyi[m] * wre[idx];
      dr += cr;
      di += cim;
      er += (m + 1) * cr;
      ei += (m + 1) * cim;
    }
    tl_dr[n] = dr;
    tl_di[n] = di;
    tl_er[n] = er;
    tl_ei[n] = ei;
  }

  const int hh = harmonics_;
  const int kmin = 1 - hh, kmax = 1 + hh;
  const int order_max = hh + 2;
  tl_jk.resize(order_max + 1);

  // g_k = e^{i(k Theta + (k-1) t)} for k in [kmin, kmax]
  const std::complex<double> e_th(cos_th, sin_th);
  const std::complex<double> e_t(std::cos(t), std::sin(t));
  tl_gk.resize(kmax - kmin + 1);
  auto* g = tl_gk.data();
  {
    // e^{i(kmin Theta + (kmin-1) t)} by repeated multiplication; kmin - 1 <= 0
    // and kmin may have either sign, so conjugates implement the inverses.
    std::complex<double> gk(1.0, 0.0);
    for (int j = 0; j < std::abs(kmin); ++j) gk *= (kmin > 0 ? e_th : std::conj(e_th));
    for (int j = 0; j < 1 - kmin; ++j) gk *= std::conj(e_t);
    const std::complex<double> step = e_th * e_t;
    for (int k = kmin; k <= kmax; ++k) {
      g[k - kmin] = gk;
      gk *= step;
    }
  }

  const double bx = x + eps * tv.fc;
  const double cb = std::cos(bx), sb = std::sin(bx);
  double ar = cb, ai = sb;  // b^n

  double val = 0, gx = 0, gy = 0, gt = 0;
  for (int n = 1; n <= nm; ++n) {
    const double sr = ar * tl_dr[n - 1] - ai * tl_di[n - 1];
    const double si = ar * tl_di[n - 1] + ai * tl_dr[n - 1];
    const double tr = ar * tl_er[n - 1] - ai * tl_ei[n - 1];
    const double ti = ar * tl_ei[n - 1] + ai * tl_er[n - 1];
    bessel_jn_array(order_max, n * rho, tl_jk.data());
    for (int k = kmin; k <= kmax; ++k) {
      const std::complex<double>& gk = g[k - kmin];
      const double re_sg = sr * gk.real() - si * gk.imag();
      const double im_sg = sr * gk.imag() + si * gk.real();
      const double im_tg = tr * gk.imag() + ti * gk.real();
      const double jk = signed_order(tl_jk.data(), k);
      const double jprime =
          0.5 * (signed_order(tl_jk.data(), k - 1) -
                 signed_order(tl_jk.data(), k + 1));
      val += jk * re_sg;
      gx -= n * jk * im_sg;
      gt -= (k - 1) * jk * im_sg;
      gy += jprime * n * drho * re_sg -
            jk * (im_tg + (n * eps * tv.dfc + k * dth) * im_sg);
    }
    const double nar = ar * cb - ai * sb;
    ai = ar * sb + ai * cb;
    ar = nar;
  }

  FieldSample out;
  out.value = eps * val;
  out.grad_x = eps * gx;
  out.grad_y = eps * gy;
  out.dt_value = eps * gt;
  if (scale_ == 1.0) return out;
  return blend(spec.sample(x, y, t), out, scale_);
}

std::unique_ptr<FieldModel> make_field(const PotentialSpec& spec,
                                       const ControlConfig& config) {
  config.validate();
  switch (config.mode) {
    case ControlMode::none:
      return std::make_unique<PlainField>(spec);
    case ControlMode::exact:
      return std::make_unique<ExactControlledField>(spec, config.x0,
                                                    config.control_scale);
    case ControlMode::truncated:
      return std::make_unique<TruncatedControlledField>(
          spec, config.x0, config.harmonics, config.control_scale);
  }
  throw std::invalid_argument("make_field: unknown control mode");
}

FieldSample control_field_sample(const PotentialSpec& spec,
                                 const ControlConfig& config, double x, double y,
                                 double t) {
  return make_field(spec, config)->sample(x, y, t);
}

}  // namespace exb
