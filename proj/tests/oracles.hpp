#ifndef EXB_TESTS_ORACLES_HPP
#define EXB_TESTS_ORACLES_HPP

// Independent numerical oracles used by the tests. These deliberately avoid
// the library's evaluation paths: plain term-by-term sums in extended
// precision, adaptive Simpson quadrature, and midpoint quadrature of the
// Bessel integral definition.

#include <cmath>
#include <functional>

namespace oracles {

// Term-by-term potential sum in long double, n outer, m inner.
inline long double potential_reference(int n_modes, double epsilon,
                                       const std::vector<double>& phases,
                                       double x, double y, double t) {
  long double sum = 0.0L;
  for (int n = 1; n <= n_modes; ++n) {
    for (int m = 1; m <= n_modes; ++m) {
      const long double q = static_cast<long double>(n) * n +
                            static_cast<long double>(m) * m;
      const long double chi = static_cast<long double>(n) * x +
                              static_cast<long double>(m) * y +
                              phases[static_cast<std::size_t>(n - 1) * n_modes +
                                     (m - 1)] -
                              t;
      sum += std::cos(chi) / (q * std::sqrt(q));
    }
  }
  return epsilon * sum;
}

// Adaptive Simpson on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol, int depth = 24) {
  struct Impl {
    const std::function<double(double)>& f;
    double run(double a, double b, double fa, double fm, double fb, double whole,
               double tol, int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
      }
      return run(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             run(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  } impl{f};
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return impl.run(a, b, fa, fm, fb, whole, tol, depth);
}

// (1/pi) int_0^pi cos(k u - z sin u) du by midpoint rule; spectrally accurate
// because the integrand extends to an even periodic function.
inline double bessel_quadrature(int k, double z, int points = 8192) {
  const double h = M_PI / points;
  double s = 0.0;
  for (int j = 0; j < points; ++j) {
    const double u = (j + 0.5) * h;
    s += std::cos(k * u - z * std::sin(u));
  }
  return s * h / M_PI;
}

// Central difference of a 1D callable.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracles

#endif
