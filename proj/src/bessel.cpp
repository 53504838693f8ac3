#include "exb/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace exb {

void bessel_jn_array(int kmax, double z, double* out) {
  const double az = std::fabs(z);
  if (az == 0.0) {
    out[0] = 1.0;
    for (int k = 1; k <= kmax; ++k) out[k] = 0.0;
    return;
  }

  // Start far enough above both the requested order and the turning point
  // k ~ z that the contaminating (growing) solution has died off.
  int start = static_cast<int>(az) + 1;
  if (start < kmax) start = kmax;
  start += 24 + static_cast<int>(8.0 * std::cbrt(az));
  if (start & 1) ++start;

  const double two_over_z = 2.0 / az;
  double above = 0.0;      // J_{k+1} (unnormalized)
  double current = 1e-30;  // J_k
  double norm = 0.0;       // J_0 + 2 J_2 + 2 J_4 + ... = 1
  for (int k = start; k >= 1; --k) {
    const double below = k * two_over_z * current - above;
    above = current;
    current = below;
    const int order = k - 1;
    if (order <= kmax) out[order] = current;
    if ((order & 1) == 0) norm += (order == 0) ? current : 2.0 * current;
    if (std::fabs(current) > 1e250) {
      above *= 1e-250;
      current *= 1e-250;
      norm *= 1e-250;
      for (int j = order; j <= kmax; ++j) out[j] *= 1e-250;
    }
  }
  const double scale = 1.0 / norm;
  for (int k = 0; k <= kmax; ++k) out[k] *= scale;

  if (z < 0.0) {
    for (int k = 1; k <= kmax; k += 2) out[k] = -out[k];
  }
}

double bessel_j(int k, double z) {
  const int ak = k < 0 ? -k : k;
  if (ak > 8) {
    throw std::invalid_argument("bessel_j: order out of range (|k| <= 8)");
  }
  double table[9];
  bessel_jn_array(ak, z, table);
  double v = table[ak];
  if (k < 0 && (ak & 1)) v = -v;
  return v;
}

}  // namespace exb
