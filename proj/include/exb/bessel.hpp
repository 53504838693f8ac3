#ifndef EXB_BESSEL_HPP
#define EXB_BESSEL_HPP

namespace exb {

/// Bessel functions of the first kind, integer order.
///
/// J_0..J_kmax at argument z in one pass (Miller downward recurrence with
/// Neumann-series normalization; negative z handled by parity). Accurate to
/// ~1e-14 absolute for |z| <= 100, which the tests pin against the integral
/// definition (1/pi) int_0^pi cos(k u - z sin u) du.
void bessel_jn_array(int kmax, double z, double* out);

/// Single value J_k(z); k may be negative (J_{-k} = (-1)^k J_k).
/// Orders with |k| > 8 are outside this library's contract and throw
/// std::invalid_argument.
double bessel_j(int k, double z);

}  // namespace exb

#endif
