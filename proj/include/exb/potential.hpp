#ifndef EXB_POTENTIAL_HPP
#define EXB_POTENTIAL_HPP

#include <cstdint>
#include <vector>

namespace exb {

/// Value and first derivatives of a scalar field at one space-time point.
struct FieldSample {
  double value = 0.0;     // V
  double grad_x = 0.0;    // dV/dx
  double grad_y = 0.0;    // dV/dy
  double dt_value = 0.0;  // dV/dt
};

/// Draw an n x n matrix of i.i.d. phases, uniform on [0, 2*pi), from a
/// SplitMix64 stream. Row-major, entry (n,m) at index (n-1)*n_modes + (m-1);
/// n multiplies x, m multiplies y. Same seed gives the same matrix bit for bit.
/// Throws std::invalid_argument if n_modes == 0.
std::vector<double> sample_phases(int n_modes, std::uint64_t seed);

/// Dimensionless amplitude 4*pi^2 (c V0 / B) / (L * ell * omega).
/// All arguments must be positive; throws std::invalid_argument otherwise.
double epsilon_from_physical(double v0, double b_field, double length_x,
                             double length_y, double omega, double c);

/// Turbulent drift-wave potential
///
///   V(x,y,t) = eps * sum_{n,m=1..N} cos(n x + m y + phi_{n,m} - t) / (n^2+m^2)^{3/2}
///
/// with seeded random phases. Immutable after construction; all evaluation
/// is pure and safe for unrestricted concurrent use. The mode sum is always
/// taken n-outer, m-inner so results are reproducible.
class PotentialSpec {
 public:
  /// Phases drawn from SplitMix64(seed).
  PotentialSpec(int n_modes, double epsilon, std::uint64_t rng_seed);

  /// Explicit phase matrix (row-major, n_modes^2 entries, each in [0, 2*pi)).
  /// The seed argument is carried as provenance only.
  PotentialSpec(int n_modes, double epsilon, std::vector<double> phases,
                std::uint64_t rng_seed);

  int n_modes() const { return n_modes_; }
  double epsilon() const { return epsilon_; }
  std::uint64_t rng_seed() const { return rng_seed_; }
  const std::vector<double>& phases() const { return phases_; }
  double phase(int n, int m) const {  // 1-based mode indices
    return phases_[static_cast<std::size_t>(n - 1) * n_modes_ + (m - 1)];
  }

  /// Same modes and phases, different amplitude.
  PotentialSpec with_epsilon(double epsilon) const;

  double value(double x, double y, double t) const;
  FieldSample sample(double x, double y, double t) const;

  // Precomputed per-mode complex weights e^{i phi_{n,m}} / (n^2+m^2)^{3/2},
  // row-major like phases(). Exposed for the evaluation kernels in control.
  const std::vector<double>& weight_re() const { return wre_; }
  const std::vector<double>& weight_im() const { return wim_; }

 private:
  void build_tables();

  int n_modes_;
  double epsilon_;
  std::uint64_t rng_seed_;
  std::vector<double> phases_;
  std::vector<double> wre_, wim_;
};

/// Free-function forms of the two evaluators.
double potential_value(const PotentialSpec& spec, double x, double y, double t);
FieldSample field_sample(const PotentialSpec& spec, double x, double y, double t);

}  // namespace exb

#endif
