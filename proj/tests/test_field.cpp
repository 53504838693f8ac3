#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "exb/potential.hpp"
#include "exb/prng.hpp"
#include "oracles.hpp"

using namespace exb;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("sample_phases is deterministic and in range") {
  const auto a = sample_phases(25, 12345);
  const auto b = sample_phases(25, 12345);
  CHECK(a == b);
  CHECK(a.size() == 625);
  for (double p : a) {
    CHECK(p >= 0.0);
    CHECK(p < kTwoPi);
  }
  const auto single = sample_phases(1, 7);
  CHECK(single.size() == 1);
  CHECK(single[0] >= 0.0);
  CHECK(single[0] < kTwoPi);
  CHECK_THROWS_AS(sample_phases(0, 1), std::invalid_argument);
}

TEST_CASE("phase sample mean is statistically uniform") {
  // mean of 625 iid U[0, 2pi) draws: sigma = (2pi/sqrt(12))/25
  const double sigma = (kTwoPi / std::sqrt(12.0)) / 25.0;
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 99ull}) {
    const auto phases = sample_phases(25, seed);
    double mean = 0.0;
    for (double p : phases) mean += p;
    mean /= phases.size();
    CHECK(std::fabs(mean - std::numbers::pi) < 3.0 * sigma);
  }
}

TEST_CASE("potential value: degenerate and closed-form cases") {
  PotentialSpec zero(25, 0.0, 1);
  CHECK(zero.value(0.3, 1.2, 4.5) == 0.0);

  // single mode, phase 0: V(0,0,0) = eps / 2^{3/2}
  PotentialSpec single(1, 0.5, std::vector<double>{0.0}, 0);
  CHECK(single.value(0.0, 0.0, 0.0) ==
        doctest::Approx(0.5 / std::pow(2.0, 1.5)).epsilon(1e-14));
}

TEST_CASE("potential value matches extended-precision term sum") {
  PotentialSpec spec(25, 0.6, 1);
  SplitMix64 rng(77);
  for (int i = 0; i < 20; ++i) {
    const double x = rng.next_double(0, kTwoPi);
    const double y = rng.next_double(0, kTwoPi);
    const double t = rng.next_double(0, kTwoPi);
    const double ref = static_cast<double>(
        oracles::potential_reference(25, 0.6, spec.phases(), x, y, t));
    CHECK(std::fabs(spec.value(x, y, t) - ref) < 1e-12);
  }
}

TEST_CASE("field_sample: degenerate cases and value consistency") {
  PotentialSpec zero(25, 0.0, 1);
  const FieldSample z = zero.sample(1.0, 2.0, 3.0);
  CHECK(z.value == 0.0);
  CHECK(z.grad_x == 0.0);
  CHECK(z.grad_y == 0.0);
  CHECK(z.dt_value == 0.0);

  PotentialSpec single(1, 0.5, std::vector<double>{0.0}, 0);
  const FieldSample s = single.sample(0.0, 0.0, 0.0);
  CHECK(s.grad_x == 0.0);
  CHECK(s.grad_y == 0.0);
  CHECK(s.dt_value == 0.0);

  PotentialSpec spec(25, 0.9, 3);
  SplitMix64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const double x = rng.next_double(0, kTwoPi);
    const double y = rng.next_double(0, kTwoPi);
    const double t = rng.next_double(0, kTwoPi);
    CHECK(spec.sample(x, y, t).value == spec.value(x, y, t));
  }
}

TEST_CASE("analytic gradients match central differences at 1000 points") {
  PotentialSpec spec(25, 0.7, 2);
  SplitMix64 rng(11);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.next_double(-10, 10);
    const double y = rng.next_double(-10, 10);
    const double t = rng.next_double(0, 50);
    const FieldSample s = spec.sample(x, y, t);
    const double fdx = oracles::central_diff(
        [&](double u) { return spec.value(u, y, t); }, x);
    const double fdy = oracles::central_diff(
        [&](double u) { return spec.value(x, u, t); }, y);
    const double fdt = oracles::central_diff(
        [&](double u) { return spec.value(x, y, u); }, t);
    worst = std::max({worst, std::fabs(s.grad_x - fdx), std::fabs(s.grad_y - fdy),
                      std::fabs(s.dt_value - fdt)});
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("periodicity in x, y, t") {
  PotentialSpec spec(25, 0.6, 4);
  SplitMix64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const double x = rng.next_double(0, kTwoPi);
    const double y = rng.next_double(0, kTwoPi);
    const double t = rng.next_double(0, kTwoPi);
    const double v = spec.value(x, y, t);
    const double scale = std::max(1.0, std::fabs(v));
    CHECK(std::fabs(spec.value(x + kTwoPi, y, t) - v) / scale < 1e-12);
    CHECK(std::fabs(spec.value(x, y + kTwoPi, t) - v) / scale < 1e-12);
    CHECK(std::fabs(spec.value(x, y, t + kTwoPi) - v) / scale < 1e-12);
  }
}

TEST_CASE("value is linear in the amplitude at fixed phases") {
  PotentialSpec spec(25, 0.3, 9);
  const PotentialSpec doubled = spec.with_epsilon(0.6);
  SplitMix64 rng(17);
  for (int i = 0; i < 20; ++i) {
    const double x = rng.next_double(0, kTwoPi);
    const double y = rng.next_double(0, kTwoPi);
    const double t = rng.next_double(0, kTwoPi);
    CHECK(doubled.value(x, y, t) == doctest::Approx(2.0 * spec.value(x, y, t))
                                        .epsilon(1e-15));
  }
}

TEST_CASE("spec construction validates inputs and reproduces phases") {
  CHECK_THROWS_AS(PotentialSpec(0, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(PotentialSpec(3, 0.5, std::vector<double>(4, 0.0), 1),
                  std::invalid_argument);
  PotentialSpec a(25, 0.9, 42), b(25, 0.9, 42);
  CHECK(a.phases() == b.phases());
  CHECK(a.phase(1, 1) == a.phases()[0]);
  CHECK(a.phase(1, 2) == a.phases()[1]);
  CHECK(a.phase(2, 1) == a.phases()[25]);
}

TEST_CASE("epsilon_from_physical") {
  CHECK(epsilon_from_physical(1, 1, kTwoPi, kTwoPi, 1, 1) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(epsilon_from_physical(2, 4, kTwoPi, kTwoPi, 0.5, 1) ==
        doctest::Approx(1.0).epsilon(1e-14));
  const double e1 = epsilon_from_physical(1, 1, 3.0, 4.0, 5.0, 1);
  const double e2 = epsilon_from_physical(1, 2, 3.0, 4.0, 5.0, 1);
  CHECK(e1 == doctest::Approx(2.0 * e2).epsilon(1e-14));
  CHECK_THROWS_AS(epsilon_from_physical(0, 1, 1, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_from_physical(1, -1, 1, 1, 1, 1),
                  std::invalid_argument);
}
