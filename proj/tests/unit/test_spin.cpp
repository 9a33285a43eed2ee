#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "squeezelab/analytic.hpp"
#include "squeezelab/error.hpp"
#include "squeezelab/spin.hpp"

using namespace squeezelab;
using doctest::Approx;

namespace {

void check_moments_close(const SpinMoments& a, const SpinMoments& b, double scale1,
                         double scale2, double tol) {
  CHECK(std::abs(a.sx - b.sx) <= tol * std::max(std::abs(b.sx), scale1));
  CHECK(std::abs(a.sy - b.sy) <= tol * std::max(std::abs(b.sy), scale1));
  CHECK(std::abs(a.sz - b.sz) <= tol * std::max(std::abs(b.sz), scale1));
  CHECK(std::abs(a.sy2 - b.sy2) <= tol * std::max(std::abs(b.sy2), scale2));
  CHECK(std::abs(a.sz2 - b.sz2) <= tol * std::max(std::abs(b.sz2), scale2));
  CHECK(std::abs(a.syz - b.syz) <= tol * std::max(std::abs(b.syz), scale2));
}

}  // namespace

TEST_CASE("css amplitudes follow the binomial distribution") {
  const auto half = css_state(0.5);
  REQUIRE(half.dimension() == 2);
  CHECK(half.amplitudes()[0].real() == Approx(1.0 / std::sqrt(2.0)));
  CHECK(half.amplitudes()[1].real() == Approx(1.0 / std::sqrt(2.0)));

  const auto one = css_state(1.0);
  REQUIRE(one.dimension() == 3);
  CHECK(one.amplitudes()[0].real() == Approx(0.5));
  CHECK(one.amplitudes()[1].real() == Approx(1.0 / std::sqrt(2.0)));
  CHECK(one.amplitudes()[2].real() == Approx(0.5));

  for (double s : {0.5, 3.0, 17.5, 1000.0, 20000.0}) {
    CHECK(std::abs(css_state(s).norm_squared() - 1.0) < 1e-12);
  }
}

TEST_CASE("css_state rejects invalid spins") {
  CHECK_THROWS_AS(css_state(0.3), InvalidArgument);
  CHECK_THROWS_AS(css_state(-1.0), InvalidArgument);
  CHECK_THROWS_AS(css_state(0.0), InvalidArgument);
  CHECK_THROWS_AS(css_state(NAN), InvalidArgument);
}

TEST_CASE("css moments") {
  const auto m = moments(css_state(10.0));
  CHECK(m.sx == Approx(10.0).epsilon(1e-12));
  CHECK(std::abs(m.sy) < 1e-12);
  CHECK(std::abs(m.sz) < 1e-12);
  CHECK(m.sy2 == Approx(5.0).epsilon(1e-12));
  CHECK(m.sz2 == Approx(5.0).epsilon(1e-12));
  CHECK(std::abs(m.syz) < 1e-12);
}

TEST_CASE("stretched state has transverse variance S/2") {
  for (double s : {0.5, 2.0, 7.5}) {
    const auto m = moments(SpinState::eigenstate(s, s));
    CHECK(m.sz == Approx(s));
    CHECK(std::abs(m.sx) < 1e-14);
    CHECK(std::abs(m.sy) < 1e-14);
    CHECK(m.sy2 == Approx(s / 2));
  }
}

TEST_CASE("pure z rotation turns the mean spin") {
  const auto m = moments(apply_twist(css_state(50.0), {0.3, 0.0}));
  CHECK(m.sx == Approx(50.0 * std::cos(0.3)).epsilon(1e-12));
  CHECK(m.sy == Approx(50.0 * std::sin(0.3)).epsilon(1e-12));
}

TEST_CASE("ladder moments agree with dense operator products") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int twice : {1, 2, 3, 6, 11}) {
    std::vector<complex> amps(twice + 1);
    double norm = 0.0;
    for (auto& c : amps) {
      c = {g(rng), g(rng)};
      norm += std::norm(c);
    }
    for (auto& c : amps) c /= std::sqrt(norm);
    const SpinState state(twice, amps);
    check_moments_close(moments(state), oracle::dense_moments(state), 1.0, 1.0, 1e-12);
  }
}

TEST_CASE("apply_twist identity and single-atom limit") {
  const auto psi = apply_twist(css_state(4.0), {0.7, 0.1});
  const auto same = apply_twist(psi, {0.0, 0.0});
  for (std::size_t k = 0; k < psi.dimension(); ++k) {
    CHECK(same.amplitudes()[k] == psi.amplitudes()[k]);
  }
  for (double rho : {-2.0, 0.0, 1.0}) {
    for (double mu : {0.0, 0.3, 2.0, 5.0}) {
      const auto m = moments(apply_twist(css_state(0.5), {rho, mu}));
      // Sz^2 = 1/4 on spin 1/2: mu only adds a global phase
      if (std::abs(std::cos(rho)) > 1e-6) {
        CHECK(squeezing_param(m, 0.5) == Approx(1.0 / (std::cos(rho) * std::cos(rho))));
      }
      if (rho == 0.0) CHECK(squeezing_param(m, 0.5) == Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("twist properties over random states and parameters") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  std::uniform_int_distribution<int> size(1, 60);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const int twice = size(rng);
    std::vector<complex> amps(twice + 1);
    double norm = 0.0;
    for (auto& c : amps) {
      c = {g(rng), g(rng)};
      norm += std::norm(c);
    }
    for (auto& c : amps) c /= std::sqrt(norm);
    const SpinState psi(twice, amps);
    const TwistParams p1{angle(rng), angle(rng)};
    const TwistParams p2{angle(rng), angle(rng)};
    const auto once = apply_twist(psi, p1);

    CHECK(std::abs(once.norm_squared() - 1.0) < 1e-12);
    for (std::size_t k = 0; k < psi.dimension(); ++k) {
      CHECK(std::abs(std::norm(once.amplitudes()[k]) - std::norm(psi.amplitudes()[k])) < 1e-14);
    }
    const auto twice_applied = apply_twist(once, p2);
    const auto combined = apply_twist(psi, {p1.rho + p2.rho, p1.mu + p2.mu});
    const double s = psi.spin();
    check_moments_close(moments(twice_applied), moments(combined), s, s * s, 1e-12);

    // Cauchy-Schwarz on the symmetrized product
    const auto m = moments(once);
    CHECK(m.sy2 >= 0.0);
    CHECK(m.sz2 >= 0.0);
    CHECK(m.sy2 * m.sz2 >= 0.25 * m.syz * m.syz - 1e-9);
  }
}

TEST_CASE("exact evolution matches the one-axis-twisting closed forms") {
  for (double s : {1.0, 2.0, 10.0, 100.0}) {
    for (int i = 0; i < 20; ++i) {
      const double rho = -std::numbers::pi + 2.0 * std::numbers::pi * i / 19.0;
      for (int j = 0; j < 20; ++j) {
        const double mu = 0.5 * j / 19.0;
        check_moments_close(moments(apply_twist(css_state(s), {rho, mu})),
                            kitagawa_moments(s, rho, mu), s, s * s, 1e-10);
      }
    }
  }
  check_moments_close(moments(apply_twist(css_state(100.0), {0.0, 0.02})),
                      kitagawa_moments(100.0, 0.0, 0.02), 100.0, 1e4, 1e-10);
}

TEST_CASE("min_transverse_variance") {
  SpinMoments css;
  css.sx = 8.0;
  css.sy2 = 4.0;
  css.sz2 = 4.0;
  CHECK(min_transverse_variance(css) == Approx(4.0));

  SpinMoments uncorrelated;
  uncorrelated.sy2 = 2.0;
  uncorrelated.sz2 = 1.0;
  CHECK(min_transverse_variance(uncorrelated) == Approx(1.0));

  SpinMoments bad = css;
  bad.syz = NAN;
  CHECK_THROWS_AS(min_transverse_variance(bad), InvalidArgument);

  // result stays within [0, min(sy2, sz2)]
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    SpinMoments m;
    m.sy2 = u(rng);
    m.sz2 = u(rng);
    m.syz = 2.0 * std::sqrt(m.sy2 * m.sz2) * (2.0 * u(rng) / 10.0 - 1.0);
    const double v = min_transverse_variance(m);
    CHECK(v >= 0.0);
    CHECK(v <= std::min(m.sy2, m.sz2) + 1e-12);
  }
}

TEST_CASE("squeezing parameter") {
  const double s = 10.0;
  CHECK(squeezing_param(moments(css_state(s)), s) == Approx(1.0).epsilon(1e-12));
  CHECK(to_db(1.0) == 0.0);
  CHECK(to_db(1e-2) == Approx(-20.0));

  SpinMoments zero;
  zero.sy2 = zero.sz2 = 1.0;
  CHECK_THROWS_AS(squeezing_param(zero, s), DegenerateMeanSpin);

  for (double spin : {0.5, 3.0, 250.0}) {
    CHECK(squeezing_param(moments(apply_twist(css_state(spin), {0.0, 0.0})), spin) ==
          Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ideal squeezing at S = 1e4 from exact state evolution") {
  const double s = 1e4;
  const double asymptotic_xi = std::pow(12.0, 2.0 / 3.0) / (8.0 * std::pow(s, 2.0 / 3.0));
  CHECK(asymptotic_xi == Approx(1.41155e-3).epsilon(1e-4));

  // at the asymptotic optimum shearing
  const double mu_star = std::pow(12.0, 1.0 / 6.0) / std::pow(s, 2.0 / 3.0);
  const auto m = moments(apply_twist(css_state(s), {0.0, mu_star}));
  CHECK(std::abs(squeezing_param(m, s) / asymptotic_xi - 1.0) < 0.10);

  // numerical minimum over mu from a dense scan of exact evolutions
  double best = 0.0;
  oracle::dense_argmin(
      [&](double mu) { return squeezing_param(moments(apply_twist(css_state(s), {0.0, mu})), s); },
      1e-3, 1e-2, 101, &best);
  CHECK(std::abs(best / asymptotic_xi - 1.0) < 0.10);
  CHECK(to_db(asymptotic_xi) == Approx(-28.503).epsilon(1e-4));
}
