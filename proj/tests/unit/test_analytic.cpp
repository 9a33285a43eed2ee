#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "squeezelab/analytic.hpp"
#include "squeezelab/error.hpp"
#include "squeezelab/optimize.hpp"

using namespace squeezelab;
using doctest::Approx;

namespace {

double xi_of(const SpinMoments& m, double s) { return squeezing_param(m, s); }

}  // namespace

TEST_CASE("kitagawa_moments limits") {
  const auto css = kitagawa_moments(7.5, 0.0, 0.0);
  CHECK(css.sx == Approx(7.5));
  CHECK(css.sy == 0.0);
  CHECK(css.sy2 == Approx(3.75));
  CHECK(css.sz2 == Approx(3.75));
  CHECK(css.syz == 0.0);

  CHECK(kitagawa_moments(1.0, 0.0, 0.2).sx == Approx(std::cos(0.1)).epsilon(1e-14));
  CHECK(kitagawa_moments(1.0, 0.0, 0.2).sx == Approx(0.995004).epsilon(1e-6));

  CHECK_THROWS_AS(kitagawa_moments(1.25, 0.0, 0.1), InvalidArgument);
}

TEST_CASE("kitagawa_moments equals exact state evolution") {
  const auto exact = moments(apply_twist(css_state(100.0), {0.3, 0.1}));
  const auto closed = kitagawa_moments(100.0, 0.3, 0.1);
  CHECK(std::abs(exact.sx - closed.sx) <= 1e-10 * 100.0);
  CHECK(std::abs(exact.sy - closed.sy) <= 1e-10 * 100.0);
  CHECK(std::abs(exact.sy2 - closed.sy2) <= 1e-10 * closed.sy2);
  CHECK(std::abs(exact.syz - closed.syz) <= 1e-10 * closed.syz);
}

TEST_CASE("cos_power handles large exponents and negative bases") {
  CHECK(cos_power(0.1, 3) == Approx(std::pow(std::cos(0.1), 3)).epsilon(1e-14));
  CHECK(cos_power(2.0, 3) == Approx(std::pow(std::cos(2.0), 3)).epsilon(1e-13));
  CHECK(cos_power(2.0, 4) == Approx(std::pow(std::cos(2.0), 4)).epsilon(1e-13));
  CHECK(cos_power(1e-3, 200000) == Approx(std::exp(200000 * std::log(std::cos(1e-3)))).epsilon(1e-12));
  CHECK(cos_power(0.5, 1000000) >= 0.0);
}

TEST_CASE("gaussian_moments") {
  const auto css = gaussian_moments(1e4, 0.0, 0.7);
  CHECK(css.sx == Approx(1e4));
  CHECK(css.sy2 == Approx(5e3));
  CHECK(css.syz == 0.0);
  CHECK_THROWS_AS(gaussian_moments(10.0, -1e-3, 0.0), InvalidArgument);

  // eps = 0 follows (S mu)^-2 + S^2 mu^4 / 24 inside 1/S << mu << 1/sqrt(S);
  // the large-S moments drift from it faster than exact twisting does
  const double s = 1e4;
  for (double mu : log_space(10.0 / s, 0.3 / std::sqrt(s), 25)) {
    const double approx = 1.0 / (s * mu * s * mu) + s * s * std::pow(mu, 4) / 24.0;
    CHECK(std::abs(xi_of(kitagawa_moments(s, 0.0, mu), s) / approx - 1.0) < 0.05);
    const double gauss_tol = mu * std::sqrt(s) <= 0.2 ? 0.05 : 0.09;
    CHECK(std::abs(xi_of(gaussian_moments(s, mu, 0.0), s) / approx - 1.0) < gauss_tol);
  }
}

TEST_CASE("gaussian squeezing curves order by shot-noise suppression") {
  const double s = 1e4;
  std::vector<double> minima;
  for (double eps : {1.0, 0.1, 0.01, 0.0}) {
    minima.push_back(optimize_mu(Model::gaussian, s, {eps, kInfiniteCooperativity}).xi);
  }
  CHECK(minima[0] > minima[1]);
  CHECK(minima[1] > minima[2]);
  CHECK(minima[2] > minima[3]);
  const auto ideal = asymptotic_optimum(s, Regime::ideal);
  CHECK(std::abs(minima[3] / ideal.xi - 1.0) < 0.10);
}

TEST_CASE("scattering_moments") {
  const double s = 1e4;
  for (double mu : {1e-4, 2e-3, 3e-2}) {
    for (double eps : {0.0, 0.3, 1.0}) {
      const auto sm = scattering_moments(s, mu, {eps, kInfiniteCooperativity});
      const auto g = gaussian_moments(s, mu, eps);
      CHECK(sm.moments.sx == g.sx);
      CHECK(sm.moments.sy2 == g.sy2);
      CHECK(sm.moments.syz == g.syz);
      CHECK(sm.factors.contrast == 1.0);
    }
  }

  const auto sm = scattering_moments(s, 1.8e-3, {0.0, 0.1});
  CHECK(sm.factors.r == Approx(1.8e-3 / 0.4));
  CHECK(sm.factors.contrast == Approx(std::exp(-2.0 * sm.factors.r)));
  CHECK(sm.factors.szbar2 == Approx((1.0 - 2.0 * sm.factors.r / 3.0) * s / 2));
  CHECK(sm.factors.sz_szbar == Approx((1.0 - sm.factors.r) * s / 2));
  CHECK_FALSE(sm.factors.beyond_leading_order);
  const double db = to_db(xi_of(sm.moments, s));
  CHECK(db <= -20.0);
  CHECK(db == Approx(-20.0).epsilon(0.025));

  CHECK(scattering_moments(s, 0.1, {0.0, 0.1}).factors.beyond_leading_order);
  CHECK_THROWS_AS(scattering_moments(s, 0.1, {0.0, 0.0}), InvalidArgument);
}

TEST_CASE("scattering optimum improves monotonically with cooperativity") {
  const double s = 1e4;
  double previous = 0.0;
  for (double eta : {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 3.0, 10.0}) {
    const double xi = optimize_mu(Model::scattering, s, {0.0, eta}).xi;
    if (previous > 0.0) CHECK(xi <= previous);
    previous = xi;
  }
  CHECK(previous >= optimize_mu(Model::scattering, s, {0.0, kInfiniteCooperativity}).xi);
}

TEST_CASE("numerical optimum agrees with a dense scan") {
  const double s = 1e4;
  const NoiseParams noise{1.0, 0.1};
  const auto opt = optimize_mu(Model::scattering, s, noise);
  double dense = 0.0;
  const auto scan = default_mu_scan(Model::scattering, s, noise);
  oracle::dense_argmin(
      [&](double mu) { return evaluate_model(Model::scattering, s, mu, noise).xi; },
      scan.lo, scan.hi, 40001, &dense);
  CHECK(opt.xi <= dense * (1.0 + 1e-9));
  CHECK(opt.xi == Approx(dense).epsilon(1e-6));
  CHECK_FALSE(opt.at_boundary);
}

TEST_CASE("asymptotic optima") {
  const auto scat = asymptotic_optimum(1e4, Regime::scattering, 0.1);
  CHECK(scat.xi == Approx(9.0856e-3).epsilon(1e-4));
  CHECK(to_db(scat.xi) == Approx(-20.417).epsilon(1e-4));
  CHECK(scat.mu == Approx(std::cbrt(0.6) / std::pow(1e4, 2.0 / 3.0)));

  CHECK(asymptotic_optimum(1e4, Regime::ideal).xi == Approx(1.41155e-3).epsilon(1e-4));

  const auto coherent = asymptotic_optimum(1e6, Regime::coherent);
  const auto numeric = optimize_mu(Model::gaussian, 1e6, {1.0, kInfiniteCooperativity});
  CHECK(std::abs(numeric.xi / coherent.xi - 1.0) < 0.10);

  CHECK_THROWS_AS(parse_regime("two-axis"), InvalidArgument);
  CHECK_THROWS_AS(asymptotic_optimum(1e4, static_cast<Regime>(9)), InvalidArgument);
  CHECK_THROWS_AS(asymptotic_optimum(1e4, Regime::scattering), InvalidArgument);
  CHECK(parse_regime("coherent") == Regime::coherent);
  CHECK(matching_regime({0.0, kInfiniteCooperativity}) == Regime::ideal);
  CHECK(matching_regime({1.0, kInfiniteCooperativity}) == Regime::coherent);
  CHECK(matching_regime({0.0, 0.1}) == Regime::scattering);
  CHECK_FALSE(matching_regime({0.3, 0.1}).has_value());
}

TEST_CASE("scaling slopes on a short range") {
  std::vector<double> x;
  std::vector<double> y;
  for (double s : {1e4, 1e5, 1e6}) {
    x.push_back(std::log(s));
    y.push_back(std::log(optimize_mu(Model::kitagawa_exact, s, {}).xi));
  }
  CHECK(fit_line(x, y).slope == Approx(-2.0 / 3.0).epsilon(0.045));
}

TEST_CASE("golden section and log scan") {
  const auto parabola = [](double x) { return (x - 0.37) * (x - 0.37) + 2.0; };
  CHECK(golden_section_minimize(parabola, 0.0, 1.0, 1e-10) == Approx(0.37).epsilon(1e-7));

  const auto r = minimize_log_scan([](double x) { return std::pow(std::log(x / 3e-3), 2); },
                                   {1e-6, 1.0, 64, 1e-8});
  CHECK(r.x == Approx(3e-3).epsilon(1e-6));
  CHECK(r.grid_minima == 1);

  const auto two_wells = [](double x) {
    const double l = std::log10(x);
    return std::min((l + 4) * (l + 4), (l + 1) * (l + 1) + 0.5);
  };
  CHECK_THROWS_AS(minimize_log_scan(two_wells, {1e-6, 1.0, 64, 1e-6}), OptimizationAmbiguity);

  const auto edge = minimize_log_scan([](double x) { return x; }, {1e-3, 1.0, 64, 1e-6});
  CHECK(edge.at_boundary);
  CHECK(edge.x == Approx(1e-3));

  const std::vector<double> xs{0, 1, 2, 3};
  const std::vector<double> ys{1, 3, 5, 7};
  const auto fit = fit_line(xs, ys);
  CHECK(fit.slope == Approx(2.0));
  CHECK(fit.intercept == Approx(1.0));
}
