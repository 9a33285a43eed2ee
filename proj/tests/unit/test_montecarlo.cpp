#include <cmath>
#include <vector>

#include "doctest.h"
#include "squeezelab/analytic.hpp"
#include "squeezelab/error.hpp"
#include "squeezelab/montecarlo.hpp"
#include "squeezelab/parallel.hpp"

using namespace squeezelab;
using doctest::Approx;

namespace {

bool same_bits(const SpinMoments& a, const SpinMoments& b) {
  return a.sx == b.sx && a.sy == b.sy && a.sz == b.sz && a.sy2 == b.sy2 &&
         a.sz2 == b.sz2 && a.syz == b.syz;
}

void check_close(double got, double se, double expected, double rel) {
  CHECK(std::abs(got - expected) <= std::max(rel * std::abs(expected), 3.0 * se));
}

}  // namespace

TEST_CASE("substreams are distinct and reproducible") {
  CHECK(mix64(0) != mix64(1));
  RngStream a = substream(42, 7);
  RngStream b = substream(42, 7);
  RngStream c = substream(42, 8);
  RngStream d = substream(43, 7);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}

TEST_CASE("summarize uses the sample standard error") {
  std::vector<SpinMoments> s(4);
  for (int i = 0; i < 4; ++i) s[i].sx = i;
  const auto r = summarize(s);
  CHECK(r.trials == 4);
  CHECK(r.mean.sx == Approx(1.5));
  CHECK(r.std_error.sx == Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(r.std_error.sy == 0.0);
}

TEST_CASE("parallel_for covers every index once and rethrows") {
  for (int threads : {1, 3, 8}) {
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
  CHECK_THROWS_AS(parallel_for(10, 4, [](std::size_t i) {
                    if (i == 7) throw NumericError("boom", 0.0);
                  }),
                  NumericError);
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("deterministic photon numbers reproduce exact twisting") {
  const double spin = 20.0;
  const double phi = 1e-3;
  McConfig mc;
  mc.trials = 1;
  const auto r = mc_moments(spin, FockByDetection{1500, 1.0}, phi, mc);
  const auto exact = moments(apply_twist(css_state(spin), {0.0, 3000 * phi * phi}));
  CHECK(same_bits(r.mean, exact));

  mc.trials = 16;
  const auto many = mc_moments(spin, FockByDetection{1500, 1.0}, phi, mc);
  CHECK(same_bits(many.mean, exact));
  CHECK(many.std_error.sy2 == 0.0);
  CHECK(many.std_error.syz == 0.0);
}

TEST_CASE("mc results do not depend on thread count") {
  McConfig mc;
  mc.trials = 300;
  mc.master_seed = 99;
  mc.threads = 1;
  const SchemeConfig scheme = IndependentCoherent{1e5};
  const auto one = mc_moments(50.0, scheme, 1e-4, mc);
  for (int t : {2, 4, 8}) {
    mc.threads = t;
    const auto other = mc_moments(50.0, scheme, 1e-4, mc);
    CHECK(same_bits(one.mean, other.mean));
    CHECK(same_bits(one.std_error, other.std_error));
  }
  mc.master_seed = 100;
  CHECK_FALSE(same_bits(one.mean, mc_moments(50.0, scheme, 1e-4, mc).mean));
}

TEST_CASE("coherent pulses match the gaussian model") {
  const double spin = 500.0;
  const double n = 1e6;
  const double mu = 8e-3;
  const double phi = std::sqrt(mu / (2.0 * n));
  McConfig mc;
  mc.trials = 2000;
  mc.master_seed = 1;
  const auto r = mc_moments(spin, IndependentCoherent{n}, phi, mc);
  const auto g = gaussian_moments(spin, mu, 1.0);
  check_close(r.mean.sx, r.std_error.sx, g.sx, 0.02);
  check_close(r.mean.sy2, r.std_error.sy2, g.sy2, 0.02);
  check_close(r.mean.syz, r.std_error.syz, g.syz, 0.02);
}

TEST_CASE("spin echo leaves a small residual shot-noise fraction") {
  const double spin = 500.0;
  const double n = 1e6;
  const double mu = 8e-3;
  const double phi = std::sqrt(mu / (2.0 * n));
  McConfig mc;
  mc.trials = 4000;
  mc.master_seed = 3;
  const SchemeConfig echo = SpinEchoDelayLine{n, 0.02};
  const auto r = mc_moments(spin, echo, phi, mc);
  // mu here is the realized (n1 + n2) phi^2 with <n1 + n2> = (2 - L) n
  const double nu = effective_shot_noise_fraction(r.mean, spin, mu * (1.0 - 0.01));
  CHECK(nu == Approx(0.01).epsilon(0.2));
  CHECK(std::abs(nu - shot_noise_fraction(echo)) < 0.002);

  const auto coh = mc_moments(spin, IndependentCoherent{n}, phi, mc);
  CHECK(effective_shot_noise_fraction(coh.mean, spin, mu) == Approx(1.0).epsilon(0.1));
  CHECK_THROWS_AS(effective_shot_noise_fraction(coh.mean, 0.5, mu), InvalidArgument);
}

TEST_CASE("mc argument validation") {
  McConfig mc;
  mc.trials = 0;
  CHECK_THROWS_AS(mc_moments(10.0, IndependentCoherent{10.0}, 0.1, mc), InvalidArgument);
  mc.trials = 2;
  CHECK_THROWS_AS(mc_moments(10.0, IndependentCoherent{10.0}, 0.0, mc), InvalidArgument);
  CHECK_THROWS_AS(mc_moments(10.0, FockByDetection{10, 2.0}, 0.1, mc), InvalidArgument);
}

TEST_CASE("product state primitives") {
  ProductTrajectoryState s(3);
  CHECK(s.norm_squared() == Approx(1.0));
  const auto m0 = s.moments();
  CHECK(m0.sx == Approx(1.5));
  CHECK(m0.sz2 == Approx(0.75));
  CHECK(m0.sy2 == Approx(0.75));
  s.dephase(1);
  CHECK(s.moments().sx == Approx(0.5));
  s.dephase(1);
  s.flip(0);
  CHECK(s.moments().sx == Approx(1.5));
  CHECK_THROWS_AS(ProductTrajectoryState(13), ResourceLimit);
  CHECK_THROWS_AS(ProductTrajectoryState(0), InvalidArgument);
}

TEST_CASE("trajectory without scattering is exact symmetric twisting") {
  for (int n : {1, 2, 5, 8}) {
    RngStream rng(1);
    const double mu = 0.37;
    const auto traj = run_trajectory(n, mu, 0.0, 16, rng).moments();
    const auto exact = moments(apply_twist(css_state(0.5 * n), {0.0, mu}));
    CHECK(traj.sx == Approx(exact.sx).epsilon(1e-12));
    CHECK(traj.sy2 == Approx(exact.sy2).epsilon(1e-12));
    CHECK(traj.sz2 == Approx(exact.sz2).epsilon(1e-12));
    CHECK(traj.syz == Approx(exact.syz).epsilon(1e-12).scale(1.0));
  }
  McConfig mc;
  mc.trials = 3;
  mc.n_atoms = 6;
  const auto sim = trajectory_scattering_sim(6, 0.2, kInfiniteCooperativity, mc);
  CHECK(sim.r == 0.0);
  CHECK(sim.moments.std_error.sy2 < 1e-12);
}

TEST_CASE("trajectory steps preserve the norm") {
  RngStream rng(2);
  for (int steps : {1, 64, 256}) {
    const auto s = run_trajectory(10, 0.3, 0.3, steps, rng);
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-10 * steps);
  }
}

TEST_CASE("single-atom contrast decay matches the jump statistics") {
  // each step negates <sigma_x> independently through either channel with
  // probability p/2, so <Sx> = (1/2)(1 - p)^(2K)
  const double mu = 0.4;
  const double eta = 0.5;
  McConfig mc;
  mc.trials = 200000;
  mc.steps = 32;
  mc.n_atoms = 1;
  mc.master_seed = 5;
  const auto sim = trajectory_scattering_sim(1, mu, eta, mc);
  const double p = sim.r / mc.steps;
  const double expected = 0.5 * std::pow(1.0 - p, 2 * mc.steps);
  CHECK(std::abs(sim.moments.mean.sx - expected) < 3.0 * sim.moments.std_error.sx);
  CHECK(expected == Approx(0.5 * std::exp(-2.0 * sim.r)).epsilon(0.01));
}

TEST_CASE("trajectory oracle against the scattering model") {
  const int n = 10;
  const double spin = 0.5 * n;
  const double mu = 0.05;
  const double eta = 0.5;
  McConfig mc;
  mc.trials = 2000;
  mc.master_seed = 8;
  const auto sim = trajectory_scattering_sim(n, mu, eta, mc);
  CHECK(sim.r == Approx(0.025));
  CHECK_FALSE(sim.regime_warning);
  const double tol = 2.0 / n;

  const double contrast = std::exp(-2.0 * sim.r);
  CHECK(contrast == Approx(0.951229).epsilon(1e-6));
  CHECK(std::abs(sim.contrast_estimate - contrast) <=
        std::max(3.0 * sim.contrast_std_error, tol * contrast));
  check_close(sim.moments.mean.sz2, sim.moments.std_error.sz2, 0.5 * spin, tol);

  const auto ideal = kitagawa_moments(spin, 0.0, mu);
  const double factor = sim.moments.mean.syz / (ideal.syz * contrast);
  const double factor_se = sim.moments.std_error.syz / (ideal.syz * contrast);
  CHECK(std::abs(factor - (1.0 - sim.r)) <= std::max(3.0 * factor_se, tol * (1.0 - sim.r)));
}

TEST_CASE("shear discretization converges") {
  McConfig coarse;
  coarse.trials = 1500;
  coarse.steps = 64;
  coarse.master_seed = 21;
  McConfig fine = coarse;
  fine.steps = 256;
  const auto a = trajectory_scattering_sim(6, 0.3, 0.5, coarse);
  const auto b = trajectory_scattering_sim(6, 0.3, 0.5, fine);
  auto close = [](double x, double sx, double y, double sy) {
    return std::abs(x - y) <= 3.0 * std::hypot(sx, sy) + 1e-12;
  };
  CHECK(close(a.moments.mean.sx, a.moments.std_error.sx, b.moments.mean.sx, b.moments.std_error.sx));
  CHECK(close(a.moments.mean.sy2, a.moments.std_error.sy2, b.moments.mean.sy2, b.moments.std_error.sy2));
  CHECK(close(a.moments.mean.syz, a.moments.std_error.syz, b.moments.mean.syz, b.moments.std_error.syz));
}

TEST_CASE("trajectory limits and warnings") {
  McConfig mc;
  mc.trials = 2;
  CHECK_THROWS_AS(trajectory_scattering_sim(13, 0.1, 0.5, mc), ResourceLimit);
  CHECK_THROWS_AS(trajectory_scattering_sim(4, 0.1, 0.0, mc), InvalidArgument);
  CHECK(trajectory_scattering_sim(4, 1.0, 1.0, mc).regime_warning);
  CHECK_FALSE(trajectory_scattering_sim(4, 0.4, 1.0, mc).regime_warning);
}
