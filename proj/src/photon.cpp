#include "squeezelab/photon.hpp"

#include <cmath>
#include <string>

#include "squeezelab/error.hpp"
#include "squeezelab/optimize.hpp"
#include "squeezelab/spin.hpp"

namespace squeezelab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

void require_photons(double n) {
  require(std::isfinite(n) && n > 0.0, "mean photon number must be > 0");
}

}  // namespace

std::string_view scheme_name(const SchemeConfig& cfg) {
  return std::visit(
      overloaded{
          [](const IndependentCoherent&) { return std::string_view("independent-coherent"); },
          [](const SpinEchoDelayLine&) { return std::string_view("spin-echo"); },
          [](const SqueezedInput&) { return std::string_view("squeezed-input"); },
          [](const FockByDetection&) { return std::string_view("fock-by-detection"); },
          [](const CavityLoss&) { return std::string_view("cavity-loss"); },
      },
      cfg);
}

void validate(const SchemeConfig& cfg) {
  std::visit(
      overloaded{
          [](const IndependentCoherent& c) { require_photons(c.n_mean_per_pulse); },
          [](const SpinEchoDelayLine& c) {
            require_photons(c.n_mean_per_pulse);
            require(c.loss >= 0.0 && c.loss < 1.0, "spin-echo loss must lie in [0, 1)");
          },
          [](const SqueezedInput& c) {
            require_photons(c.n_mean_per_pulse);
            require(std::isfinite(c.s) && c.s >= 0.0, "squeezing s must be >= 0");
          },
          [](const FockByDetection& c) {
            require(c.n_target >= 1, "n_target must be >= 1");
            require(c.q > 0.0 && c.q <= 1.0, "quantum efficiency must lie in (0, 1]");
          },
          [](const CavityLoss& c) {
            require_photons(c.n_mean_per_pulse);
            require(c.loss >= 0.0 && c.loss <= 0.5, "cavity loss must lie in [0, 0.5]");
          },
      },
      cfg);
}

double squeezed_nu(double s, double n_total) {
  require(n_total > 0.0, "total photon number must be > 0");
  const double sc = std::sinh(s) * std::cosh(s);
  return std::exp(-2.0 * s) + 2.0 * sc * sc / n_total;
}

double shot_noise_fraction(const SchemeConfig& cfg) {
  validate(cfg);
  return std::visit(
      overloaded{
          [](const IndependentCoherent&) { return 1.0; },
          [](const SpinEchoDelayLine& c) { return 0.5 * c.loss; },
          [](const SqueezedInput& c) { return squeezed_nu(c.s, 2.0 * c.n_mean_per_pulse); },
          [](const FockByDetection& c) { return 1.0 - c.q; },
          [](const CavityLoss& c) { return 0.5 * c.loss; },
      },
      cfg);
}

SqueezingOptimum optimal_squeezing_s(double n_total) {
  require(std::isfinite(n_total) && n_total > 0.0,
          "total photon number must be > 0");
  // beyond ln(8n)/4 the anti-squeezed term exp(4s)/(8n) exceeds one
  const double hi = std::max(1.0, 0.25 * std::log(8.0 * n_total) + 2.0);
  const auto nu = [n_total](double s) { return squeezed_nu(s, n_total); };
  const double s = golden_section_minimize(nu, 0.0, hi, 1e-10);
  SqueezingOptimum best{s, nu(s)};
  if (nu(0.0) < best.nu) best = {0.0, nu(0.0)};
  return best;
}

double uncoupled_probability(double loss) {
  require(loss >= 0.0 && loss <= 0.5, "cavity loss must lie in [0, 0.5]");
  // (1 - sqrt(1 - 2L)) / 2 rewritten to avoid cancellation at small L
  return loss / (1.0 + std::sqrt(1.0 - 2.0 * loss));
}

double mean_photons_per_pulse(const SchemeConfig& cfg) {
  validate(cfg);
  return std::visit(
      overloaded{
          [](const IndependentCoherent& c) { return c.n_mean_per_pulse; },
          [](const SpinEchoDelayLine& c) { return c.n_mean_per_pulse; },
          [](const SqueezedInput& c) { return c.n_mean_per_pulse; },
          [](const FockByDetection& c) { return static_cast<double>(c.n_target) / c.q; },
          [](const CavityLoss& c) {
            return std::round(c.n_mean_per_pulse) * (1.0 - uncoupled_probability(c.loss));
          },
      },
      cfg);
}

double expected_difference(const SchemeConfig& cfg) {
  if (const auto* echo = std::get_if<SpinEchoDelayLine>(&cfg)) {
    return -echo->loss * echo->n_mean_per_pulse;
  }
  return 0.0;
}

PhotonPair sample_photon_pair(const SchemeConfig& cfg, RngStream& rng) {
  using count = std::int64_t;
  return std::visit(
      overloaded{
          [&](const IndependentCoherent& c) {
            std::poisson_distribution<count> draw(c.n_mean_per_pulse);
            const count n1 = draw(rng);
            const count n2 = draw(rng);
            return PhotonPair{n1, n2};
          },
          [&](const SpinEchoDelayLine& c) {
            std::poisson_distribution<count> draw(c.n_mean_per_pulse);
            const count n1 = draw(rng);
            count lost = 0;
            if (c.loss > 0.0 && n1 > 0) {
              std::binomial_distribution<count> lose(n1, c.loss);
              lost = lose(rng);
            }
            return PhotonPair{n1, n1 - lost};
          },
          [&](const SqueezedInput& c) {
            const double nu = squeezed_nu(c.s, 2.0 * c.n_mean_per_pulse);
            std::normal_distribution<double> draw(c.n_mean_per_pulse,
                                                  std::sqrt(nu * c.n_mean_per_pulse));
            auto one = [&] {
              const double x = std::round(draw(rng));
              return x < 0.0 ? count{0} : static_cast<count>(x);
            };
            const count n1 = one();
            const count n2 = one();
            return PhotonPair{n1, n2};
          },
          [&](const FockByDetection& c) {
            // undetected photons accompanying exactly n_target detections
            const double undetected = c.n_target * (1.0 - c.q) / c.q;
            if (undetected == 0.0) return PhotonPair{c.n_target, c.n_target};
            std::poisson_distribution<count> draw(undetected);
            const count n1 = c.n_target + draw(rng);
            const count n2 = c.n_target + draw(rng);
            return PhotonPair{n1, n2};
          },
          [&](const CavityLoss& c) {
            const count n_in = std::llround(c.n_mean_per_pulse);
            const double p_lost = uncoupled_probability(c.loss);
            if (p_lost == 0.0) return PhotonPair{n_in, n_in};
            std::binomial_distribution<count> couple(n_in, 1.0 - p_lost);
            const count n1 = couple(rng);
            const count n2 = couple(rng);
            return PhotonPair{n1, n2};
          },
      },
      cfg);
}

MeasurementComparison measurement_comparison(double spin, double mu, double q) {
  const double s = 0.5 * twice_spin(spin);
  require(q > 0.0 && q <= 1.0, "quantum efficiency must lie in (0, 1]");
  require(mu > 0.0, "mu must be > 0");
  MeasurementComparison out;
  out.xi_qnd = 2.0 / (s * mu * q);
  out.xi_phase = 1.0 / (4.0 * s * mu * q);
  out.xi_cavity = 2.0 * (1.0 - q) / (s * mu);
  out.crossover_q = (2.0 + std::sqrt(2.0)) / 4.0;
  return out;
}

}  // namespace squeezelab
