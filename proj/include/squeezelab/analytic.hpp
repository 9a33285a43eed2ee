#pragma once

#include <limits>
#include <optional>
#include <string_view>

#include "squeezelab/optimize.hpp"
#include "squeezelab/spin.hpp"

namespace squeezelab {

inline constexpr double kInfiniteCooperativity =
    std::numeric_limits<double>::infinity();

/// Residual photon shot-noise fraction and single-atom cooperativity.
/// `eta` may be +infinity (no free-space scattering).
struct NoiseParams {
  double eps = 0.0;
  double eta = kInfiniteCooperativity;
};

/// Free-space scattering corrections, leading order in r.
struct ScatterFactors {
  double r = 0.0;         ///< Raman (= Rayleigh) events per atom
  double contrast = 1.0;  ///< exp(-2r)
  double szbar2 = 0.0;    ///< <Szbar^2> = (1 - 2r/3) S/2
  double sz_szbar = 0.0;  ///< <Sz Szbar> = (1 - r) S/2
  double vprime = 0.0;    ///< eps mu + mu^2 <Szbar^2>
  bool beyond_leading_order = false;  ///< r > 0.2
};

struct ScatteringMoments {
  SpinMoments moments;
  ScatterFactors factors;
};

inline constexpr double kMaxLeadingOrderR = 0.2;

/// cos(x)^n for integer n >= 0, computed through logs for large n.
double cos_power(double x, int n);

/// Exact one-axis-twisting moments of the CSS after exp(-i(rho Sz + mu Sz^2/2)).
SpinMoments kitagawa_moments(double spin, double rho, double mu);

/// Large-S Gaussian moments with phase variance V = eps mu + mu^2 S/2.
SpinMoments gaussian_moments(double spin, double mu, double eps);

/// Gaussian moments adjusted for free-space scattering at cooperativity eta.
/// Reduces to gaussian_moments when eta is infinite.
ScatteringMoments scattering_moments(double spin, double mu,
                                     const NoiseParams& noise);

enum class Regime { ideal, coherent, scattering };

/// Parses "ideal", "coherent" or "scattering"; throws InvalidArgument.
Regime parse_regime(std::string_view name);
std::string_view to_string(Regime regime);

struct Optimum {
  double mu = 0.0;
  double xi = 0.0;
};

/// Leading-order optimum shearing and squeezing for each regime:
///   ideal      mu = 12^(1/6) S^(-2/3),   xi = 12^(2/3) / (8 S^(2/3))
///   coherent   mu = 12^(1/5) S^(-3/5),   xi = 5 / (384^(1/5) S^(2/5))
///   scattering mu = (6 eta)^(1/3) S^(-2/3), xi = 6^(1/3) / (2 (S eta)^(2/3))
Optimum asymptotic_optimum(double spin, Regime regime,
                           double eta = kInfiniteCooperativity);

/// Picks the asymptotic regime matching the noise parameters, if any.
std::optional<Regime> matching_regime(const NoiseParams& noise);

enum class Model { kitagawa_exact, gaussian, scattering };

Model parse_model(std::string_view name);
std::string_view to_string(Model model);

struct ModelPoint {
  SpinMoments moments;
  double xi = 0.0;
  double variance = 0.0;  ///< minimum transverse variance
  double contrast = 1.0;
  bool beyond_leading_order = false;
};

/// Evaluates one closed-form model at shearing mu (rho = 0).
/// `noise` is ignored by kitagawa_exact.
ModelPoint evaluate_model(Model model, double spin, double mu,
                          const NoiseParams& noise);

/// Default shearing interval for optimization: [1e-2/S, mu_max], where
/// mu_max = min(1, 30/sqrt(S)) and, for finite eta, also keeps r <= 0.2.
ScanOptions default_mu_scan(Model model, double spin, const NoiseParams& noise);

struct NumericalOptimum {
  double mu = 0.0;
  double xi = 0.0;
  bool at_boundary = false;
};

/// Grid scan (64 points/decade) plus golden-section refinement of xi(mu).
NumericalOptimum optimize_mu(Model model, double spin, const NoiseParams& noise,
                             std::optional<ScanOptions> scan = std::nullopt);

}  // namespace squeezelab
