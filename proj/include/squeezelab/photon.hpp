#pragma once

#include <cstdint>
#include <string_view>
#include <variant>

#include "squeezelab/rng.hpp"

namespace squeezelab {

/// Two independent coherent pulses.
struct IndependentCoherent {
  double n_mean_per_pulse = 0.0;
};

/// One coherent pulse reflected twice, losing a fraction `loss` in between.
struct SpinEchoDelayLine {
  double n_mean_per_pulse = 0.0;
  double loss = 0.0;
};

/// Amplitude-squeezed input pulses with optical squeezing parameter `s`.
struct SqueezedInput {
  double n_mean_per_pulse = 0.0;
  double s = 0.0;
};

/// Effective Fock state: each pulse is stopped once `n_target` photons are
/// detected with quantum efficiency `q`.
struct FockByDetection {
  std::int64_t n_target = 0;
  double q = 1.0;
};

/// Fock input with a lossy cavity; `loss` is the fraction lost at
/// half-linewidth detuning.
struct CavityLoss {
  double n_mean_per_pulse = 0.0;
  double loss = 0.0;
};

using SchemeConfig = std::variant<IndependentCoherent, SpinEchoDelayLine,
                                  SqueezedInput, FockByDetection, CavityLoss>;

std::string_view scheme_name(const SchemeConfig& cfg);

/// Throws InvalidArgument when a parameter is out of range.
void validate(const SchemeConfig& cfg);

/// Residual shot-noise fraction nu = Var(n2 - n1) / <n1 + n2>.
double shot_noise_fraction(const SchemeConfig& cfg);

/// nu for squeezed input: exp(-2s) + 2 sinh^2(s) cosh^2(s) / n_total.
double squeezed_nu(double s, double n_total);

struct SqueezingOptimum {
  double s = 0.0;
  double nu = 1.0;
};

/// Minimizes squeezed_nu over s >= 0 for a given total photon number.
SqueezingOptimum optimal_squeezing_s(double n_total);

/// Probability that a photon lands in a mode that does not couple to the
/// cavity: (1 - sqrt(1 - 2L)) / 2.
double uncoupled_probability(double loss);

/// Mean photon number per pulse, <n1> (equal to <n2> except for spin echo).
double mean_photons_per_pulse(const SchemeConfig& cfg);

/// Expected difference E[n2 - n1]; nonzero only for the lossy spin echo.
double expected_difference(const SchemeConfig& cfg);

struct PhotonPair {
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
};

/// Draws the photon numbers interacting with the atoms in the two pulses.
PhotonPair sample_photon_pair(const SchemeConfig& cfg, RngStream& rng);

struct MeasurementComparison {
  double xi_qnd = 0.0;      ///< 2 / (S mu Q)
  double xi_phase = 0.0;    ///< 1 / (4 S mu Q)
  double xi_cavity = 0.0;   ///< 2 nu / (S mu) with nu = 1 - Q
  /// Efficiency above which cavity feedback squeezes faster than an ideal
  /// phase measurement: root of 1/(4Q) = 2(1 - Q), i.e. (2 + sqrt 2)/4.
  double crossover_q = 0.0;
};

/// Initial squeezing rates of measurement-based schemes versus cavity
/// feedback using the same detector. The cavity rate takes the noise factor
/// to be the shot-noise fraction nu = 1 - Q of detection feedback.
MeasurementComparison measurement_comparison(double spin, double mu, double q);

}  // namespace squeezelab
