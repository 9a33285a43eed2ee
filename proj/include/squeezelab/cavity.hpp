#pragma once

#include <optional>
#include <string_view>

namespace squeezelab {

/// Dispersive cavity coupling. Only detunings from the cavity resonance are
/// ever represented; kappa and omega share one angular-frequency unit.
struct CavityConfig {
  double kappa = 1.0;  ///< linewidth
  double omega = 0.0;  ///< cavity shift per spin flip (= atomic shift per photon)
  std::optional<double> eta;               ///< single-atom cooperativity
  std::optional<double> gamma_over_delta;  ///< Gamma / |Delta|

  /// Builds the config whose per-photon phase equals eta * Gamma/|Delta|.
  static CavityConfig from_cooperativity(double kappa, double eta,
                                         double gamma_over_delta);
};

/// kappa > 0, and when both parameterizations are present
/// 2 omega / kappa == eta * Gamma/|Delta| to 1e-9 relative.
void validate(const CavityConfig& cfg);

/// Spin rotation per incident photon, 2 omega / kappa.
double per_photon_phase(const CavityConfig& cfg);

/// Phase lag of the intracavity response at `detuning` from resonance for
/// Sz eigenvalue m: arctan((kappa/2) / (detuning - omega m)) - pi/4, on the
/// branch that is continuous in detuning and principal for
/// detuning - omega m > 0. Range (-pi/4, 3pi/4).
double phase_lag(const CavityConfig& cfg, double detuning, double m);

struct PhaseExpansion {
  double linear = 0.0;       ///< fitted coefficient of m in 2 Phi
  double quadratic = 0.0;    ///< fitted coefficient of m^2 in 2 Phi
  double cubic_bound = 0.0;  ///< phi^3 m_max^2 / 6, size of the next term
  bool linear_within_bound = false;
  bool quadratic_within_bound = false;
  bool small_shift = false;  ///< phi m_max <= 0.1
};

/// Least-squares fit of 2 Phi(kappa/2, m) = linear m + quadratic m^2 over
/// integer |m| <= m_max, compared against phi and phi^2/2.
/// Throws RegimeViolation when m_max |omega| >= kappa/2.
PhaseExpansion expand_per_photon_phase(const CavityConfig& cfg, int m_max);

enum class PulseShape { gaussian, lorentzian, square };

PulseShape parse_pulse_shape(std::string_view name);
std::string_view to_string(PulseShape shape);

/// Normalized spectral density |B(omega)|^2 of the probe pulse.
/// gaussian: normal with std `bandwidth`; lorentzian: half width `bandwidth`;
/// square: sinc^2((omega - center)/bandwidth) / (pi bandwidth).
struct PulseSpectrum {
  PulseShape shape = PulseShape::gaussian;
  double center_detuning = 0.5;
  double bandwidth = 1e-3;

  double density(double detuning) const;
};

struct FidelityResult {
  double fidelity = 1.0;
  double one_minus_fidelity = 0.0;
  double residual = 0.0;  ///< |change in F| at the last refinement
  int panels = 0;
};

/// Overlap |integral |B|^2 exp(-2i[Phi(m) - Phi(m')]) d omega| of the output
/// field states conditioned on atomic eigenvalues m and m'.
/// Throws NumericError when the quadrature does not converge.
FidelityResult factorization_fidelity(const CavityConfig& cfg,
                                      const PulseSpectrum& pulse, double m,
                                      double m_prime);

}  // namespace squeezelab
