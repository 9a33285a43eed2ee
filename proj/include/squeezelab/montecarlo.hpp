#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "squeezelab/photon.hpp"
#include "squeezelab/rng.hpp"
#include "squeezelab/spin.hpp"

namespace squeezelab {

inline constexpr int kMaxTrajectoryAtoms = 12;

struct McConfig {
  std::int64_t trials = 1000;
  std::uint64_t master_seed = 0;
  int steps = 64;     ///< shear discretization K (trajectory simulation)
  int n_atoms = 10;   ///< N (trajectory simulation)
  int threads = 0;    ///< 0 = SQUEEZELAB_THREADS or hardware
};

/// Trial-averaged moments and their standard errors.
struct McResult {
  SpinMoments mean;
  SpinMoments std_error;
  std::int64_t trials = 0;
};

/// Averages a per-trial sample set in index order with compensated sums, so
/// the result does not depend on how the samples were produced in parallel.
McResult summarize(std::span<const SpinMoments> samples);

/// Photon-number-averaged exact twisting of the CSS. Each trial draws
/// (n1, n2) from the scheme, sets rho = (n2 - n1 - E[n2 - n1]) phi and
/// mu = (n1 + n2) phi^2, and evolves css_state(spin) exactly. The
/// deterministic mean rotation of a lossy echo is removed so that <rho> = 0.
McResult mc_moments(double spin, const SchemeConfig& scheme, double phi,
                    const McConfig& mc);

/// Shot-noise fraction implied by a measured <Sy^2>, inverting the exact
/// twisting moments averaged over Gaussian rho with variance nu * mu.
double effective_shot_noise_fraction(const SpinMoments& measured, double spin,
                                     double mu);

/// State of N distinguishable spin-1/2 atoms over the 2^N computational
/// basis. Bit i set means atom i is up (sigma_z = +1).
class ProductTrajectoryState {
 public:
  /// All atoms in (|up> + |down>)/sqrt(2).
  explicit ProductTrajectoryState(int n_atoms);

  int n_atoms() const noexcept { return n_atoms_; }
  std::span<const complex> amplitudes() const noexcept { return amps_; }
  double norm_squared() const noexcept;

  /// exp(-i angle Sz^2)
  void shear(double angle);
  void flip(int atom);     ///< sigma_x on one atom
  void dephase(int atom);  ///< sigma_z on one atom

  SpinMoments moments() const;

 private:
  int n_atoms_;
  std::vector<complex> amps_;
};

/// One quantum trajectory: K shear steps exp(-i mu Sz^2 / (2K)), each
/// followed by per-atom Rayleigh (prob r/K: sigma_z with prob 1/2) and
/// Raman (prob r/K: sigma_x, then sigma_z with prob 1/2) events.
ProductTrajectoryState run_trajectory(int n_atoms, double mu, double r,
                                      int steps, RngStream& rng);

struct TrajectoryResult {
  McResult moments;
  double r = 0.0;
  double contrast_estimate = 0.0;  ///< <Sx> / (S exp(-V'/2))
  double contrast_std_error = 0.0;
  bool regime_warning = false;     ///< r > 0.2
};

/// Brute-force scattering oracle. eta may be infinite (no jumps).
/// Throws ResourceLimit when n_atoms > 12.
TrajectoryResult trajectory_scattering_sim(int n_atoms, double mu, double eta,
                                           const McConfig& mc);

}  // namespace squeezelab
