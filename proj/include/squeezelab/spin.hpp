#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace squeezelab {

using complex = std::complex<double>;

/// First and second moments of the collective spin.
///
/// `syz` is the symmetrized correlation <Sy Sz + Sz Sy>, and `sy2`, `sz2`
/// are raw second moments (not variances).
struct SpinMoments {
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
  double sy2 = 0.0;
  double sz2 = 0.0;
  double syz = 0.0;
};

/// Net rotation and shearing applied by exp(-i(rho Sz + mu Sz^2 / 2)).
struct TwistParams {
  double rho = 0.0;
  double mu = 0.0;
};

/// Validates a half-integer spin magnitude and returns 2S.
/// Throws InvalidArgument unless 2S is a positive integer.
int twice_spin(double spin);

/// Pure state of the symmetric Dicke manifold, stored densely in the Sz
/// eigenbasis. Index k holds the amplitude of m = -S + k.
class SpinState {
 public:
  SpinState(int twice_spin, std::vector<complex> amplitudes);

  int twice_spin() const noexcept { return twice_spin_; }
  double spin() const noexcept { return 0.5 * twice_spin_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  double m_of(std::size_t k) const noexcept {
    return static_cast<double>(k) - spin();
  }

  std::span<const complex> amplitudes() const noexcept { return amps_; }
  double norm_squared() const noexcept;

  /// Basis state |m>, with m = -S..S.
  static SpinState eigenstate(double spin, double m);

 private:
  int twice_spin_;
  std::vector<complex> amps_;
};

/// Coherent spin state along +x: c_m = sqrt(C(2S, S+m) / 2^(2S)).
SpinState css_state(double spin);

/// Applies the diagonal unitary exp(-i(rho m + mu m^2 / 2)).
SpinState apply_twist(const SpinState& state, TwistParams params);

/// Exact moments from the tridiagonal ladder action; O(2S+1).
SpinMoments moments(const SpinState& state);

/// Minimum variance of the spin transverse to x, from the y/z covariance.
double min_transverse_variance(const SpinMoments& m);

/// Wineland squeezing parameter 2S Var(Smin) / <Sx>^2.
/// Throws DegenerateMeanSpin when <Sx> is zero.
double squeezing_param(const SpinMoments& m, double spin);

inline double to_db(double xi) { return 10.0 * std::log10(xi); }

}  // namespace squeezelab
