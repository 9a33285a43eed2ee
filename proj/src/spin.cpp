#include "squeezelab/spin.hpp"

#include <cmath>
#include <string>

#include "squeezelab/error.hpp"

namespace squeezelab {

int twice_spin(double spin) {
  if (!std::isfinite(spin) || spin <= 0.0) {
    throw InvalidArgument("spin must be a positive half-integer, got " +
                          std::to_string(spin));
  }
  const double twice = 2.0 * spin;
  const double rounded = std::round(twice);
  if (std::abs(twice - rounded) > 1e-9 || rounded > 1e9) {
    throw InvalidArgument("spin must be a positive half-integer, got " +
                          std::to_string(spin));
  }
  return static_cast<int>(rounded);
}

SpinState::SpinState(int twice_spin, std::vector<complex> amplitudes)
    : twice_spin_(twice_spin), amps_(std::move(amplitudes)) {
  if (twice_spin_ < 1) {
    throw InvalidArgument("2S must be a positive integer");
  }
  if (amps_.size() != static_cast<std::size_t>(twice_spin_) + 1) {
    throw InvalidArgument("amplitude vector length must equal 2S+1");
  }
}

double SpinState::norm_squared() const noexcept {
  double total = 0.0;
  for (const auto& c : amps_) total += std::norm(c);
  return total;
}

SpinState SpinState::eigenstate(double spin, double m) {
  const int n = squeezelab::twice_spin(spin);
  const double k = m + spin;
  if (std::abs(k - std::round(k)) > 1e-9 || k < -1e-9 || k > n + 1e-9) {
    throw InvalidArgument("m must lie in -S..S in integer steps");
  }
  std::vector<complex> amps(n + 1, 0.0);
  amps[static_cast<std::size_t>(std::round(k))] = 1.0;
  return SpinState(n, std::move(amps));
}

SpinState css_state(double spin) {
  const int n = twice_spin(spin);
  // log-space binomial weights so that 2S up to 1e5 neither under- nor overflows
  const double log_norm = std::lgamma(n + 1.0) - n * std::log(2.0);
  std::vector<complex> amps(n + 1);
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double log_p =
        log_norm - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    const double p = std::exp(log_p);
    amps[k] = std::sqrt(p);
    total += p;
  }
  const double scale = 1.0 / std::sqrt(total);
  for (auto& c : amps) c *= scale;
  return SpinState(n, std::move(amps));
}

SpinState apply_twist(const SpinState& state, TwistParams params) {
  const auto in = state.amplitudes();
  std::vector<complex> out(in.size());
  for (std::size_t k = 0; k < in.size(); ++k) {
    const double m = state.m_of(k);
    const double phase = params.rho * m + 0.5 * params.mu * m * m;
    out[k] = in[k] * std::polar(1.0, -phase);
  }
  return SpinState(state.twice_spin(), std::move(out));
}

SpinMoments moments(const SpinState& state) {
  const auto c = state.amplitudes();
  const double s = state.spin();
  const double casimir = s * (s + 1.0);
  const std::size_t dim = c.size();

  // S+|m> = a(m)|m+1>
  auto ladder = [&](double m) { return std::sqrt(casimir - m * (m + 1.0)); };

  double sz = 0.0;
  double sz2 = 0.0;
  complex raise{};     // <S+>
  complex raise2{};    // <S+^2>
  complex raise_sz{};  // <S+ Sz + Sz S+>
  for (std::size_t k = 0; k < dim; ++k) {
    const double m = state.m_of(k);
    const double p = std::norm(c[k]);
    sz += m * p;
    sz2 += m * m * p;
    if (k + 1 < dim) {
      const double a = ladder(m);
      const complex overlap = std::conj(c[k + 1]) * c[k];
      raise += a * overlap;
      raise_sz += (2.0 * m + 1.0) * a * overlap;
      if (k + 2 < dim) {
        raise2 += std::conj(c[k + 2]) * (ladder(m + 1.0) * a) * c[k];
      }
    }
  }

  SpinMoments out;
  out.sx = raise.real();
  out.sy = raise.imag();
  out.sz = sz;
  out.sz2 = sz2;
  // Sy^2 = (S+S- + S-S+ - S+^2 - S-^2)/4 and S+S- + S-S+ = 2(S^2 - Sz^2)
  out.sy2 = 0.5 * (casimir - sz2) - 0.5 * raise2.real();
  out.syz = raise_sz.imag();
  return out;
}

double min_transverse_variance(const SpinMoments& m) {
  if (std::isnan(m.sy2) || std::isnan(m.sz2) || std::isnan(m.syz)) {
    throw InvalidArgument("moments contain NaN");
  }
  const double u_plus = m.sy2 + m.sz2;
  const double u_minus = m.sy2 - m.sz2;
  const double root = std::hypot(u_minus, m.syz);
  if (u_plus + root == 0.0) return 0.0;
  // u+ - root written without cancellation: (u+^2 - root^2) / (u+ + root)
  const double value =
      (2.0 * m.sy2 * m.sz2 - 0.5 * m.syz * m.syz) / (u_plus + root);
  return value < 0.0 ? 0.0 : value;
}

double squeezing_param(const SpinMoments& m, double spin) {
  const int n = twice_spin(spin);
  if (m.sx == 0.0) {
    throw DegenerateMeanSpin("mean spin <Sx> is zero; squeezing undefined");
  }
  return n * min_transverse_variance(m) / (m.sx * m.sx);
}

}  // namespace squeezelab
