#include "squeezelab/cavity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "squeezelab/error.hpp"

namespace squeezelab {

namespace {

constexpr int kNodes = 16;

struct GaussLegendre {
  std::array<double, kNodes> x{};
  std::array<double, kNodes> w{};
};

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule = [] {
    GaussLegendre r;
    const int n = kNodes;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double step = p1 / dp;
        z -= step;
        if (std::abs(step) < 1e-16) break;
      }
      r.x[i] = z;
      r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

}  // namespace

CavityConfig CavityConfig::from_cooperativity(double kappa, double eta,
                                              double gamma_over_delta) {
  CavityConfig cfg;
  cfg.kappa = kappa;
  cfg.omega = 0.5 * kappa * eta * gamma_over_delta;
  cfg.eta = eta;
  cfg.gamma_over_delta = gamma_over_delta;
  return cfg;
}

void validate(const CavityConfig& cfg) {
  if (!(cfg.kappa > 0.0) || !std::isfinite(cfg.kappa)) {
    throw InvalidArgument("kappa must be finite and > 0");
  }
  if (!std::isfinite(cfg.omega)) throw InvalidArgument("omega must be finite");
  if (cfg.eta && cfg.gamma_over_delta) {
    const double phi = 2.0 * cfg.omega / cfg.kappa;
    const double other = *cfg.eta * *cfg.gamma_over_delta;
    if (std::abs(phi - other) > 1e-9 * std::max(std::abs(phi), std::abs(other))) {
      throw InvalidArgument("2 omega / kappa disagrees with eta * Gamma/|Delta|");
    }
  }
}

double per_photon_phase(const CavityConfig& cfg) {
  validate(cfg);
  return 2.0 * cfg.omega / cfg.kappa;
}

double phase_lag(const CavityConfig& cfg, double detuning, double m) {
  const double a = 0.5 * cfg.kappa;
  const double shift = cfg.omega * m;
  // atan2(a, d) - pi/4 as a single rotated atan2; stays in (-pi/4, 3pi/4)
  return std::atan2((a - detuning) + shift, (a + detuning) - shift);
}

PhaseExpansion expand_per_photon_phase(const CavityConfig& cfg, int m_max) {
  validate(cfg);
  if (m_max < 1) throw InvalidArgument("m_max must be >= 1");
  if (m_max * std::abs(cfg.omega) >= 0.5 * cfg.kappa) {
    throw RegimeViolation("m_max * |omega| must stay below kappa / 2");
  }
  const double phi = per_photon_phase(cfg);
  const double detuning = 0.5 * cfg.kappa;

  // symmetric grid: the m and m^2 normal equations decouple
  double s_my = 0.0;
  double s_m2y = 0.0;
  double s_m2 = 0.0;
  double s_m4 = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    const double up = 2.0 * phase_lag(cfg, detuning, m);
    const double down = 2.0 * phase_lag(cfg, detuning, -m);
    const double m2 = static_cast<double>(m) * m;
    s_my += m * (up - down);
    s_m2y += m2 * (up + down);
    s_m2 += 2.0 * m2;
    s_m4 += 2.0 * m2 * m2;
  }
  PhaseExpansion out;
  out.linear = s_my / s_m2;
  out.quadratic = s_m2y / s_m4;
  out.cubic_bound = std::abs(phi * phi * phi) * m_max * m_max / 6.0;
  // at m_max = 1 the linear residual equals the bound up to rounding
  const double slack = out.cubic_bound + 64.0 * std::numeric_limits<double>::epsilon() * std::abs(phi);
  out.linear_within_bound = std::abs(out.linear - phi) <= slack;
  out.quadratic_within_bound = std::abs(out.quadratic - 0.5 * phi * phi) <= slack;
  out.small_shift = std::abs(phi) * m_max <= 0.1;
  return out;
}

PulseShape parse_pulse_shape(std::string_view name) {
  if (name == "gaussian") return PulseShape::gaussian;
  if (name == "lorentzian") return PulseShape::lorentzian;
  if (name == "square") return PulseShape::square;
  throw InvalidArgument("unknown pulse shape '" + std::string(name) + "'");
}

std::string_view to_string(PulseShape shape) {
  switch (shape) {
    case PulseShape::gaussian: return "gaussian";
    case PulseShape::lorentzian: return "lorentzian";
    case PulseShape::square: return "square";
  }
  throw InvalidArgument("unknown pulse shape tag");
}

double PulseSpectrum::density(double detuning) const {
  const double u = detuning - center_detuning;
  const double s = bandwidth;
  switch (shape) {
    case PulseShape::gaussian: {
      const double z = u / s;
      return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
    }
    case PulseShape::lorentzian:
      return s / (std::numbers::pi * (u * u + s * s));
    case PulseShape::square: {
      const double z = u / s;
      const double sinc = z == 0.0 ? 1.0 : std::sin(z) / z;
      return sinc * sinc / (std::numbers::pi * s);
    }
  }
  return 0.0;
}

FidelityResult factorization_fidelity(const CavityConfig& cfg,
                                      const PulseSpectrum& pulse, double m,
                                      double m_prime) {
  validate(cfg);
  if (!(pulse.bandwidth > 0.0) || !std::isfinite(pulse.bandwidth)) {
    throw InvalidArgument("pulse bandwidth must be finite and > 0");
  }
  FidelityResult result;
  const double shift = cfg.omega * (m - m_prime);
  if (shift == 0.0) return result;

  const double a = 0.5 * cfg.kappa;
  const double c = pulse.center_detuning;
  const double sigma = pulse.bandwidth;

  // F = |1 + G|, G = integral of |B|^2 (exp(-2i dPhi) - 1); the bracket
  // decays like 1/omega^2 so heavy-tailed spectra truncate cleanly.
  auto integrand = [&](double w) {
    const double d1 = w - cfg.omega * m;
    const double d2 = w - cfg.omega * m_prime;
    const double dphi = std::atan2(a * shift, a * a + d1 * d2);
    const std::complex<double> bracket =
        std::complex<double>(0.0, -2.0 * std::sin(dphi)) *
        std::polar(1.0, -dphi);
    return pulse.density(w) * bracket;
  };

  std::vector<double> edges;
  const double res_lo = std::min(cfg.omega * m, cfg.omega * m_prime);
  const double res_hi = std::max(cfg.omega * m, cfg.omega * m_prime);
  double half_width = 8.0 * sigma;
  if (pulse.shape != PulseShape::gaussian) {
    // tail bound ~ 64 sigma a |shift| / (3 pi W^3) < 1e-12, with the cavity
    // features inside W/2
    const double from_tail =
        std::cbrt(64.0 * sigma * a * std::abs(shift) / (3.0 * std::numbers::pi * 1e-12));
    const double features =
        2.0 * (std::abs(c) + std::max(std::abs(res_lo), std::abs(res_hi)) + a);
    half_width = std::max({half_width, from_tail, features});
  }
  const double lo = c - half_width;
  const double hi = c + half_width;
  auto add = [&](double x) {
    if (x >= lo && x <= hi) edges.push_back(x);
  };
  add(lo);
  add(hi);
  for (int j = -8; j <= 8; ++j) add(c + j * sigma);
  for (double step = 16.0 * sigma; step < half_width; step *= 2.0) {
    add(c - step);
    add(c + step);
  }
  for (const double center : {res_lo, res_hi}) {
    add(center);
    for (double step = 0.25 * a; step < half_width; step *= 2.0) {
      add(center - step);
      add(center + step);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const auto& rule = gauss_legendre();
  auto integrate = [&](const std::vector<double>& e) {
    std::complex<double> total{};
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
      const double mid = 0.5 * (e[i] + e[i + 1]);
      const double half = 0.5 * (e[i + 1] - e[i]);
      std::complex<double> panel{};
      for (int k = 0; k < kNodes; ++k) panel += rule.w[k] * integrand(mid + half * rule.x[k]);
      total += half * panel;
    }
    return total;
  };
  auto assess = [](std::complex<double> g) {
    const double f = std::abs(1.0 + g);
    const double one_minus = -(2.0 * g.real() + std::norm(g)) / (1.0 + f);
    return std::pair{f, one_minus};
  };

  auto [f_prev, om_prev] = assess(integrate(edges));
  for (int level = 0; level < 14; ++level) {
    std::vector<double> finer;
    finer.reserve(2 * edges.size());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      finer.push_back(edges[i]);
      finer.push_back(0.5 * (edges[i] + edges[i + 1]));
    }
    finer.push_back(edges.back());
    edges = std::move(finer);
    const auto [f, om] = assess(integrate(edges));
    const double delta = std::abs(f - f_prev);
    const double delta_om = std::abs(om - om_prev);
    f_prev = f;
    om_prev = om;
    if (delta < 1e-10 && delta_om <= 1e-8 * std::abs(om) + 1e-16) {
      result.fidelity = std::min(f, 1.0);
      result.one_minus_fidelity = std::max(om, 0.0);
      result.residual = delta;
      result.panels = static_cast<int>(edges.size()) - 1;
      return result;
    }
  }
  throw NumericError("fidelity quadrature did not converge",
                     std::abs(om_prev));
}

}  // namespace squeezelab
