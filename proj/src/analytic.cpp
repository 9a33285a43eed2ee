#include "squeezelab/analytic.hpp"

#include <cmath>
#include <string>

#include "squeezelab/error.hpp"

namespace squeezelab {

namespace {

// log|cos x| without cancellation for small x
double log_abs_cos(double x) {
  const double half_sin = std::sin(0.5 * x);
  const double c = std::cos(x);
  if (c > 0.5) return std::log1p(-2.0 * half_sin * half_sin);
  return std::log(std::abs(c));
}

// cos(x)^n - 1, accurate when the result is tiny
double cos_power_minus_one(double x, int n) {
  if (n == 0) return 0.0;
  const double c = std::cos(x);
  if (c > 0.0) return std::expm1(n * log_abs_cos(x));
  return cos_power(x, n) - 1.0;
}

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string(name) + " must be finite and >= 0");
  }
}

}  // namespace

double cos_power(double x, int n) {
  if (n < 0) throw InvalidArgument("cos_power needs n >= 0");
  if (n == 0) return 1.0;
  const double c = std::cos(x);
  if (c == 0.0) return 0.0;
  const double magnitude = std::exp(n * log_abs_cos(x));
  return (c < 0.0 && (n % 2 == 1)) ? -magnitude : magnitude;
}

SpinMoments kitagawa_moments(double spin, double rho, double mu) {
  const int n = twice_spin(spin);
  const double s = 0.5 * n;
  const double c_half = cos_power(0.5 * mu, n - 1);
  SpinMoments m;
  m.sx = s * std::cos(rho) * c_half;
  m.sy = s * std::sin(rho) * c_half;
  m.sz = 0.0;
  // 1 - cos(2 rho) cos^(2S-2)(mu) = 2 sin^2(rho) - cos(2 rho) (cos^(2S-2)(mu) - 1)
  const double sr = std::sin(rho);
  const double spread =
      n > 1 ? 2.0 * sr * sr - std::cos(2.0 * rho) * cos_power_minus_one(mu, n - 2)
            : 0.0;
  m.sy2 = 0.5 * s * (1.0 + (s - 0.5) * spread);
  m.sz2 = 0.5 * s;
  m.syz = n > 1 ? s * (n - 1) * std::cos(rho) * std::sin(0.5 * mu) *
                      cos_power(0.5 * mu, n - 2)
                : 0.0;
  return m;
}

SpinMoments gaussian_moments(double spin, double mu, double eps) {
  const double s = 0.5 * twice_spin(spin);
  require_nonnegative(mu, "mu");
  require_nonnegative(eps, "eps");
  const double v = eps * mu + mu * mu * 0.5 * s;
  const double decay = std::exp(-0.5 * v);
  SpinMoments m;
  m.sx = s * decay;
  m.sy2 = 0.5 * s * (1.0 - s * std::expm1(-2.0 * v));
  m.sz2 = 0.5 * s;
  m.syz = s * s * mu * decay;
  return m;
}

ScatteringMoments scattering_moments(double spin, double mu,
                                     const NoiseParams& noise) {
  const double s = 0.5 * twice_spin(spin);
  require_nonnegative(mu, "mu");
  require_nonnegative(noise.eps, "eps");
  if (!(noise.eta > 0.0)) throw InvalidArgument("eta must be > 0");

  ScatterFactors f;
  f.r = std::isinf(noise.eta) ? 0.0 : mu / (4.0 * noise.eta);
  f.contrast = std::exp(-2.0 * f.r);
  f.szbar2 = (1.0 - 2.0 * f.r / 3.0) * 0.5 * s;
  f.sz_szbar = (1.0 - f.r) * 0.5 * s;
  f.vprime = noise.eps * mu + mu * mu * f.szbar2;
  f.beyond_leading_order = f.r > kMaxLeadingOrderR;

  const double decay = std::exp(-0.5 * f.vprime);
  SpinMoments m;
  m.sx = s * f.contrast * decay;
  m.sy2 = 0.5 * s *
          (1.0 - s * f.contrast * f.contrast * std::expm1(-2.0 * f.vprime));
  m.sz2 = 0.5 * s;
  m.syz = s * s * (1.0 - f.r) * f.contrast * mu * decay;
  return {m, f};
}

Regime parse_regime(std::string_view name) {
  if (name == "ideal") return Regime::ideal;
  if (name == "coherent") return Regime::coherent;
  if (name == "scattering") return Regime::scattering;
  throw InvalidArgument("unknown regime '" + std::string(name) + "'");
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::ideal: return "ideal";
    case Regime::coherent: return "coherent";
    case Regime::scattering: return "scattering";
  }
  throw InvalidArgument("unknown regime tag");
}

Optimum asymptotic_optimum(double spin, Regime regime, double eta) {
  const double s = 0.5 * twice_spin(spin);
  switch (regime) {
    case Regime::ideal:
      return {std::pow(12.0, 1.0 / 6.0) / std::pow(s, 2.0 / 3.0),
              std::pow(12.0, 2.0 / 3.0) / (8.0 * std::pow(s, 2.0 / 3.0))};
    case Regime::coherent:
      return {std::pow(12.0, 0.2) / std::pow(s, 0.6),
              5.0 / (std::pow(384.0, 0.2) * std::pow(s, 0.4))};
    case Regime::scattering:
      if (!(eta > 0.0) || std::isinf(eta)) {
        throw InvalidArgument("scattering regime needs finite eta > 0");
      }
      return {std::cbrt(6.0 * eta) / std::pow(s, 2.0 / 3.0),
              std::cbrt(6.0) / (2.0 * std::pow(s * eta, 2.0 / 3.0))};
  }
  throw InvalidArgument("unknown regime tag");
}

std::optional<Regime> matching_regime(const NoiseParams& noise) {
  if (std::isinf(noise.eta)) {
    if (noise.eps == 0.0) return Regime::ideal;
    if (noise.eps == 1.0) return Regime::coherent;
    return std::nullopt;
  }
  if (noise.eps == 0.0 && noise.eta < 1.0) return Regime::scattering;
  return std::nullopt;
}

Model parse_model(std::string_view name) {
  if (name == "kitagawa-exact") return Model::kitagawa_exact;
  if (name == "gaussian") return Model::gaussian;
  if (name == "scattering") return Model::scattering;
  throw InvalidArgument("unknown model '" + std::string(name) + "'");
}

std::string_view to_string(Model model) {
  switch (model) {
    case Model::kitagawa_exact: return "kitagawa-exact";
    case Model::gaussian: return "gaussian";
    case Model::scattering: return "scattering";
  }
  throw InvalidArgument("unknown model tag");
}

ModelPoint evaluate_model(Model model, double spin, double mu,
                          const NoiseParams& noise) {
  ModelPoint p;
  switch (model) {
    case Model::kitagawa_exact:
      p.moments = kitagawa_moments(spin, 0.0, mu);
      break;
    case Model::gaussian:
      p.moments = gaussian_moments(spin, mu, noise.eps);
      break;
    case Model::scattering: {
      const auto sm = scattering_moments(spin, mu, noise);
      p.moments = sm.moments;
      p.contrast = sm.factors.contrast;
      p.beyond_leading_order = sm.factors.beyond_leading_order;
      break;
    }
  }
  p.variance = min_transverse_variance(p.moments);
  p.xi = squeezing_param(p.moments, spin);
  return p;
}

ScanOptions default_mu_scan(Model model, double spin, const NoiseParams& noise) {
  const double s = 0.5 * twice_spin(spin);
  ScanOptions scan;
  scan.lo = 1e-2 / s;
  scan.hi = std::min(1.0, 30.0 / std::sqrt(s));
  if (model == Model::scattering && std::isfinite(noise.eta)) {
    scan.hi = std::min(scan.hi, 4.0 * kMaxLeadingOrderR * noise.eta);
  }
  if (!(scan.hi > scan.lo)) scan.lo = scan.hi * 1e-3;
  return scan;
}

NumericalOptimum optimize_mu(Model model, double spin, const NoiseParams& noise,
                             std::optional<ScanOptions> scan) {
  const ScanOptions options = scan ? *scan : default_mu_scan(model, spin, noise);
  auto objective = [&](double mu) {
    try {
      return evaluate_model(model, spin, mu, noise).xi;
    } catch (const DegenerateMeanSpin&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const ScanResult r = minimize_log_scan(objective, options);
  return {r.x, r.value, r.at_boundary};
}

}  // namespace squeezelab
