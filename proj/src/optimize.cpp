#include "squeezelab/optimize.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "squeezelab/error.hpp"

namespace squeezelab {

namespace {

double finite_or_inf(double v) {
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

double golden_section_minimize(const std::function<double(double)>& f,
                               double lo, double hi, double rel_tol,
                               int max_iterations) {
  if (!(lo < hi)) throw InvalidArgument("golden section needs lo < hi");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = finite_or_inf(f(c));
  double fd = finite_or_inf(f(d));
  for (int i = 0; i < max_iterations; ++i) {
    if (b - a <= rel_tol * 0.5 * std::abs(a + b)) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = finite_or_inf(f(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = finite_or_inf(f(d));
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> log_space(double lo, double hi, int points) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo)) {
    throw InvalidArgument("log grid needs 0 < lo <= hi and points >= 1");
  }
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / (points - 1);
  for (int i = 0; i < points; ++i) out[i] = std::exp(a + step * i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> lin_space(double lo, double hi, int points) {
  if (points < 1 || !(hi >= lo)) {
    throw InvalidArgument("linear grid needs lo <= hi and points >= 1");
  }
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) out[i] = lo + step * i;
  out.back() = hi;
  return out;
}

ScanResult minimize_log_scan(const std::function<double(double)>& f,
                             const ScanOptions& options) {
  if (!(options.lo > 0.0) || !(options.hi > options.lo)) {
    throw InvalidArgument("scan range must satisfy 0 < lo < hi");
  }
  const double decades = std::log10(options.hi / options.lo);
  const int points =
      std::max(3, static_cast<int>(std::ceil(decades * options.points_per_decade)) + 1);
  const auto grid = log_space(options.lo, options.hi, points);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = finite_or_inf(f(grid[i]));

  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }

  // Count interior minima, treating flat runs as one. Differences below a
  // relative 1e-12 are rounding noise.
  auto lower = [](double a, double b) {
    return a < b - 1e-12 * std::abs(b);
  };
  int minima = 0;
  std::size_t i = 1;
  while (i + 1 < values.size()) {
    if (!lower(values[i], values[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < values.size() && !lower(values[j + 1], values[j]) &&
           !lower(values[j], values[j + 1])) {
      ++j;
    }
    if (j + 1 < values.size() && lower(values[j], values[j + 1])) ++minima;
    i = j + 1;
  }
  if (minima > 1) {
    throw OptimizationAmbiguity("scan found " + std::to_string(minima) +
                                " local minima");
  }

  ScanResult result;
  result.grid_minima = minima;
  if (!std::isfinite(values[best])) {
    throw NumericError("objective is non-finite over the whole scan range",
                       values[best]);
  }
  if (best == 0 || best + 1 == grid.size()) {
    result.at_boundary = true;
    result.x = grid[best];
    result.value = values[best];
    return result;
  }
  const double x = golden_section_minimize(f, grid[best - 1], grid[best + 1],
                                           options.rel_tol);
  const double fx = finite_or_inf(f(x));
  if (fx <= values[best]) {
    result.x = x;
    result.value = fx;
  } else {
    result.x = grid[best];
    result.value = values[best];
  }
  return result;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("line fit needs two or more paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("line fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace squeezelab
