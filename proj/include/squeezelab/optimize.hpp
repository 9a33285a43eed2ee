#pragma once

#include <functional>
#include <span>
#include <vector>

namespace squeezelab {

/// Golden-section search for the minimum of a unimodal function on [lo, hi].
/// Stops when the bracket is narrower than rel_tol times its midpoint.
double golden_section_minimize(const std::function<double(double)>& f,
                               double lo, double hi, double rel_tol = 1e-6,
                               int max_iterations = 500);

struct ScanOptions {
  double lo = 0.0;
  double hi = 0.0;
  int points_per_decade = 64;
  double rel_tol = 1e-6;
};

struct ScanResult {
  double x = 0.0;
  double value = 0.0;
  int grid_minima = 0;      ///< interior local minima seen on the coarse grid
  bool at_boundary = false; ///< smallest grid value sat on an endpoint
};

/// Coarse log-spaced scan followed by golden-section refinement around the
/// best grid point. Non-finite function values count as +infinity.
/// Throws OptimizationAmbiguity when the grid shows several local minima.
ScanResult minimize_log_scan(const std::function<double(double)>& f,
                             const ScanOptions& options);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// `points` log-spaced values from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, int points);
std::vector<double> lin_space(double lo, double hi, int points);

}  // namespace squeezelab
