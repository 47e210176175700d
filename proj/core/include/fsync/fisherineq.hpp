#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fsync/dist.hpp"

namespace fisher {

// Uniform 1-D grid. Used for sampled-density Fisher information and for
// discrete convolution; callers are expected to make it wide enough
// (>= +-10 std-devs of everything placed on it).
struct Grid1D {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;

  static Grid1D make(double lo, double hi, int points);  // validates

  double spacing() const {
    return (hi - lo) / static_cast<double>(points - 1);
  }
  double at(int i) const { return lo + spacing() * static_cast<double>(i); }
};

// Symmetric grid with an odd point count so zero lies exactly on a node.
Grid1D symmetric_grid(double half_span, int points);

// Location-family FI of a sampled density: central-difference derivative,
// trapezoid integral of (f')^2 / f. The density must be strictly positive
// and normalized on the grid within 1e-6.
// Throws NonPositiveDensity, NotNormalized, GridMismatch.
double fi_location_1d(std::span<const double> density, const Grid1D& grid);

// Discrete convolution of two densities sampled on the same grid, scaled by
// the spacing and evaluated back on that grid (tails beyond the grid are
// dropped, which is why the grid must be generous). Requires zero to sit on
// a grid node. Throws GridMismatch.
std::vector<double> convolve_1d(std::span<const double> p1,
                                std::span<const double> p2,
                                const Grid1D& grid);

// Samples spec analytically on the grid.
std::vector<double> sample_density(const DistributionSpec& spec,
                                   const Grid1D& grid);

// Classical Fisher information inequality check:
//   slack = 1/J(p1*p2) - 1/J(p1) - 1/J(p2), nonnegative up to quadrature
// error, zero for two Gaussians. All three J values come from the same grid
// pipeline.
double check_fii_1d(const DistributionSpec& p1, const DistributionSpec& p2,
                    const Grid1D& grid);

// Zero-mean bivariate Gaussian over (x1, x3); the translation parameter acts
// on x1 only. Closed forms for the dependent-case oracle:
//   J_p1 = 1 / (sigma1_sq (1 - rho^2))
//   J_r  = 1 / (sigma1_sq (1 - rho^2) + noise variance)
struct BivariateGaussianSpec {
  double sigma1_sq = 1.0;
  double sigma3_sq = 1.0;
  double rho = 0.0;

  double pdf(double x1, double x3) const;  // throws NonPositiveDefinite
};

struct Fii2dResult {
  double j_p1 = 0.0;  // FI of the joint family in the translation parameter
  double j_r = 0.0;   // FI after convolving x1 with the noise
  double slack = 0.0; // 1/j_r - 1/j_p1 - 1/J_noise
};

// Extended inequality check for a dependent two-variable density convolved
// with noise along its first variable. The same square grid is used on both
// axes; the translation derivative is taken as -d/dx1.
Fii2dResult check_fii_2d(const std::function<double(double, double)>& joint,
                         const DistributionSpec& noise, const Grid1D& axis);

// Gaussian specialization (equality case, matches the closed forms above).
Fii2dResult check_fii_2d_dependent(const BivariateGaussianSpec& p1,
                                   const DistributionSpec& noise,
                                   const Grid1D& axis);

}  // namespace fisher
