#include "fsync/fisherineq.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fsync/errors.hpp"

namespace fisher {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kDensityFloor = 1e-290;  // below this a cell is pure tail

// trapezoid weights: half at the two ends
double trapezoid(std::span<const double> values, double spacing) {
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    sum += values[i];
  }
  return sum * spacing;
}

void require_grid(std::span<const double> samples, const Grid1D& grid) {
  if (static_cast<int>(samples.size()) != grid.points) {
    throw GridMismatch("sample count does not match the grid");
  }
}

// index of zero on the grid; the convolution offset
int zero_index(const Grid1D& grid) {
  const double pos = -grid.lo / grid.spacing();
  const double rounded = std::round(pos);
  if (std::abs(pos - rounded) > 1e-9) {
    throw GridMismatch("grid must place zero exactly on a node");
  }
  return static_cast<int>(rounded);
}

}  // namespace

Grid1D Grid1D::make(double lo, double hi, int points) {
  if (!(lo < hi)) {
    throw GridMismatch("grid needs lo < hi");
  }
  if (points < 64) {
    throw GridMismatch("grid needs at least 64 points");
  }
  return {lo, hi, points};
}

Grid1D symmetric_grid(double half_span, int points) {
  if (points % 2 == 0) {
    ++points;
  }
  return Grid1D::make(-half_span, half_span, points);
}

double fi_location_1d(std::span<const double> density, const Grid1D& grid) {
  require_grid(density, grid);
  const double h = grid.spacing();

  for (double v : density) {
    if (!(v > 0.0)) {
      throw NonPositiveDensity("density must be strictly positive on the grid");
    }
  }
  const double mass = trapezoid(density, h);
  if (std::abs(mass - 1.0) > 1e-6) {
    throw NotNormalized("density integrates to " + std::to_string(mass));
  }

  std::vector<double> integrand(density.size());
  for (std::size_t i = 0; i < density.size(); ++i) {
    double deriv;
    if (i == 0) {
      deriv = (density[1] - density[0]) / h;
    } else if (i + 1 == density.size()) {
      deriv = (density[i] - density[i - 1]) / h;
    } else {
      deriv = (density[i + 1] - density[i - 1]) / (2.0 * h);
    }
    integrand[i] = deriv * deriv / density[i];
  }
  return trapezoid(integrand, h);
}

std::vector<double> convolve_1d(std::span<const double> p1,
                                std::span<const double> p2,
                                const Grid1D& grid) {
  require_grid(p1, grid);
  require_grid(p2, grid);
  const int n = grid.points;
  const int c = zero_index(grid);
  const double h = grid.spacing();

  // r(z_i) = h * sum_j p1(z_i - t_j) p2(t_j); z_i - t_j lands on node
  // i - j + c when it stays inside the grid
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    const int j_lo = std::max(0, i + c - (n - 1));
    const int j_hi = std::min(n - 1, i + c);
    for (int j = j_lo; j <= j_hi; ++j) {
      acc += p1[i - j + c] * p2[j];
    }
    out[i] = acc * h;
  }
  return out;
}

std::vector<double> sample_density(const DistributionSpec& spec,
                                   const Grid1D& grid) {
  std::vector<double> out(grid.points);
  for (int i = 0; i < grid.points; ++i) {
    out[i] = spec.pdf(grid.at(i));
  }
  return out;
}

double check_fii_1d(const DistributionSpec& p1, const DistributionSpec& p2,
                    const Grid1D& grid) {
  const auto d1 = sample_density(p1, grid);
  const auto d2 = sample_density(p2, grid);
  const auto r = convolve_1d(d1, d2, grid);
  const double j1 = fi_location_1d(d1, grid);
  const double j2 = fi_location_1d(d2, grid);
  const double jr = fi_location_1d(r, grid);
  return 1.0 / jr - 1.0 / j1 - 1.0 / j2;
}

double BivariateGaussianSpec::pdf(double x1, double x3) const {
  if (!(sigma1_sq > 0.0) || !(sigma3_sq > 0.0) || !(std::abs(rho) < 1.0)) {
    throw NonPositiveDefinite("bivariate Gaussian covariance must be PD");
  }
  const double s1 = std::sqrt(sigma1_sq);
  const double s3 = std::sqrt(sigma3_sq);
  const double omr = 1.0 - rho * rho;
  const double z1 = x1 / s1;
  const double z3 = x3 / s3;
  const double q = (z1 * z1 - 2.0 * rho * z1 * z3 + z3 * z3) / omr;
  return std::exp(-0.5 * q) / (kTwoPi * s1 * s3 * std::sqrt(omr));
}

namespace {

// FI of a [x1][x3] table in the x1-translation parameter: central
// differences along x1, trapezoid over both axes. Cells whose density has
// underflowed are pure tail and contribute nothing.
double fi_x1_translation(const std::vector<std::vector<double>>& table,
                         double h) {
  const int n = static_cast<int>(table.size());
  std::vector<double> row_integrals(n, 0.0);
  std::vector<double> integrand(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double deriv;
      if (i == 0) {
        deriv = (table[1][j] - table[0][j]) / h;
      } else if (i + 1 == n) {
        deriv = (table[i][j] - table[i - 1][j]) / h;
      } else {
        deriv = (table[i + 1][j] - table[i - 1][j]) / (2.0 * h);
      }
      const double p = table[i][j];
      integrand[i] = p > kDensityFloor ? deriv * deriv / p : 0.0;
    }
    row_integrals[j] = trapezoid(integrand, h);
  }
  return trapezoid(row_integrals, h);
}

}  // namespace

Fii2dResult check_fii_2d(const std::function<double(double, double)>& joint,
                         const DistributionSpec& noise, const Grid1D& axis) {
  if (axis.points < 256) {
    throw GridMismatch("two-variable check needs at least 256 points per axis");
  }
  const int n = axis.points;
  const double h = axis.spacing();
  const int c = zero_index(axis);

  std::vector<std::vector<double>> p(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      p[i][j] = joint(axis.at(i), axis.at(j));
    }
  }

  std::vector<double> noise_samples = sample_density(noise, axis);

  // convolve every x3-slice along x1
  std::vector<std::vector<double>> r(n, std::vector<double>(n, 0.0));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      const int k_lo = std::max(0, i + c - (n - 1));
      const int k_hi = std::min(n - 1, i + c);
      for (int k = k_lo; k <= k_hi; ++k) {
        acc += p[i - k + c][j] * noise_samples[k];
      }
      r[i][j] = acc * h;
    }
  }

  Fii2dResult result;
  result.j_p1 = fi_x1_translation(p, h);
  result.j_r = fi_x1_translation(r, h);
  result.slack =
      1.0 / result.j_r - 1.0 / result.j_p1 - 1.0 / noise.fisher_information();
  return result;
}

Fii2dResult check_fii_2d_dependent(const BivariateGaussianSpec& p1,
                                   const DistributionSpec& noise,
                                   const Grid1D& axis) {
  if (!(p1.sigma1_sq > 0.0) || !(p1.sigma3_sq > 0.0) ||
      !(std::abs(p1.rho) < 1.0)) {
    throw NonPositiveDefinite("bivariate Gaussian covariance must be PD");
  }
  return check_fii_2d(
      [&p1](double x1, double x3) { return p1.pdf(x1, x3); }, noise, axis);
}

}  // namespace fisher
