#include "fsync/dist.hpp"

#include <algorithm>
#include <cmath>

#include "fsync/errors.hpp"
#include "fsync/quadrature.hpp"

namespace fisher {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPiSq = 9.869604401089358618834490999876;

double gauss_pdf(double x, double variance) {
  return std::exp(-0.5 * x * x / variance) / std::sqrt(kTwoPi * variance);
}

double gauss_pdf_deriv(double x, double variance) {
  return -x / variance * gauss_pdf(x, variance);
}

}  // namespace

DistributionSpec DistributionSpec::gaussian(double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw InvalidDistribution("gaussian variance must be finite and > 0");
  }
  return {DistKind::Gaussian, variance, 0.0, 0.0};
}

DistributionSpec DistributionSpec::logistic(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidDistribution("logistic scale must be finite and > 0");
  }
  return {DistKind::Logistic, scale, 0.0, 0.0};
}

DistributionSpec DistributionSpec::mixture2(double weight, double offset,
                                            double component_variance) {
  if (!(weight > 0.0) || !(weight < 1.0)) {
    throw InvalidDistribution("mixture2 weight must lie in (0, 1)");
  }
  if (!(component_variance > 0.0) || !std::isfinite(component_variance)) {
    throw InvalidDistribution("mixture2 component variance must be > 0");
  }
  if (!std::isfinite(offset)) {
    throw InvalidDistribution("mixture2 offset must be finite");
  }
  return {DistKind::Mixture2, weight, offset, component_variance};
}

double DistributionSpec::pdf(double x) const {
  switch (kind_) {
    case DistKind::Gaussian:
      return gauss_pdf(x, p0_);
    case DistKind::Logistic: {
      // f(x) = e^(-x/s) / (s (1 + e^(-x/s))^2), evaluated via |x| for
      // symmetry so large arguments never overflow the exponential
      const double z = std::abs(x) / p0_;
      const double e = std::exp(-z);
      return e / (p0_ * (1.0 + e) * (1.0 + e));
    }
    case DistKind::Mixture2: {
      const double w = p0_;
      const double m1 = 2.0 * (1.0 - w) * p1_;
      const double m2 = -2.0 * w * p1_;
      return w * gauss_pdf(x - m1, p2_) + (1.0 - w) * gauss_pdf(x - m2, p2_);
    }
  }
  return 0.0;
}

double DistributionSpec::pdf_deriv(double x) const {
  switch (kind_) {
    case DistKind::Gaussian:
      return gauss_pdf_deriv(x, p0_);
    case DistKind::Logistic: {
      // f'(x) = f(x) (1 - 2 F(x)) / s with F the logistic cdf
      const double s = p0_;
      const double cdf = 1.0 / (1.0 + std::exp(-x / s));
      return pdf(x) * (1.0 - 2.0 * cdf) / s;
    }
    case DistKind::Mixture2: {
      const double w = p0_;
      const double m1 = 2.0 * (1.0 - w) * p1_;
      const double m2 = -2.0 * w * p1_;
      return w * gauss_pdf_deriv(x - m1, p2_) +
             (1.0 - w) * gauss_pdf_deriv(x - m2, p2_);
    }
  }
  return 0.0;
}

double DistributionSpec::sample(Rng& rng) const {
  switch (kind_) {
    case DistKind::Gaussian:
      return std::sqrt(p0_) * rng.normal01();
    case DistKind::Logistic: {
      // inverse cdf; u in (0,1) strictly
      const double u = std::min(rng.uniform01() + 0x1.0p-54, 1.0 - 0x1.0p-54);
      return -p0_ * std::log(1.0 / u - 1.0);
    }
    case DistKind::Mixture2: {
      const double w = p0_;
      const double m1 = 2.0 * (1.0 - w) * p1_;
      const double m2 = -2.0 * w * p1_;
      const double mean = rng.uniform01() < w ? m1 : m2;
      return mean + std::sqrt(p2_) * rng.normal01();
    }
  }
  return 0.0;
}

double DistributionSpec::variance() const {
  switch (kind_) {
    case DistKind::Gaussian:
      return p0_;
    case DistKind::Logistic:
      return kPiSq * p0_ * p0_ / 3.0;
    case DistKind::Mixture2:
      // component variance plus the variance of the two-point mean offset
      return p2_ + 4.0 * p0_ * (1.0 - p0_) * p1_ * p1_;
  }
  return 0.0;
}

double DistributionSpec::std_dev() const { return std::sqrt(variance()); }

double DistributionSpec::fisher_information() const {
  if (kind_ == DistKind::Gaussian) {
    return 1.0 / p0_;
  }
  const double span = 12.0 * std_dev();
  return integrate_adaptive(
      [this](double x) {
        const double p = pdf(x);
        const double dp = pdf_deriv(x);
        return dp * dp / p;
      },
      -span, span);
}

double DistributionSpec::fisher_tightness() const {
  return variance() * fisher_information();
}

double DistributionSpec::gaussian_variance() const { return p0_; }
double DistributionSpec::logistic_scale() const { return p0_; }
double DistributionSpec::mixture_weight() const { return p0_; }
double DistributionSpec::mixture_offset() const { return p1_; }
double DistributionSpec::mixture_component_variance() const { return p2_; }

bool operator==(const DistributionSpec& a, const DistributionSpec& b) {
  return a.kind_ == b.kind_ && a.p0_ == b.p0_ && a.p1_ == b.p1_ &&
         a.p2_ == b.p2_;
}

double delta0(const FamilyCatalog& catalog) {
  if (catalog.initial_specs.empty()) {
    throw InvalidDistribution("catalog needs at least one initial spec");
  }
  double best = catalog.noise_spec.fisher_tightness();
  for (const auto& spec : catalog.initial_specs) {
    best = std::max(best, spec.fisher_tightness());
  }
  return best;
}

// Moment diagnostics use a wider span than the FI integral: the logistic
// second moment still carries ~5e-8 of its mass beyond 12 std-devs, and the
// checks below are quoted at 1e-8.
double quad_normalization(const DistributionSpec& spec) {
  const double span = 16.0 * spec.std_dev();
  return integrate_adaptive([&](double x) { return spec.pdf(x); }, -span, span,
                            1e-10);
}

double quad_mean(const DistributionSpec& spec) {
  const double span = 16.0 * spec.std_dev();
  // zero-valued integral: converge on an absolute scale set by the std-dev
  return integrate_adaptive([&](double x) { return x * spec.pdf(x); }, -span,
                            span, 1e-10, kQuadMaxRefinements,
                            1e-10 * spec.std_dev());
}

double quad_variance(const DistributionSpec& spec) {
  const double span = 16.0 * spec.std_dev();
  return integrate_adaptive([&](double x) { return x * x * spec.pdf(x); },
                            -span, span, 1e-9);
}

}  // namespace fisher
