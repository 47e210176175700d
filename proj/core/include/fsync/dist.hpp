#pragma once

#include <vector>

#include "fsync/rng.hpp"

namespace fisher {

enum class DistKind { Gaussian, Logistic, Mixture2 };

// A zero-centered smooth density family: strictly positive pdf on all of R,
// analytic derivative, finite variance, convergent Fisher information
// integral. Immutable after construction and safe to share across threads.
class DistributionSpec {
 public:
  // variance > 0
  static DistributionSpec gaussian(double variance);
  // scale > 0; variance is pi^2 s^2 / 3
  static DistributionSpec logistic(double scale);
  // Two Gaussian components with common variance component_variance > 0,
  // means 2(1-weight)*offset and -2*weight*offset so the mixture mean is
  // zero for any weight in (0,1). weight 0.5 gives components at +-offset.
  static DistributionSpec mixture2(double weight, double offset,
                                   double component_variance);

  DistKind kind() const { return kind_; }

  double pdf(double x) const;
  double pdf_deriv(double x) const;
  double sample(Rng& rng) const;

  // Closed form for all supported kinds.
  double variance() const;
  double std_dev() const;

  // Location-family Fisher information: analytic 1/sigma^2 for Gaussian,
  // adaptive quadrature of (pdf')^2/pdf otherwise. Throws NonConvergent if
  // refinement never stabilizes.
  double fisher_information() const;

  // variance * fisher_information; >= 1 for every smooth density,
  // equal to 1 exactly for Gaussians.
  double fisher_tightness() const;

  // parameter accessors (serialization, reporting)
  double gaussian_variance() const;
  double logistic_scale() const;
  double mixture_weight() const;
  double mixture_offset() const;
  double mixture_component_variance() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&);

 private:
  DistributionSpec(DistKind kind, double p0, double p1, double p2)
      : kind_(kind), p0_(p0), p1_(p1), p2_(p2) {}

  DistKind kind_;
  double p0_, p1_, p2_;  // meaning depends on kind
};

// The finite family F: the initial-opinion densities plus the noise density.
struct FamilyCatalog {
  std::vector<DistributionSpec> initial_specs;  // nonempty
  DistributionSpec noise_spec;
};

// max Fisher-tightness over initial_specs and noise_spec
double delta0(const FamilyCatalog& catalog);

// Quadrature diagnostics over the distribution's natural span; used by
// invariant checks: integral of pdf, first moment, second moment.
double quad_normalization(const DistributionSpec& spec);
double quad_mean(const DistributionSpec& spec);
double quad_variance(const DistributionSpec& spec);

}  // namespace fisher
