#pragma once

#include <functional>
#include <string>
#include <vector>

#include "momentdet/jacobi.hpp"
#include "momentdet/sc.hpp"

namespace momentdet {

/// Scaled deviation: relative for values above 1, absolute below.
inline double scaled_deviation(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

/// Closed-form measures used for end-to-end validation.
struct ReferenceDistribution {
  std::string name;
  std::function<double(double)> density;  ///< null when no closed form is used
  JacobiSequence jacobi;
  Verdict known_verdict = Verdict::Inconclusive;
  double half_window = 40.0;  ///< quadrature window |x| <= half_window
  int max_moments = 10;       ///< largest supported N for reference_moments
};

ReferenceDistribution gaussian_reference();
/// density 1/(e^{pi x/2} + e^{-pi x/2}); its Jacobi sequence is n^2.
ReferenceDistribution sech_reference();
/// Gaussian, hyperbolic secant, and q-Gaussian family metadata entries
/// (the q-Gaussian entries carry no closed-form density).
std::vector<ReferenceDistribution> reference_distributions();

struct QuadratureParams {
  double half_window = 0.0;   ///< 0 = use the distribution's own window
  double target_error = 1e-9;
};

/// M_0..M_{2N} by tanh-sinh quadrature of x^{2n} against the density over
/// the symmetric window, with an error estimate combining the integrator's
/// estimate and the analytic truncation tail.
MomentSequence reference_moments(const ReferenceDistribution& dist, int n_moments,
                                 QuadratureParams params = {});

struct ValidationReport {
  std::vector<double> reference;  ///< density moments
  std::vector<double> walk;       ///< lattice-walk moments of dist.jacobi
  std::vector<double> deviation;  ///< scaled deviations
  double max_deviation = 0.0;
};

/// Compares the two independent moment routes; throws
/// MismatchBeyondTolerance at the first index exceeding tol.
ValidationReport validate_reference(const ReferenceDistribution& dist, int n_moments,
                                    double tol = 1e-7);

}  // namespace momentdet
