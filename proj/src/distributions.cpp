#include "momentdet/distributions.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

namespace momentdet {

namespace {

constexpr double kPi = 3.14159265358979323846;

double gaussian_density(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

double sech_density(double x) { return 1.0 / (std::exp(kPi * x / 2.0) + std::exp(-kPi * x / 2.0)); }

/// Truncation tail of 2 * int_W^inf x^{2n} e^{-c x} dx, valid for c W > 2n:
/// the integrand envelope is geometric with ratio 2n/(cW).
double exp_tail_bound(double half_window, double c, int two_n) {
  const double cw = c * half_window;
  if (cw <= two_n + 1) return std::numeric_limits<double>::infinity();
  const double geo = 1.0 / (1.0 - two_n / cw);
  return 2.0 * std::pow(half_window, two_n) * std::exp(-cw) / c * geo;
}

}  // namespace

ReferenceDistribution gaussian_reference() {
  ReferenceDistribution d;
  d.name = "gaussian";
  d.density = gaussian_density;
  d.jacobi = JacobiSequence::power(1.0);
  d.known_verdict = Verdict::Determinate;
  d.half_window = 40.0;
  d.max_moments = 12;
  return d;
}

ReferenceDistribution sech_reference() {
  ReferenceDistribution d;
  d.name = "hyperbolic_secant";
  d.density = sech_density;
  d.jacobi = JacobiSequence::power(2.0);
  d.known_verdict = Verdict::Determinate;
  d.half_window = 40.0;
  d.max_moments = 10;
  return d;
}

std::vector<ReferenceDistribution> reference_distributions() {
  std::vector<ReferenceDistribution> out;
  out.push_back(gaussian_reference());
  out.push_back(sech_reference());
  // q-Gaussian metadata: no closed-form density is consumed here, only the
  // Jacobi sequence and the known verdict
  ReferenceDistribution qpos;
  qpos.name = "q_gaussian(q=2)";
  qpos.jacobi = JacobiSequence::q_gaussian_pos(2.0);
  qpos.known_verdict = Verdict::Indeterminate;
  out.push_back(qpos);
  ReferenceDistribution qsub;
  qsub.name = "q_gaussian(q=0.5)";
  qsub.jacobi = JacobiSequence::q_gaussian_pos(0.5);
  qsub.known_verdict = Verdict::Determinate;
  out.push_back(qsub);
  ReferenceDistribution qneg;
  qneg.name = "q_gaussian(q=-2)";
  qneg.jacobi = JacobiSequence::q_gaussian_neg(-2.0);
  qneg.known_verdict = Verdict::Indeterminate;
  out.push_back(qneg);
  return out;
}

MomentSequence reference_moments(const ReferenceDistribution& dist, int n_moments,
                                 QuadratureParams params) {
  if (!dist.density) throw InvalidParameter("distribution '" + dist.name + "' has no density");
  if (n_moments < 0) throw InvalidParameter("n_moments must be >= 0");
  if (n_moments > dist.max_moments)
    throw InvalidParameter("n_moments exceeds the supported window for '" + dist.name +
                           "' (max " + std::to_string(dist.max_moments) + ")");
  const double w = params.half_window > 0.0 ? params.half_window : dist.half_window;

  boost::math::quadrature::tanh_sinh<double> integrator;
  MomentSequence moments;
  moments.even_moments.reserve(n_moments + 1);
  // decay rate for the truncation bound: both built-ins decay at least like
  // e^{-pi x / 2} on |x| >= 1
  const double decay = kPi / 2.0;
  for (int j = 0; j <= n_moments; ++j) {
    double est_err = 0.0, l1 = 0.0;
    const auto f = [&](double x) { return std::pow(x, 2 * j) * dist.density(x); };
    const double value = 2.0 * integrator.integrate(f, 0.0, w, 1e-12, &est_err, &l1);
    const double tail = exp_tail_bound(w, decay, 2 * j);
    const double achieved = est_err + tail / std::max(1.0, std::abs(value));
    if (!(achieved < params.target_error))
      throw QuadratureNotConverged(achieved, params.target_error);
    moments.even_moments.push_back(value);
  }
  return moments;
}

ValidationReport validate_reference(const ReferenceDistribution& dist, int n_moments,
                                    double tol) {
  ValidationReport report;
  report.reference = reference_moments(dist, n_moments).even_moments;
  report.walk = moments_from_jacobi(dist.jacobi, n_moments).even_moments;
  report.deviation.resize(n_moments + 1);
  int first_bad = -1;
  for (int j = 0; j <= n_moments; ++j) {
    report.deviation[j] = scaled_deviation(report.reference[j], report.walk[j]);
    report.max_deviation = std::max(report.max_deviation, report.deviation[j]);
    if (first_bad < 0 && report.deviation[j] > tol) first_bad = j;
  }
  if (first_bad >= 0) throw MismatchBeyondTolerance(first_bad, report.deviation[first_bad]);
  return report;
}

}  // namespace momentdet
