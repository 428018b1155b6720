#include "momentdet/sc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace momentdet {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Indeterminate: return "Indeterminate";
    case Verdict::Determinate: return "Determinate";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::ConditionStar: return "condition_star";
    case CertificateKind::Carleman: return "carleman";
    case CertificateKind::SumCConverged: return "sum_c_converged";
    case CertificateKind::SumCDiverging: return "sum_c_diverging";
    case CertificateKind::PowerBound: return "power_bound";
    case CertificateKind::None: return "none";
  }
  return "none";
}

namespace {

constexpr int kRatioWindow = 32;          // tail-envelope window length
constexpr double kRatioMargin = 5e-5;     // rho must stay below 1 - margin
constexpr double kDeficiencyCap = 1e12;   // partial-sum overflow cutoff

/// Largest m <= m_max whose omega_1..omega_m evaluate to positive finite
/// doubles. Overflow (value = inf) truncates; genuine non-positive values
/// propagate.
int usable_terms(const JacobiSequence& seq, int m_max) {
  m_max = std::min(m_max, seq.available_terms());
  try {
    seq.prefix(m_max);
    return m_max;
  } catch (const NonPositiveOmega& e) {
    if (std::isfinite(e.value)) throw;
    if (e.index <= 4) throw ComputeError("sequence overflows double before 4 terms");
    return e.index - 1;
  }
}

/// Least-squares slope of log y against log n over [first, last].
double loglog_slope(std::span<const double> y, int first, int last) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int n = first; n <= last; ++n) {
    if (!(y[n] > 0.0)) continue;
    const double lx = std::log(static_cast<double>(n)), ly = std::log(y[n]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt < 2) return 0.0;
  const double denom = cnt * sxx - sx * sx;
  return denom != 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
}

}  // namespace

double zeta_upper(double s) {
  if (!(s > 1.0)) throw InvalidParameter("zeta requires s > 1");
  const int cutoff = 100000;
  double sum = 0.0;
  for (int n = cutoff; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
  // Euler-Maclaurin tail: integral + half endpoint + first correction
  const double nc = static_cast<double>(cutoff);
  sum += std::pow(nc, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(nc, -s) +
         s / 12.0 * std::pow(nc, -s - 1.0);
  return sum;
}

ConditionStarResult check_condition_star(const JacobiSequence& seq, int n_scan) {
  if (n_scan < 2) throw InvalidParameter("n_scan must be >= 2");
  ConditionStarResult r;

  switch (seq.family()) {
    case Family::QGaussianPos: {
      const double q = seq.q();
      if (q > 1.0) {
        // omega_n/omega_{n+1} = (q^n - 1)/(q^{n+1} - 1) < 1/q for every n
        r.holds = true;
        r.alpha = 1.0 / q;
        r.n0 = 1;
        r.certified = true;
      } else {
        // -1 < q <= 1: the ratio sup is 1, no alpha < 1 exists
        r.holds = false;
        r.alpha = 1.0;
        r.n0 = 0;
        r.certified = true;
      }
      return r;
    }
    case Family::QGaussianNeg: {
      // omega_n = (r^n - (-1)^n)/(r + 1), r = -q > 1. Even-index ratios are
      // below 1/r; odd-index ratios (r^n + 1)/(r^{n+1} - 1) decrease and drop
      // below 1 once r^n (r - 1) > 2.
      const double rr = -seq.q();
      int n0 = std::max(1, static_cast<int>(std::ceil(std::log(2.0 / (rr - 1.0)) / std::log(rr))));
      while (std::pow(rr, n0) * (rr - 1.0) <= 2.0) ++n0;  // rounding guard
      const int n_odd = (n0 % 2 == 1) ? n0 : n0 + 1;
      r.alpha = (std::pow(rr, n_odd) + 1.0) / (std::pow(rr, n_odd + 1) - 1.0);
      r.alpha = std::max(r.alpha, 1.0 / rr);
      r.n0 = n0;
      r.holds = r.alpha < 1.0;
      r.certified = true;
      return r;
    }
    case Family::PowerInt:
    case Family::Constant: {
      // the ratio (n/(n+1))^p resp. 1 has supremum 1: condition (*) fails
      r.holds = false;
      r.alpha = 1.0;
      r.n0 = 0;
      r.certified = true;
      return r;
    }
    case Family::Explicit:
    case Family::Custom:
      break;
  }

  // finite-window heuristic
  const int scan = std::min(n_scan, seq.available_terms() - 1);
  if (scan < 1) throw InsufficientTerms("condition (*) scan needs at least 2 terms");
  const auto omega = seq.prefix(scan + 1);
  std::vector<double> ratio(scan);
  for (int n = 1; n <= scan; ++n) ratio[n - 1] = omega[n - 1] / omega[n];
  // suffix maxima; smallest n0 whose suffix stays below 1
  double best_alpha = std::numeric_limits<double>::infinity();
  int best_n0 = scan;
  double suffix = 0.0;
  std::vector<double> suffix_max(scan + 1, 0.0);
  for (int n = scan; n >= 1; --n) {
    suffix = std::max(suffix, ratio[n - 1]);
    suffix_max[n] = suffix;
  }
  for (int n0 = 1; n0 <= scan; ++n0) {
    if (suffix_max[n0] < best_alpha) {
      best_alpha = suffix_max[n0];
      best_n0 = n0;
    }
    if (suffix_max[n0] < 1.0) {
      best_alpha = suffix_max[n0];
      best_n0 = n0;
      break;
    }
  }
  r.alpha = best_alpha;
  r.n0 = best_n0;
  r.holds = best_alpha < 1.0;
  r.certified = false;
  return r;
}

CarlemanResult check_carleman(const JacobiSequence& seq, int n_max, double divergence_threshold) {
  if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
  CarlemanResult r;

  const int terms = usable_terms(seq, n_max);
  const auto omega = seq.prefix(terms);
  double partial = 0.0;
  for (int n = 0; n < terms; ++n) partial += 1.0 / std::sqrt(omega[n]);
  r.partial_sum = partial;

  switch (seq.family()) {
    case Family::PowerInt:
      r.diverges = seq.p() <= 2.0;  // sum n^{-p/2} is the p-series
      r.certified = true;
      return r;
    case Family::Constant:
      r.diverges = true;
      r.certified = true;
      return r;
    case Family::QGaussianPos:
      if (seq.q() <= 1.0) {
        r.diverges = true;  // [n]_q <= n, so the sum dominates sum 1/sqrt(n)
      } else {
        r.diverges = false;  // 1/sqrt([n]_q) decays geometrically
      }
      r.certified = true;
      return r;
    case Family::QGaussianNeg:
      r.diverges = false;  // geometric growth
      r.certified = true;
      return r;
    case Family::Explicit:
    case Family::Custom:
      break;
  }

  // heuristic: fitted decay exponent of 1/sqrt(omega_n) over the trailing half
  std::vector<double> inv_sqrt(terms + 1, 0.0);
  for (int n = 1; n <= terms; ++n) inv_sqrt[n] = 1.0 / std::sqrt(omega[n - 1]);
  const int first = std::max(2, terms / 2);
  r.fitted_rate = -loglog_slope(inv_sqrt, first, terms);
  r.diverges = (partial >= divergence_threshold) || (r.fitted_rate <= 1.0);
  r.certified = false;
  return r;
}

DeficiencyEstimate deficiency_norm(const JacobiSequence& seq, int m_max) {
  if (m_max < 1) throw InvalidParameter("m_max must be >= 1");
  const int terms = usable_terms(seq, m_max);
  const auto t = run_trace(seq, terms, Mode::Float);

  DeficiencyEstimate est;
  est.terms_used = terms;
  // (^n Z)^2 via the ratio C_n / ((1 - C_n) C_{n-1}); start (^1 Z)^2 = 1/omega_1
  std::vector<double> z_sq(terms + 1, 0.0);
  double sum = 1.0;  // (^0 Z)^2 = 1
  double z = t.c[1] / (1.0 - t.c[1]);
  z_sq[1] = z;
  sum += z;
  for (int n = 2; n <= terms && sum <= kDeficiencyCap; ++n) {
    z *= t.c[n] / ((1.0 - t.c[n]) * t.c[n - 1]);
    z_sq[n] = z;
    sum += z;
  }
  est.norm_sq_partial = sum;
  if (sum > kDeficiencyCap || !std::isfinite(sum)) {
    est.overflowed = true;
    est.summable = false;
    return est;
  }

  // two-step ratios are parity-respecting: one-step ratios of oscillating
  // geometric families wobble around their mean even when the sum converges
  double rho = 0.0;
  const int first = std::max(3, terms - kRatioWindow + 1);
  for (int n = first; n <= terms; ++n)
    if (z_sq[n - 2] > 0.0) rho = std::max(rho, z_sq[n] / z_sq[n - 2]);
  est.window_ratio = rho;
  est.summable = rho > 0.0 && rho < 1.0 - kRatioMargin;
  return est;
}

ScReport decide_sc(const JacobiSequence& seq, int m_max, double tol) {
  if (m_max < 4) throw InvalidParameter("m_max must be >= 4");
  if (!(tol > 0.0 && tol < 1.0)) throw InvalidParameter("tol must lie in (0, 1)");

  const int terms = usable_terms(seq, m_max);
  const auto trace = run_trace(seq, terms, Mode::Float);

  ScReport report;
  report.terms_used = terms;
  report.sum_c_partial = trace.sum_c[terms];
  // pass an odd cap so gap_estimate never evaluates past the overflow horizon
  report.gap = gap_estimate(seq, (terms % 2 == 1) ? terms : terms - 1, tol);
  const auto deficiency = deficiency_norm(seq, terms);
  report.deficiency_norm_sq_partial = deficiency.norm_sq_partial;
  report.deficiency_summable = deficiency.summable;

  // (1) certified condition (*)
  const auto star = check_condition_star(seq, std::max(2, terms - 1));
  if (star.certified && star.holds) {
    report.verdict = Verdict::Indeterminate;
    report.certificate = {CertificateKind::ConditionStar, star.alpha, star.n0, 0.0, 0.0, true};
    return report;
  }

  // (2) certified Carleman divergence
  const auto carleman = check_carleman(seq, terms);
  if (carleman.certified && carleman.diverges) {
    report.verdict = Verdict::Determinate;
    report.certificate = {CertificateKind::Carleman, 0.0, 0, 0.0, carleman.fitted_rate, true};
    return report;
  }

  // (3) the power family with p > 2: sum C < 2^p zeta(p/2)^2
  if (seq.family() == Family::PowerInt && seq.p() > 2.0) {
    const double z = zeta_upper(seq.p() / 2.0);
    report.verdict = Verdict::Indeterminate;
    report.certificate = {CertificateKind::PowerBound, 0.0, 0, std::pow(2.0, seq.p()) * z * z,
                          0.0, true};
    return report;
  }

  // (4) numeric tail envelope on C_n (parity-respecting two-step ratios)
  if (terms >= kRatioWindow / 2 + 4) {
    double rho = 0.0;
    const int first = std::max(3, terms - kRatioWindow + 1);
    for (int n = first; n <= terms; ++n) rho = std::max(rho, trace.c[n] / trace.c[n - 2]);
    if (rho < 1.0) {
      const double tail = (trace.c[terms] + trace.c[terms - 1]) * rho / (1.0 - rho);
      if (tail < tol) {
        report.verdict = Verdict::Indeterminate;
        report.certificate = {CertificateKind::SumCConverged, 0.0, 0,
                              report.sum_c_partial + tail, rho, false};
        return report;
      }
    }
    // divergence-shaped evidence: fitted decay exponent of C_n at most ~1
    const double gamma = -loglog_slope(trace.c, std::max(2, terms / 2), terms);
    if (gamma <= 1.05) {
      report.verdict = Verdict::Inconclusive;
      report.certificate = {CertificateKind::SumCDiverging, 0.0, 0, 0.0, gamma, false};
      return report;
    }
  }

  report.verdict = Verdict::Inconclusive;
  report.certificate = {};
  return report;
}

std::string report_to_json_text(const ScReport& report) {
  nlohmann::json cert;
  cert["kind"] = to_string(report.certificate.kind);
  cert["analytic"] = report.certificate.analytic;
  switch (report.certificate.kind) {
    case CertificateKind::ConditionStar:
      cert["alpha"] = report.certificate.alpha;
      cert["n0"] = report.certificate.n0;
      break;
    case CertificateKind::PowerBound:
    case CertificateKind::SumCConverged:
      cert["sum_c_bound"] = report.certificate.bound;
      break;
    case CertificateKind::SumCDiverging:
    case CertificateKind::Carleman:
      cert["rate"] = report.certificate.rate;
      break;
    case CertificateKind::None:
      break;
  }
  nlohmann::json j;
  j["schema"] = 1;
  j["verdict"] = to_string(report.verdict);
  j["certificate"] = cert;
  j["sum_c_partial"] = report.sum_c_partial;
  j["gap_lower"] = report.gap.lower;
  j["gap_upper"] = report.gap.upper;
  j["deficiency_norm_sq"] = report.deficiency_norm_sq_partial;
  j["terms_used"] = report.terms_used;
  return j.dump();
}

}  // namespace momentdet
