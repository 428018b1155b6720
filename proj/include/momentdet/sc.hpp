#pragma once

#include <string>

#include "momentdet/jacobi.hpp"
#include "momentdet/recurrence.hpp"

namespace momentdet {

enum class Verdict { Indeterminate, Determinate, Inconclusive };

std::string to_string(Verdict v);

enum class CertificateKind {
  ConditionStar,   ///< eventual geometric growth omega_n < alpha omega_{n+1}
  Carleman,        ///< sum 1/sqrt(omega_n) diverges
  SumCConverged,   ///< numeric geometric envelope on the C tail
  SumCDiverging,   ///< fitted divergence of the partial sums (evidence only)
  PowerBound,      ///< omega_n = n^p, p > 2: sum C < 2^p zeta(p/2)^2
  None
};

std::string to_string(CertificateKind k);

struct Certificate {
  CertificateKind kind = CertificateKind::None;
  double alpha = 0.0;     ///< ConditionStar ratio bound
  int n0 = 0;             ///< ConditionStar onset index
  double bound = 0.0;     ///< upper bound on sum C (SumCConverged / PowerBound)
  double rate = 0.0;      ///< fitted tail rate (SumCDiverging / Carleman heuristics)
  bool analytic = false;  ///< certified from the family's closed form
};

struct ScReport {
  Verdict verdict = Verdict::Inconclusive;
  Certificate certificate;
  double sum_c_partial = 0.0;
  GapBracket gap;
  double deficiency_norm_sq_partial = 0.0;
  bool deficiency_summable = false;
  int terms_used = 0;
};

struct ConditionStarResult {
  bool holds = false;
  double alpha = 0.0;
  int n0 = 0;
  bool certified = false;  ///< analytic (closed-form family) vs finite-window scan
};

/// Search for n0 and alpha = sup_{n >= n0} omega_n / omega_{n+1} < 1.
/// Closed-form families are resolved analytically (the scan cannot certify a
/// limit); Explicit/Custom inputs get a finite-window heuristic.
ConditionStarResult check_condition_star(const JacobiSequence& seq, int n_scan);

struct CarlemanResult {
  bool diverges = false;
  double partial_sum = 0.0;
  bool certified = false;
  double fitted_rate = 0.0;  ///< exponent beta in 1/sqrt(omega_n) ~ c n^-beta
};

CarlemanResult check_carleman(const JacobiSequence& seq, int n_max,
                              double divergence_threshold = 1e3);

/// Decision cascade: certified condition (*) => Indeterminate; certified
/// Carleman divergence => Determinate; the power family with p > 2 =>
/// Indeterminate with the 2^p zeta(p/2)^2 bound; otherwise a numeric
/// geometric envelope on the C tail, or Inconclusive.
ScReport decide_sc(const JacobiSequence& seq, int m_max, double tol = 1e-10);

struct DeficiencyEstimate {
  double norm_sq_partial = 0.0;  ///< 1 + sum_n C_n / prod_{l<=n}(1 - C_l)
  bool summable = false;
  bool overflowed = false;  ///< partial sums passed 1e12
  double window_ratio = 0.0;
  int terms_used = 0;
};

/// Partial l2 norm of the deficiency vector Z with (^n Z)^2 =
/// C_n / prod_{l<=n}(1 - C_l); square-summable exactly when (SC) holds.
DeficiencyEstimate deficiency_norm(const JacobiSequence& seq, int m_max);

/// Riemann zeta for s > 1 (partial sum plus Euler-Maclaurin tail).
double zeta_upper(double s);

/// {"schema":1, "verdict": ..., "certificate": {...}, "sum_c_partial": x,
///  "gap_lower": x, "gap_upper": x, "deficiency_norm_sq": x, "terms_used": n}
std::string report_to_json_text(const ScReport& report);

}  // namespace momentdet
