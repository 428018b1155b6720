#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "momentdet/jacobi.hpp"

namespace momentdet {

enum class Mode { Float, Exact };

Mode mode_from_string(const std::string& s);
std::string to_string(Mode m);

/// Per-index record of the continued-fraction recurrences. Index m runs
/// 0..m_max; slot 0 holds the conventions C_0 = 1, iG_0 = 1.
///
/// Float mode keeps every tracked quantity inside [0, 1]: C_m by the forward
/// recurrence C_{m+1} = 1/(1 + omega_{m+1} C_m), and iG_m accumulated by the
/// telescoping iG_m = iG_{m-1} + (-1)^m prod_m, never as a ratio of the
/// super-exponentially growing convergent numerators/denominators.
struct RecurrenceTrace {
  std::vector<double> omega;     ///< omega[m] = omega_m, m >= 1 (omega[0] unused)
  std::vector<double> c;         ///< C_m in (0,1] with C_0 = 1
  std::vector<double> ig;        ///< iG_m = i*G_m(i), real in (0,1]
  std::vector<double> delta;     ///< |iG_m - iG_{m-1}| = prod_m for m >= 1
  std::vector<double> sum_c;     ///< sum_{n<=m} C_n
  std::vector<double> prod;      ///< prod_{n<=m} (1 - C_n); 0 once below double range
  std::vector<double> log_prod;  ///< sum_{n<=m} log(1 - C_n), finite even when prod underflows
  Mode mode = Mode::Float;

  // exact-mode extras (empty in float mode): the convergent recurrences
  // A_m = A_{m-1} + omega_m A_{m-2}, B_m = B_{m-1} + omega_m B_{m-2}
  std::vector<Rational> a_exact;   ///< A_0..A_{m_max}
  std::vector<Rational> b_exact;   ///< B_0..B_{m_max}
  std::vector<Rational> c_exact;   ///< C_m = B_{m-1}/B_m
  std::vector<Rational> ig_exact;  ///< iG_m = A_m/B_m

  int m_max() const { return static_cast<int>(c.size()) - 1; }
};

RecurrenceTrace run_trace(const JacobiSequence& seq, int m_max, Mode mode = Mode::Float);
RecurrenceTrace run_trace(std::span<const double> omega, Mode mode = Mode::Float);

/// G_m(i) = -i * iG_m: the Stieltjes transform of the level-m truncation at
/// the spectral point i, purely imaginary with Im in [-1, 0).
std::complex<double> stieltjes_at_i(const JacobiSequence& seq, int m);
/// The real quantity iG_m(i).
double ig_at_i(const JacobiSequence& seq, int m);

/// Bracketing values for the even/odd Stieltjes gap |iG_even - iG_odd|.
/// prod_m decreases to the gap, so the values at the last two indices
/// bracket every later partial product; the trace is extended so that it
/// ends on an odd index, making upper the even-index product and lower the
/// odd-index one.
struct GapBracket {
  double lower = 0.0;      ///< prod at the last (odd) index
  double upper = 0.0;      ///< prod at the last even index
  double log_lower = 0.0;  ///< log of the same, usable below double underflow
  double log_upper = 0.0;
  bool converged = false;  ///< width < tol
  int even_index = 0;
  int odd_index = 0;
};

GapBracket gap_estimate(const JacobiSequence& seq, int m_max, double tol);

/// Tail of the continued fraction: D^(m)_n by backward recursion from
/// D^(m)_{m-1} = omega_m via D^(m)_n = omega_{n+1} / (1 + D^(m)_{n+1}).
double d_tail(const JacobiSequence& seq, int n, int m);
double d_tail(std::span<const double> omega, int n, int m);

/// CSV emission, columns: m, omega_m, C_m, iG_m, delta_m, sumC_m, log_prod_m.
void write_trace_csv(std::ostream& os, const RecurrenceTrace& trace);

}  // namespace momentdet
