#include "momentdet/recurrence.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace momentdet {

Mode mode_from_string(const std::string& s) {
  if (s == "float") return Mode::Float;
  if (s == "exact") return Mode::Exact;
  throw InvalidParameter("mode must be 'float' or 'exact', got '" + s + "'");
}

std::string to_string(Mode m) { return m == Mode::Float ? "float" : "exact"; }

namespace {

RecurrenceTrace trace_float(std::span<const double> omega) {
  const int m_max = static_cast<int>(omega.size());
  RecurrenceTrace t;
  t.mode = Mode::Float;
  t.omega.assign(m_max + 1, 0.0);
  t.c.assign(m_max + 1, 0.0);
  t.ig.assign(m_max + 1, 0.0);
  t.delta.assign(m_max + 1, 0.0);
  t.sum_c.assign(m_max + 1, 0.0);
  t.prod.assign(m_max + 1, 0.0);
  t.log_prod.assign(m_max + 1, 0.0);

  t.c[0] = 1.0;
  t.ig[0] = 1.0;
  t.prod[0] = 1.0;

  double sum = 0.0, comp = 0.0;  // Kahan-compensated sum of C_n
  for (int m = 1; m <= m_max; ++m) {
    const double w = omega[m - 1];
    if (!(w > 0.0) || !std::isfinite(w)) throw NonPositiveOmega(m, w);
    t.omega[m] = w;
    const double c = 1.0 / (1.0 + w * t.c[m - 1]);
    if (!(c > 0.0 && c < 1.0)) throw ComputeError("C_m left (0,1) at m=" + std::to_string(m));
    t.c[m] = c;
    t.prod[m] = t.prod[m - 1] * (1.0 - c);
    t.log_prod[m] = t.log_prod[m - 1] + std::log1p(-c);
    t.delta[m] = t.prod[m];
    t.ig[m] = (m % 2 == 0) ? t.ig[m - 1] + t.prod[m] : t.ig[m - 1] - t.prod[m];

    const double y = c - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    t.sum_c[m] = sum;
  }
  return t;
}

RecurrenceTrace trace_exact(std::span<const Rational> omega) {
  const int m_max = static_cast<int>(omega.size());
  RecurrenceTrace t;
  t.mode = Mode::Exact;
  t.omega.assign(m_max + 1, 0.0);
  t.c.assign(m_max + 1, 0.0);
  t.ig.assign(m_max + 1, 0.0);
  t.delta.assign(m_max + 1, 0.0);
  t.sum_c.assign(m_max + 1, 0.0);
  t.prod.assign(m_max + 1, 0.0);
  t.log_prod.assign(m_max + 1, 0.0);
  t.a_exact.assign(m_max + 1, Rational(0));
  t.b_exact.assign(m_max + 1, Rational(0));
  t.c_exact.assign(m_max + 1, Rational(0));
  t.ig_exact.assign(m_max + 1, Rational(0));

  Rational a_prev2 = 0, a_prev = 1;  // A_{-1}, A_0
  Rational b_prev2 = 1, b_prev = 1;  // B_{-1}, B_0
  t.a_exact[0] = a_prev;
  t.b_exact[0] = b_prev;
  t.c_exact[0] = 1;
  t.ig_exact[0] = 1;
  t.c[0] = 1.0;
  t.ig[0] = 1.0;
  t.prod[0] = 1.0;

  Rational c = 1, prod = 1, sum = 0;
  for (int m = 1; m <= m_max; ++m) {
    const Rational& w = omega[m - 1];
    if (w <= 0) throw NonPositiveOmega(m, to_double(w));
    t.omega[m] = to_double(w);

    const Rational a = a_prev + w * a_prev2;
    const Rational b = b_prev + w * b_prev2;
    t.a_exact[m] = a;
    t.b_exact[m] = b;

    c = 1 / (1 + w * c);  // forward recurrence
    if (c != b_prev / b) throw ComputeError("C recurrence disagrees with B ratio at m=" + std::to_string(m));
    t.c_exact[m] = c;
    t.ig_exact[m] = a / b;

    prod *= (1 - c);
    sum += c;

    t.c[m] = to_double(c);
    t.ig[m] = to_double(t.ig_exact[m]);
    t.prod[m] = to_double(prod);
    t.delta[m] = t.prod[m];
    t.sum_c[m] = to_double(sum);
    t.log_prod[m] = t.log_prod[m - 1] + std::log1p(-t.c[m]);

    a_prev2 = a_prev;
    a_prev = a;
    b_prev2 = b_prev;
    b_prev = b;
  }
  return t;
}

}  // namespace

RecurrenceTrace run_trace(std::span<const double> omega, Mode mode) {
  if (omega.empty()) throw InvalidParameter("m_max must be >= 1");
  if (mode == Mode::Float) return trace_float(omega);
  std::vector<Rational> exact;
  exact.reserve(omega.size());
  for (double w : omega) exact.push_back(exact_rational(w));
  return trace_exact(exact);
}

RecurrenceTrace run_trace(const JacobiSequence& seq, int m_max, Mode mode) {
  if (m_max < 1) throw InvalidParameter("m_max must be >= 1");
  if (mode == Mode::Float) {
    const auto omega = seq.prefix(m_max);
    return trace_float(omega);
  }
  const auto omega = seq.exact_prefix(m_max);
  return trace_exact(omega);
}

std::complex<double> stieltjes_at_i(const JacobiSequence& seq, int m) {
  return {0.0, -ig_at_i(seq, m)};
}

double ig_at_i(const JacobiSequence& seq, int m) {
  if (m < 1) throw InvalidParameter("m must be >= 1");
  // iG_m = 1/(1 + D^(m)_0); one backward sweep, no trace allocation
  return 1.0 / (1.0 + d_tail(seq, 0, m));
}

GapBracket gap_estimate(const JacobiSequence& seq, int m_max, double tol) {
  if (m_max < 2) throw InvalidParameter("m_max must be >= 2");
  // end on an odd index so that the final (smaller) product sits at an odd
  // index and the preceding even index supplies the upper value
  int end = (m_max % 2 == 1) ? m_max : m_max + 1;
  if (end > seq.available_terms()) end = m_max - 1;
  if (end < 3) throw InsufficientTerms("gap_estimate needs at least 3 terms");

  const auto t = run_trace(seq, end, Mode::Float);
  GapBracket g;
  g.odd_index = end;
  g.even_index = end - 1;
  g.lower = t.prod[end];
  g.upper = t.prod[end - 1];
  g.log_lower = t.log_prod[end];
  g.log_upper = t.log_prod[end - 1];
  g.converged = (g.upper - g.lower) < tol;
  return g;
}

double d_tail(std::span<const double> omega, int n, int m) {
  if (m < 1 || m > static_cast<int>(omega.size())) throw IndexError("need 1 <= m <= #terms");
  if (n < 0 || n >= m) throw IndexError("d_tail requires 0 <= n < m");
  double d = omega[m - 1];  // D^(m)_{m-1} = omega_m
  for (int j = m - 2; j >= n; --j) d = omega[j] / (1.0 + d);
  return d;
}

double d_tail(const JacobiSequence& seq, int n, int m) {
  if (n < 0 || n >= m) throw IndexError("d_tail requires 0 <= n < m");
  const auto omega = seq.prefix(m);
  return d_tail(std::span<const double>(omega), n, m);
}

void write_trace_csv(std::ostream& os, const RecurrenceTrace& t) {
  os << "m,omega_m,C_m,iG_m,delta_m,sumC_m,log_prod_m\n";
  char line[256];
  for (int m = 1; m <= t.m_max(); ++m) {
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", m, t.omega[m],
                  t.c[m], t.ig[m], t.delta[m], t.sum_c[m], t.log_prod[m]);
    os << line;
  }
}

}  // namespace momentdet
