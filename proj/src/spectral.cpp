#include "momentdet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>

#include "json.hpp"
#include "momentdet/recurrence.hpp"

namespace momentdet {

namespace {

int env_thread_cap() {
  const char* v = std::getenv("MOMENTDET_THREADS");
  if (!v) return static_cast<int>(std::thread::hardware_concurrency());
  const int n = std::atoi(v);
  return n > 0 ? n : 1;
}

/// Number of eigenvalues of the scaled matrix strictly below x, by the
/// Sturm/LDL^T sign count d_1 = -x, d_{k+1} = -x - w_k / d_k with w_k the
/// squared scaled off-diagonals.
int sturm_count(std::span<const double> w_sq, double x) {
  constexpr double pivmin = 1e-290;
  int count = 0;
  double d = -x;
  if (std::abs(d) < pivmin) d = -pivmin;
  if (d < 0) ++count;
  for (const double w : w_sq) {
    d = -x - w / d;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0) ++count;
  }
  return count;
}

/// One Newton step on f(x) = x p_m(x) - b_m p_{m-1}(x) (proportional to the
/// characteristic polynomial), evaluated with joint rescaling so the ratio
/// f/f' survives value overflow. Bisection already brackets the root to a
/// few ulp; the polish rounds clean eigenvalues to the nearest double.
double newton_polish(std::span<const double> b, double x, double lo, double hi) {
  const size_t m = b.size();
  double p = 1.0, dp = 0.0;           // p_0, p_0'
  double pn = x / b[0], dpn = 1.0 / b[0];
  for (size_t j = 1; j < m; ++j) {
    const double p2 = (x * pn - b[j - 1] * p) / b[j];
    const double dp2 = (pn + x * dpn - b[j - 1] * dp) / b[j];
    p = pn;
    dp = dpn;
    pn = p2;
    dpn = dp2;
    const double mag = std::max(std::abs(pn), std::abs(p));
    if (mag > 1e100) {
      const double inv = 1.0 / mag;
      p *= inv;
      dp *= inv;
      pn *= inv;
      dpn *= inv;
    }
  }
  const double f = x * pn - b[m - 1] * p;
  const double df = pn + x * dpn - b[m - 1] * dp;
  if (df == 0.0 || !std::isfinite(f) || !std::isfinite(df)) return x;
  const double polished = x - f / df;
  return (polished >= lo && polished <= hi) ? polished : x;
}

/// Squared first component of the (unnormalized) eigenvector at scaled
/// eigenvalue x: 1 / sum_j p_j(x)^2 with p_j the orthonormal polynomials of
/// the scaled matrix. Once the sum passes 1e260 the weight is below 1e-260
/// and later terms cannot change any double-precision result downstream.
double first_component_sq(std::span<const double> b, double x) {
  double pm1 = 1.0;
  double ssum = 1.0;
  if (b.empty()) return 1.0;
  double p = x / b[0];
  ssum += p * p;
  for (size_t j = 1; j < b.size(); ++j) {
    const double pn = (x * p - b[j - 1] * pm1) / b[j];
    pm1 = p;
    p = pn;
    ssum += pn * pn;
    if (ssum > 1e260) break;
  }
  return 1.0 / ssum;
}

}  // namespace

TridiagonalTruncation make_truncation(std::span<const double> omega) {
  TridiagonalTruncation t;
  t.m = static_cast<int>(omega.size());
  t.offdiag.reserve(omega.size());
  for (size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] > 0.0) || !std::isfinite(omega[i]))
      throw NonPositiveOmega(static_cast<int>(i) + 1, omega[i]);
    t.offdiag.push_back(std::sqrt(omega[i]));
  }
  return t;
}

TridiagonalTruncation make_truncation(const JacobiSequence& seq, int m) {
  if (m < 0) throw InvalidParameter("truncation level must be >= 0");
  if (m == 0) return TridiagonalTruncation{0, {}};
  const auto omega = seq.prefix(m);
  return make_truncation(std::span<const double>(omega));
}

EigenDecomposition eigendecompose(const TridiagonalTruncation& trunc) {
  const int n = trunc.m + 1;
  if (static_cast<int>(trunc.offdiag.size()) != trunc.m)
    throw InvalidParameter("offdiag size must equal m");
  if (n == 1) return {{0.0}, {1.0}};

  double scale = 0.0;
  for (const double b : trunc.offdiag) {
    if (!(b > 0.0) || !std::isfinite(b)) throw InvalidParameter("offdiag entries must be positive");
    scale = std::max(scale, b);
  }

  std::vector<double> b(trunc.m), w_sq(trunc.m);
  for (int i = 0; i < trunc.m; ++i) {
    b[i] = trunc.offdiag[i] / scale;
    w_sq[i] = b[i] * b[i];
  }

  double gersh = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = (i > 0 ? b[i - 1] : 0.0) + (i < trunc.m ? b[i] : 0.0);
    gersh = std::max(gersh, r);
  }
  const double hi0 = gersh + 1.0;

  // zero diagonal: spectrum is +/- symmetric, floor(n/2) eigenvalues on each
  // side and a structural zero when n is odd
  const int n_pos = n / 2;
  const bool has_zero = (n % 2 != 0);

  std::vector<double> pos(n_pos), pos_w(n_pos);
  for (int j = 0; j < n_pos; ++j) {
    const int idx = n / 2 + (has_zero ? 1 : 0) + j;  // 0-based ascending index
    double lo = 0.0, hi = hi0;
    bool converged = false;
    for (int it = 0; it < 4000; ++it) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) {
        converged = true;  // interval is one ulp wide
        break;
      }
      if (sturm_count(w_sq, mid) <= idx) lo = mid; else hi = mid;
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
        converged = true;
        break;
      }
    }
    if (!converged) throw ConvergenceFailure("eigenvalue bisection did not converge at index " +
                                             std::to_string(idx));
    const double mid = lo + 0.5 * (hi - lo);
    // widen the polish window by a few ulp: the root may sit just outside
    // the final one-ulp bracket
    const double pad = 8.0 * std::numeric_limits<double>::epsilon() * hi;
    pos[j] = newton_polish(b, mid, lo - pad, hi + pad);
  }
  for (int j = 0; j < n_pos; ++j) pos_w[j] = first_component_sq(b, pos[j]);

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.first_components_sq.resize(n);
  double wsum = 0.0;
  for (int j = 0; j < n_pos; ++j) {
    // mirrored pair: p_j(-x)^2 = p_j(x)^2, weights identical by construction
    out.eigenvalues[n_pos + (has_zero ? 1 : 0) + j] = pos[j] * scale;
    out.eigenvalues[n_pos - 1 - j] = -pos[j] * scale;
    out.first_components_sq[n_pos + (has_zero ? 1 : 0) + j] = pos_w[j];
    out.first_components_sq[n_pos - 1 - j] = pos_w[j];
    wsum += 2.0 * pos_w[j];
  }
  if (has_zero) {
    const double w0 = first_component_sq(b, 0.0);
    out.eigenvalues[n_pos] = 0.0;
    out.first_components_sq[n_pos] = w0;
    wsum += w0;
  }
  if (!std::isfinite(wsum) || std::abs(wsum - 1.0) > 1e-6)
    throw ConvergenceFailure("eigenvector first components lost accuracy (sum " +
                             std::to_string(wsum) + "); rescale the sequence");
  for (double& w : out.first_components_sq) w /= wsum;
  return out;
}

DiscreteMeasure quadrature_measure(const TridiagonalTruncation& trunc) {
  const auto eig = eigendecompose(trunc);
  DiscreteMeasure mu;
  mu.level = trunc.m;
  mu.atoms = eig.eigenvalues;
  mu.weights = eig.first_components_sq;
  return mu;
}

std::vector<double> measure_even_moments(const DiscreteMeasure& mu, int n_moments) {
  std::vector<double> out(n_moments + 1, 0.0);
  for (size_t k = 0; k < mu.atoms.size(); ++k) {
    const double l2 = mu.atoms[k] * mu.atoms[k];
    const double w = mu.weights[k];
    if (w <= 0.0) continue;
    const double logl2 = l2 > 0.0 ? std::log(l2) : 0.0;
    if (l2 > 1.0 && std::log(w) + n_moments * logl2 > 600.0) {
      // log-space once w * l2^j could leave the double range
      for (int j = 0; j <= n_moments; ++j) {
        const double lt = std::log(w) + j * logl2;
        if (lt > 700.0) throw ComputeError("measure moment overflows double");
        out[j] += std::exp(lt);
      }
    } else {
      double p = 1.0;
      for (int j = 0; j <= n_moments; ++j) {
        out[j] += w * p;
        p *= l2;
      }
    }
  }
  return out;
}

double measure_ig(const DiscreteMeasure& mu) {
  double s = 0.0;
  for (size_t k = 0; k < mu.atoms.size(); ++k)
    s += mu.weights[k] / (1.0 + mu.atoms[k] * mu.atoms[k]);
  return s;
}

namespace detail {

std::vector<std::complex<double>> solve_resolvent_pivoted(std::span<const double> offdiag, int k) {
  using C = std::complex<double>;
  const int n = static_cast<int>(offdiag.size()) + 1;
  const C I(0.0, 1.0);
  std::vector<C> dl(offdiag.begin(), offdiag.end()), du(offdiag.begin(), offdiag.end());
  for (auto& v : dl) v = -v;
  for (auto& v : du) v = -v;
  std::vector<C> d(n, I), du2(std::max(0, n - 2), C(0.0)), rhs(n, C(0.0));
  rhs[k] = 1.0;

  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      const C mult = dl[i] / d[i];
      d[i + 1] -= mult * du[i];
      rhs[i + 1] -= mult * rhs[i];
      if (i + 2 < n) du2[i] = 0.0;
    } else {
      const C mult = d[i] / dl[i];
      d[i] = dl[i];
      const C temp = d[i + 1];
      d[i + 1] = du[i] - mult * temp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -mult * du[i + 1];
      }
      du[i] = temp;
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= mult * rhs[i];
    }
  }
  // back substitution
  std::vector<C> y(n);
  y[n - 1] = rhs[n - 1] / d[n - 1];
  if (n >= 2) y[n - 2] = (rhs[n - 2] - du[n - 2] * y[n - 1]) / d[n - 2];
  for (int i = n - 3; i >= 0; --i)
    y[i] = (rhs[i] - du[i] * y[i + 1] - du2[i] * y[i + 2]) / d[i];
  return y;
}

}  // namespace detail

ResolventColumn resolvent_column(const TridiagonalTruncation& trunc, int k) {
  using C = std::complex<double>;
  const int n = trunc.m + 1;
  if (k < 0 || k > trunc.m) throw IndexError("column index must satisfy 0 <= k <= m");
  const C I(0.0, 1.0);
  const auto& b = trunc.offdiag;

  // Thomas elimination; pivots p_j = i - b_j^2 / p_{j-1} have Im >= 1
  std::vector<C> piv(n), rhs(n, C(0.0));
  rhs[k] = 1.0;
  piv[0] = I;
  bool fall_back = false;
  for (int j = 1; j < n; ++j) {
    const C mult = -b[j - 1] / piv[j - 1];
    piv[j] = I + mult * b[j - 1];
    rhs[j] -= mult * rhs[j - 1];
    const double row_norm = 1.0 + b[j - 1] + (j < trunc.m ? b[j] : 0.0);
    if (std::abs(piv[j]) < 1e-13 * row_norm) {
      fall_back = true;
      break;
    }
  }
  if (fall_back) {
    ResolventColumn col;
    col.k = k;
    col.entries = detail::solve_resolvent_pivoted(b, k);
    return col;
  }

  ResolventColumn col;
  col.k = k;
  col.entries.resize(n);
  col.entries[n - 1] = rhs[n - 1] / piv[n - 1];
  for (int j = n - 2; j >= 0; --j)
    col.entries[j] = (rhs[j] + b[j] * col.entries[j + 1]) / piv[j];
  return col;
}

ColumnConvergenceTrace column_convergence_trace(const JacobiSequence& seq, int k,
                                                std::span<const int> m_list) {
  if (m_list.empty()) throw InvalidParameter("m_list must be non-empty");
  const int parity = m_list[0] % 2;
  for (const int m : m_list) {
    if (m % 2 != parity) throw ParityMismatch("m_list mixes even and odd truncation levels");
    if (k > m) throw IndexError("column index exceeds smallest truncation level");
  }
  ColumnConvergenceTrace out;
  out.k = k;
  for (const int m : m_list) {
    out.levels.push_back(m);
    out.columns.push_back(resolvent_column(make_truncation(seq, m), k).entries);
  }
  for (size_t i = 1; i < out.columns.size(); ++i) {
    const auto& a = out.columns[i - 1];
    const auto& b = out.columns[i];
    double s = 0.0;
    for (size_t l = 0; l < std::min(a.size(), b.size()); ++l) s += std::norm(a[l] - b[l]);
    out.l2_diffs.push_back(std::sqrt(s));
  }
  return out;
}

std::vector<double> yhat_bound(const JacobiSequence& seq, int m) {
  const auto t = run_trace(seq, m, Mode::Float);
  std::vector<double> yhat(m + 1);
  yhat[0] = 1.0;
  if (m >= 1) yhat[1] = std::sqrt(t.omega[1]);
  double v = m >= 1 ? std::sqrt(t.omega[1]) * t.c[1] : 0.0;
  for (int l = 2; l <= m; ++l) {
    v *= std::sqrt(t.omega[l]) * t.c[l];
    yhat[l] = v;
  }
  return yhat;
}

ExtremalMeasurePair extremal_measure_pair(const JacobiSequence& seq, int m_max, double tol) {
  if (m_max < 2) throw InvalidParameter("m_max must be >= 2");
  int k = m_max / 2;
  if (2 * k + 1 > seq.available_terms()) k = (seq.available_terms() - 1) / 2;
  if (k < 1) throw InsufficientTerms("extremal_measure_pair needs at least 3 terms");
  const int level_even = 2 * k, level_odd = 2 * k + 1;

  const auto bracket = gap_estimate(seq, level_odd, tol);

  ExtremalMeasurePair pair;
  pair.not_indeterminate_warning = bracket.upper < tol;
  if (env_thread_cap() >= 2) {
    auto fut = std::async(std::launch::async, [&] {
      return quadrature_measure(make_truncation(seq, level_even));
    });
    pair.mu_odd = quadrature_measure(make_truncation(seq, level_odd));
    pair.mu_even = fut.get();
  } else {
    pair.mu_even = quadrature_measure(make_truncation(seq, level_even));
    pair.mu_odd = quadrature_measure(make_truncation(seq, level_odd));
  }
  pair.stieltjes_gap = std::abs(measure_ig(pair.mu_even) - measure_ig(pair.mu_odd));
  return pair;
}

std::string measure_to_json_text(const DiscreteMeasure& mu) {
  nlohmann::json j;
  j["schema"] = 1;
  j["level"] = mu.level;
  j["parity"] = mu.odd_level() ? "odd" : "even";
  j["atoms"] = mu.atoms;
  j["weights"] = mu.weights;
  return j.dump();
}

}  // namespace momentdet
