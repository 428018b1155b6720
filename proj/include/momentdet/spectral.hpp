#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "momentdet/jacobi.hpp"

namespace momentdet {

/// The (m+1) x (m+1) symmetric tridiagonal truncation: zero diagonal,
/// off-diagonal sqrt(omega_1)..sqrt(omega_m).
struct TridiagonalTruncation {
  int m = 0;
  std::vector<double> offdiag;
};

TridiagonalTruncation make_truncation(const JacobiSequence& seq, int m);
TridiagonalTruncation make_truncation(std::span<const double> omega);

/// Eigenvalues (ascending, exactly +/- paired by construction) and the
/// squared first components of the orthonormal eigenvectors, normalized to
/// sum to 1.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  std::vector<double> first_components_sq;
};

/// Bisection on Sturm counts, then Golub-Welsch-style first components from
/// the orthonormal-polynomial recurrence. The matrix is scaled by
/// 1/max(offdiag) before the counts so the bisection interval stays O(1);
/// the relative stopping rule keeps small eigenvalues accurate even when
/// the entries span many orders of magnitude.
EigenDecomposition eigendecompose(const TridiagonalTruncation& trunc);

/// Finitely supported probability measure: atoms strictly increasing, +/-
/// paired with equal weights (one zero atom when the dimension is odd).
struct DiscreteMeasure {
  int level = 0;  ///< truncation index m
  std::vector<double> atoms;
  std::vector<double> weights;
  bool odd_level() const { return level % 2 != 0; }
};

/// Spectral measure of the truncation in the state delta_0: atoms at the
/// eigenvalues, weights the squared first eigenvector components.
DiscreteMeasure quadrature_measure(const TridiagonalTruncation& trunc);

/// Even moments sum_k w_k lambda_k^{2j}, j = 0..n_moments.
std::vector<double> measure_even_moments(const DiscreteMeasure& mu, int n_moments);
/// Value of i * integral (i - x)^{-1} dmu = sum_k w_k / (1 + lambda_k^2).
double measure_ig(const DiscreteMeasure& mu);

/// Column k of the resolvent (i - X_m)^{-1}.
struct ResolventColumn {
  int k = 0;
  std::vector<std::complex<double>> entries;
};

/// Thomas elimination on the complex tridiagonal system (i - X_m) y = e_k.
/// The pivots provably satisfy Im(pivot) >= 1; a row-pivoted banded solve
/// stands by for pivots that fall under 1e-13 of the local row norm.
ResolventColumn resolvent_column(const TridiagonalTruncation& trunc, int k);

namespace detail {
/// Row-pivoted variant (fill-in one extra superdiagonal), used as the
/// fallback path and directly testable.
std::vector<std::complex<double>> solve_resolvent_pivoted(std::span<const double> offdiag, int k);
}  // namespace detail

/// Snapshots of resolvent column k over truncation levels of one parity,
/// with successive l2 differences taken over the shared coordinate range
/// (entries new to the larger level belong to the limit tail and are read
/// off the stored columns instead).
struct ColumnConvergenceTrace {
  int k = 0;
  std::vector<int> levels;
  std::vector<std::vector<std::complex<double>>> columns;
  std::vector<double> l2_diffs;
};

ColumnConvergenceTrace column_convergence_trace(const JacobiSequence& seq, int k,
                                                std::span<const int> m_list);

/// The l2 dominating vector for column 0: yhat_0 = 1, yhat_1 = sqrt(omega_1),
/// yhat_l = sqrt(omega_1..omega_l) C_1..C_l for l >= 2.
std::vector<double> yhat_bound(const JacobiSequence& seq, int m);

/// Truncation measures mu_{2K} and mu_{2K+1} at the largest levels within
/// m_max, plus the gap of their Stieltjes transforms at i.
struct ExtremalMeasurePair {
  DiscreteMeasure mu_even;
  DiscreteMeasure mu_odd;
  double stieltjes_gap = 0.0;
  bool not_indeterminate_warning = false;
};

ExtremalMeasurePair extremal_measure_pair(const JacobiSequence& seq, int m_max, double tol);

/// {"schema":1, "level": m, "parity": "even"|"odd", "atoms": [...], "weights": [...]}
std::string measure_to_json_text(const DiscreteMeasure& mu);

}  // namespace momentdet
