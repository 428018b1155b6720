#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "momentdet/errors.hpp"
#include "momentdet/rational.hpp"

namespace momentdet {

enum class Family { Explicit, QGaussianPos, QGaussianNeg, PowerInt, Constant, Custom };

/// A positive sequence omega_1, omega_2, ... given either as an explicit
/// list, one of the built-in closed-form families, or a callback.
/// Evaluated terms are cached; the cache fill is idempotent and safe to
/// populate from concurrent readers.
class JacobiSequence {
 public:
  /// Default: an empty explicit sequence (no evaluable terms).
  JacobiSequence() = default;

  static JacobiSequence explicit_terms(std::vector<double> omega);
  /// omega_n = (q^n - 1)/(q - 1), q > -1; the q -> 1 limit is omega_n = n.
  static JacobiSequence q_gaussian_pos(double q);
  /// omega_n = (-1)^{n-1} (q^n - 1)/(q - 1), q < -1.
  static JacobiSequence q_gaussian_neg(double q);
  /// omega_n = n^p, p > 0.
  static JacobiSequence power(double p);
  static JacobiSequence constant(double c);
  /// f(n) for n = 1, 2, ...; every value must be positive and finite.
  static JacobiSequence custom(std::function<double(int)> f);

  /// omega_n, 1-based.
  double omega(int n) const;
  /// omega_1..omega_m.
  std::vector<double> prefix(int m) const;
  /// omega_1..omega_m as exact rationals. Closed-form families are evaluated
  /// in rational arithmetic; PowerInt requires integer p in this mode.
  std::vector<Rational> exact_prefix(int m) const;

  Family family() const { return family_; }
  double q() const { return q_; }
  double p() const { return p_; }
  double c() const { return c_; }
  /// Number of terms an Explicit sequence holds; INT_MAX otherwise.
  int available_terms() const;
  /// True for the closed-form families (everything except Explicit/Custom).
  bool closed_form() const;
  std::string describe() const;

 private:
  double compute(int n) const;

  Family family_ = Family::Explicit;
  double q_ = 0.0, p_ = 0.0, c_ = 0.0;
  std::function<double(int)> fn_;
  struct Cache {
    std::mutex mu;
    std::vector<double> values;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Evaluate omega_1..omega_m, validating positivity.
std::vector<double> eval_sequence(const JacobiSequence& seq, int m);

/// Even moments M_0, M_2, ..., M_{2N} of a symmetric probability measure.
/// Odd moments are identically zero and not stored.
struct MomentSequence {
  std::vector<double> even_moments;
  int order() const { return static_cast<int>(even_moments.size()) - 1; }
};

namespace detail {

/// Weighted-lattice-walk recursion for <X^{2j} delta_0, delta_0>: after k
/// steps, state[l] is the total weight of length-k paths 0 -> l, where a
/// descent from level l carries factor omega_l. M_{2j} is read at level 0.
template <class T>
std::vector<T> even_moments_walk(std::span<const T> omega, int n_moments) {
  if (n_moments < 0) throw InvalidParameter("n_moments must be >= 0");
  if (static_cast<int>(omega.size()) < n_moments)
    throw InsufficientTerms("need at least " + std::to_string(n_moments) +
                            " sequence terms for M_" + std::to_string(2 * n_moments));
  std::vector<T> out;
  out.reserve(n_moments + 1);
  out.push_back(T(1));  // M_0
  std::vector<T> cur(n_moments + 1, T(0)), next(n_moments + 1, T(0));
  cur[0] = T(1);
  for (int step = 1; step <= 2 * n_moments; ++step) {
    const int top = std::min(step, n_moments);
    for (int l = 0; l <= top; ++l) {
      T v = (l > 0) ? cur[l - 1] : T(0);
      if (l + 1 <= n_moments) v += omega[l] * cur[l + 1];
      next[l] = v;
    }
    std::fill(next.begin() + top + 1, next.end(), T(0));
    cur.swap(next);
    if (step % 2 == 0) out.push_back(cur[0]);
  }
  return out;
}

/// Chebyshev-style recovery of omega_1..omega_N from M_0..M_{2N}. Works on
/// the push-forward under x^2: the recurrence pair (alpha~_k, beta~_k) of
/// that measure unfolds as alpha~_0 = w1, alpha~_k = w_{2k} + w_{2k+1},
/// beta~_k = w_{2k-1} w_{2k}.
template <class T>
std::vector<T> omegas_from_even_moments(std::span<const T> m) {
  const int n = static_cast<int>(m.size()) - 1;  // moments m_0..m_n of x^2
  if (n < 1) throw InvalidParameter("need at least M_0 and M_2");
  if (m[0] != T(1)) throw InvalidParameter("M_0 must equal 1");

  const int kmax = n / 2;  // beta~_k reachable for k <= n/2
  std::vector<std::vector<T>> sigma(kmax + 1);
  sigma[0].assign(m.begin(), m.end());

  std::vector<T> alpha, beta;  // alpha[k] = alpha~_k, beta[k] = beta~_k (beta[0] unused)
  alpha.push_back(m[1] / m[0]);
  beta.push_back(m[0]);

  std::vector<T> omega;
  omega.push_back(alpha[0]);  // w1
  if (!(omega.back() > T(0))) throw NotPositiveDefinite(1);

  for (int k = 1; k <= kmax; ++k) {
    const int lmax = n - k;
    sigma[k].assign(lmax + 1, T(0));
    for (int l = k; l <= lmax; ++l) {
      T v = sigma[k - 1][l + 1] - alpha[k - 1] * sigma[k - 1][l];
      if (k >= 2) v -= beta[k - 1] * sigma[k - 2][l];
      sigma[k][l] = v;
    }
    const T denom_prev = (k == 1) ? m[0] : sigma[k - 1][k - 1];
    beta.push_back(sigma[k][k] / denom_prev);

    // w_{2k} = beta~_k / w_{2k-1}
    const int even_idx = 2 * k;
    if (static_cast<int>(omega.size()) < even_idx) {
      const T w = beta[k] / omega[even_idx - 2];
      // negated comparison also rejects NaN in the float instantiation
      if (!(w > T(0))) throw NotPositiveDefinite(even_idx);
      omega.push_back(w);
    }
    // w_{2k+1} = alpha~_k - w_{2k}, needs sigma[k][k+1] hence 2k+1 <= n
    if (2 * k + 1 <= n) {
      alpha.push_back(sigma[k][k + 1] / sigma[k][k] - sigma[k - 1][k] / denom_prev);
      const T w = alpha[k] - omega[2 * k - 1];
      if (!(w > T(0))) throw NotPositiveDefinite(2 * k + 1);
      omega.push_back(w);
    }
  }
  return omega;  // exactly n entries
}

}  // namespace detail

/// M_0..M_{2N} from omega_1..omega_N (at least N terms required); IEEE
/// double backend.
MomentSequence moments_from_jacobi(std::span<const double> omega, int n_moments);
MomentSequence moments_from_jacobi(const JacobiSequence& seq, int n_moments);
/// Exact-rational backend.
std::vector<Rational> moments_from_jacobi_exact(std::span<const Rational> omega, int n_moments);

/// omega_1..omega_N from M_0..M_{2N}; throws NotPositiveDefinite on the
/// first failing Hankel minor.
std::vector<double> jacobi_from_moments(const MomentSequence& moments);
std::vector<Rational> jacobi_from_moments_exact(std::span<const Rational> even_moments);

/// JSON sequence file support:
///   {"family": "explicit"|"qgauss_pos"|"qgauss_neg"|"power"|"constant",
///    "q": number?, "p": number?, "omega": [number]?}
JacobiSequence sequence_from_json_text(const std::string& text);
std::string sequence_to_json_text(const JacobiSequence& seq);
/// Moments file: {"even_moments": [number]}.
MomentSequence moments_from_json_text(const std::string& text);
std::string moments_to_json_text(const MomentSequence& m);

}  // namespace momentdet
