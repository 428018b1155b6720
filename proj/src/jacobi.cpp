#include "momentdet/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace momentdet {

namespace {

double q_integer_pos(double q, int n) {
  if (q == 1.0) return static_cast<double>(n);
  // near q = 1 the direct quotient cancels; expm1/log1p stays accurate there
  if (std::abs(q - 1.0) < 0.25) return std::expm1(n * std::log1p(q - 1.0)) / (q - 1.0);
  return (std::pow(q, n) - 1.0) / (q - 1.0);
}

double q_integer_neg(double q, int n) {
  // (-1)^{n-1} (q^n - 1)/(q - 1) = (r^n - (-1)^n)/(r + 1) with r = -q > 1
  const double r = -q;
  const double parity = (n % 2 == 0) ? 1.0 : -1.0;
  return (std::pow(r, n) - parity) / (r + 1.0);
}

Rational q_integer_pos_exact(const Rational& q, int n) {
  if (q == 1) return Rational(n);
  Rational qn = 1;
  for (int i = 0; i < n; ++i) qn *= q;
  return (qn - 1) / (q - 1);
}

Rational q_integer_neg_exact(const Rational& q, int n) {
  Rational qn = 1;
  for (int i = 0; i < n; ++i) qn *= q;
  const Rational v = (qn - 1) / (q - 1);
  return (n % 2 == 0) ? -v : v;
}

}  // namespace

JacobiSequence JacobiSequence::explicit_terms(std::vector<double> omega) {
  for (size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] > 0.0) || !std::isfinite(omega[i]))
      throw NonPositiveOmega(static_cast<int>(i) + 1, omega[i]);
  }
  JacobiSequence s;
  s.family_ = Family::Explicit;
  s.cache_->values = std::move(omega);
  return s;
}

JacobiSequence JacobiSequence::q_gaussian_pos(double q) {
  if (!(q > -1.0) || !std::isfinite(q))
    throw InvalidParameter("qgauss_pos requires q > -1 (q = -1 is rejected; the case is unassigned)");
  JacobiSequence s;
  s.family_ = Family::QGaussianPos;
  s.q_ = q;
  return s;
}

JacobiSequence JacobiSequence::q_gaussian_neg(double q) {
  if (!(q < -1.0) || !std::isfinite(q))
    throw InvalidParameter("qgauss_neg requires q < -1 (q = -1 is rejected; the case is unassigned)");
  JacobiSequence s;
  s.family_ = Family::QGaussianNeg;
  s.q_ = q;
  return s;
}

JacobiSequence JacobiSequence::power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidParameter("power family requires p > 0");
  JacobiSequence s;
  s.family_ = Family::PowerInt;
  s.p_ = p;
  return s;
}

JacobiSequence JacobiSequence::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParameter("constant family requires c > 0");
  JacobiSequence s;
  s.family_ = Family::Constant;
  s.c_ = c;
  return s;
}

JacobiSequence JacobiSequence::custom(std::function<double(int)> f) {
  if (!f) throw InvalidParameter("custom sequence requires a callable");
  JacobiSequence s;
  s.family_ = Family::Custom;
  s.fn_ = std::move(f);
  return s;
}

double JacobiSequence::compute(int n) const {
  switch (family_) {
    case Family::QGaussianPos:
      return q_integer_pos(q_, n);
    case Family::QGaussianNeg:
      return q_integer_neg(q_, n);
    case Family::PowerInt:
      return std::pow(static_cast<double>(n), p_);
    case Family::Constant:
      return c_;
    case Family::Custom:
      return fn_(n);
    case Family::Explicit:
      break;
  }
  throw InsufficientTerms("explicit sequence has only " +
                          std::to_string(cache_->values.size()) + " terms, need omega_" +
                          std::to_string(n));
}

double JacobiSequence::omega(int n) const {
  if (n < 1) throw IndexError("omega index must be >= 1");
  auto& cache = *cache_;
  {
    std::lock_guard lock(cache.mu);
    if (n <= static_cast<int>(cache.values.size())) return cache.values[n - 1];
    if (family_ == Family::Explicit)
      throw InsufficientTerms("explicit sequence has only " +
                              std::to_string(cache.values.size()) + " terms, need omega_" +
                              std::to_string(n));
    for (int k = static_cast<int>(cache.values.size()) + 1; k <= n; ++k) {
      const double v = compute(k);
      if (!(v > 0.0) || !std::isfinite(v)) throw NonPositiveOmega(k, v);
      cache.values.push_back(v);
    }
    return cache.values[n - 1];
  }
}

std::vector<double> JacobiSequence::prefix(int m) const {
  if (m < 1) throw IndexError("prefix length must be >= 1");
  omega(m);  // fill cache
  std::lock_guard lock(cache_->mu);
  return {cache_->values.begin(), cache_->values.begin() + m};
}

std::vector<Rational> JacobiSequence::exact_prefix(int m) const {
  if (m < 1) throw IndexError("prefix length must be >= 1");
  std::vector<Rational> out;
  out.reserve(m);
  switch (family_) {
    case Family::QGaussianPos: {
      const Rational q = exact_rational(q_);
      for (int n = 1; n <= m; ++n) out.push_back(q_integer_pos_exact(q, n));
      break;
    }
    case Family::QGaussianNeg: {
      const Rational q = exact_rational(q_);
      for (int n = 1; n <= m; ++n) out.push_back(q_integer_neg_exact(q, n));
      break;
    }
    case Family::PowerInt: {
      if (p_ != std::floor(p_))
        throw InvalidParameter("exact mode for the power family requires integer p");
      const auto ip = static_cast<int>(p_);
      for (int n = 1; n <= m; ++n) {
        Rational v = 1;
        for (int i = 0; i < ip; ++i) v *= n;
        out.push_back(v);
      }
      break;
    }
    case Family::Constant: {
      const Rational c = exact_rational(c_);
      out.assign(m, c);
      break;
    }
    case Family::Explicit:
    case Family::Custom: {
      // the rational image of the evaluated doubles is exact
      for (double v : prefix(m)) out.push_back(exact_rational(v));
      break;
    }
  }
  for (size_t i = 0; i < out.size(); ++i)
    if (out[i] <= 0) throw NonPositiveOmega(static_cast<int>(i) + 1, to_double(out[i]));
  return out;
}

int JacobiSequence::available_terms() const {
  if (family_ == Family::Explicit) {
    std::lock_guard lock(cache_->mu);
    return static_cast<int>(cache_->values.size());
  }
  return std::numeric_limits<int>::max();
}

bool JacobiSequence::closed_form() const {
  return family_ != Family::Explicit && family_ != Family::Custom;
}

std::string JacobiSequence::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::Explicit:
      os << "explicit[" << available_terms() << "]";
      break;
    case Family::QGaussianPos:
      os << "qgauss_pos(q=" << q_ << ")";
      break;
    case Family::QGaussianNeg:
      os << "qgauss_neg(q=" << q_ << ")";
      break;
    case Family::PowerInt:
      os << "power(p=" << p_ << ")";
      break;
    case Family::Constant:
      os << "constant(c=" << c_ << ")";
      break;
    case Family::Custom:
      os << "custom";
      break;
  }
  return os.str();
}

std::vector<double> eval_sequence(const JacobiSequence& seq, int m) {
  if (m < 1) throw InvalidParameter("m must be >= 1");
  return seq.prefix(m);
}

MomentSequence moments_from_jacobi(std::span<const double> omega, int n_moments) {
  return MomentSequence{detail::even_moments_walk(omega, n_moments)};
}

MomentSequence moments_from_jacobi(const JacobiSequence& seq, int n_moments) {
  const auto omega = seq.prefix(std::max(1, n_moments));
  return moments_from_jacobi(std::span<const double>(omega), n_moments);
}

std::vector<Rational> moments_from_jacobi_exact(std::span<const Rational> omega, int n_moments) {
  return detail::even_moments_walk(omega, n_moments);
}

std::vector<double> jacobi_from_moments(const MomentSequence& moments) {
  if (moments.even_moments.empty() || moments.even_moments[0] != 1.0)
    throw InvalidParameter("M_0 must equal 1");
  return detail::omegas_from_even_moments(std::span<const double>(moments.even_moments));
}

std::vector<Rational> jacobi_from_moments_exact(std::span<const Rational> even_moments) {
  return detail::omegas_from_even_moments(even_moments);
}

JacobiSequence sequence_from_json_text(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const std::string family = j.at("family").get<std::string>();
  if (family == "explicit") {
    return JacobiSequence::explicit_terms(j.at("omega").get<std::vector<double>>());
  }
  if (family == "qgauss_pos") return JacobiSequence::q_gaussian_pos(j.at("q").get<double>());
  if (family == "qgauss_neg") return JacobiSequence::q_gaussian_neg(j.at("q").get<double>());
  if (family == "power") return JacobiSequence::power(j.at("p").get<double>());
  if (family == "constant") {
    // accept either "c" or a one-element "omega"
    if (j.contains("c")) return JacobiSequence::constant(j.at("c").get<double>());
    return JacobiSequence::constant(j.at("omega").at(0).get<double>());
  }
  throw InvalidParameter("unknown family '" + family + "'");
}

std::string sequence_to_json_text(const JacobiSequence& seq) {
  nlohmann::json j;
  switch (seq.family()) {
    case Family::Explicit: {
      j["family"] = "explicit";
      j["omega"] = seq.prefix(seq.available_terms());
      break;
    }
    case Family::QGaussianPos:
      j["family"] = "qgauss_pos";
      j["q"] = seq.q();
      break;
    case Family::QGaussianNeg:
      j["family"] = "qgauss_neg";
      j["q"] = seq.q();
      break;
    case Family::PowerInt:
      j["family"] = "power";
      j["p"] = seq.p();
      break;
    case Family::Constant:
      j["family"] = "constant";
      j["omega"] = std::vector<double>{seq.c()};
      break;
    case Family::Custom:
      throw InvalidParameter("custom sequences cannot be serialized");
  }
  return j.dump();
}

MomentSequence moments_from_json_text(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  return MomentSequence{j.at("even_moments").get<std::vector<double>>()};
}

std::string moments_to_json_text(const MomentSequence& m) {
  nlohmann::json j;
  j["even_moments"] = m.even_moments;
  return j.dump();
}

}  // namespace momentdet
