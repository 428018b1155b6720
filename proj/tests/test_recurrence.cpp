#include "doctest.h"

#include <random>
#include <sstream>

#include "momentdet/recurrence.hpp"

using namespace momentdet;

namespace {

std::vector<double> random_omegas(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> dist(0.1, 10.0);
  std::vector<double> omega(count);
  for (auto& w : omega) w = dist(rng);
  return omega;
}

Rational omega_product(const RecurrenceTrace& t, int m) {
  Rational p = 1;
  for (int n = 1; n <= m; ++n) p *= exact_rational(t.omega[n]);
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("recurrence");

TEST_CASE("constant sequence: Fibonacci convergents") {
  const auto t = run_trace(JacobiSequence::constant(1.0), 4, Mode::Exact);
  CHECK(t.b_exact == std::vector<Rational>{1, 2, 3, 5, 8});
  CHECK(t.a_exact == std::vector<Rational>{1, 1, 2, 3, 5});
  CHECK(t.ig_exact[4] == Rational(5, 8));
  CHECK(t.c_exact[1] == Rational(1, 2));
  CHECK(t.c_exact[2] == Rational(2, 3));
  CHECK(t.c_exact[3] == Rational(3, 5));
  CHECK(t.c_exact[4] == Rational(5, 8));
}

TEST_CASE("single term: iG_1 = 1/(1+omega_1)") {
  const std::vector<double> w{1.0};
  const auto t = run_trace(std::span<const double>(w), Mode::Float);
  CHECK(t.ig[1] == 0.5);
  CHECK(ig_at_i(JacobiSequence::constant(1.0), 1) == 0.5);
}

TEST_CASE("first commutation step: A_1 B_0 - B_1 A_0 = -omega_1") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto omega = random_omegas(rng, 1);
    const auto t = run_trace(std::span<const double>(omega), Mode::Exact);
    CHECK(t.a_exact[1] * t.b_exact[0] - t.b_exact[1] * t.a_exact[0] ==
          -exact_rational(omega[0]));
  }
}

TEST_CASE("commutation identity, exact, m <= 40") {
  std::mt19937_64 rng(5);
  const auto omega = random_omegas(rng, 40);
  const auto t = run_trace(std::span<const double>(omega), Mode::Exact);
  for (int m = 1; m <= 40; ++m) {
    const Rational lhs = t.a_exact[m] * t.b_exact[m - 1] - t.b_exact[m] * t.a_exact[m - 1];
    const Rational rhs = (m % 2 == 0 ? 1 : -1) * omega_product(t, m);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("difference law, exact, m <= 40") {
  std::mt19937_64 rng(6);
  const auto omega = random_omegas(rng, 40);
  const auto t = run_trace(std::span<const double>(omega), Mode::Exact);
  for (int m = 1; m <= 40; ++m) {
    const Rational lhs = t.ig_exact[m] - t.ig_exact[m - 1];
    const Rational rhs =
        (m % 2 == 0 ? 1 : -1) * omega_product(t, m) / (t.b_exact[m - 1] * t.b_exact[m]);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("delta equals the partial product of (1 - C_n), exact") {
  std::mt19937_64 rng(8);
  const auto omega = random_omegas(rng, 30);
  const auto t = run_trace(std::span<const double>(omega), Mode::Exact);
  Rational prod = 1;
  for (int m = 1; m <= 30; ++m) {
    prod *= 1 - t.c_exact[m];
    const Rational diff = t.ig_exact[m] - t.ig_exact[m - 1];
    CHECK((diff < 0 ? -diff : diff) == prod);
  }
}

TEST_CASE("ratio law: delta_m/delta_{m-1} = 1 - C_m in (0,1)") {
  std::mt19937_64 rng(9);
  const auto omega = random_omegas(rng, 50);
  const auto t = run_trace(std::span<const double>(omega), Mode::Float);
  for (int m = 3; m <= 50; ++m) {
    const double ratio = t.delta[m] / t.delta[m - 1];
    CHECK(ratio == doctest::Approx(1.0 - t.c[m]).epsilon(1e-13));
    CHECK(ratio > 0.0);
    CHECK(ratio < 1.0);
  }
}

TEST_CASE("iG_2 = iG_1 + (1-C_1)(1-C_2)") {
  const std::vector<double> w{1.0, 1.0};
  const auto t = run_trace(std::span<const double>(w), Mode::Float);
  CHECK(t.ig[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(t.ig[2] - t.ig[1] == doctest::Approx((1 - t.c[1]) * (1 - t.c[2])).epsilon(1e-15));
}

TEST_CASE("monotone interlacing on every evaluated prefix (exact)") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const auto omega = random_omegas(rng, 30);
    const auto t = run_trace(std::span<const double>(omega), Mode::Exact);
    Rational max_odd = 0, min_even = 1;  // iG_0 = 1 is the first even value
    for (int m = 2; m <= 30; m += 2) CHECK(t.ig_exact[m] < t.ig_exact[m - 2]);
    for (int m = 3; m <= 30; m += 2) CHECK(t.ig_exact[m] > t.ig_exact[m - 2]);
    for (int m = 1; m <= 30; m += 2)
      if (t.ig_exact[m] > max_odd) max_odd = t.ig_exact[m];
    for (int m = 0; m <= 30; m += 2)
      if (t.ig_exact[m] < min_even) min_even = t.ig_exact[m];
    CHECK(max_odd < min_even);
  }
}

TEST_CASE("float C agrees with exact C to 1e-12 for m <= 60") {
  std::mt19937_64 rng(12);
  const auto omega = random_omegas(rng, 60);
  const auto tf = run_trace(std::span<const double>(omega), Mode::Float);
  const auto te = run_trace(std::span<const double>(omega), Mode::Exact);
  for (int m = 1; m <= 60; ++m) CHECK(std::abs(tf.c[m] - te.c[m]) < 1e-12);
}

TEST_CASE("C_m stays strictly inside (0,1) for m >= 1") {
  const auto t = run_trace(JacobiSequence::q_gaussian_pos(3.0), 200);
  CHECK(t.c[0] == 1.0);
  for (int m = 1; m <= 200; ++m) {
    CHECK(t.c[m] > 0.0);
    CHECK(t.c[m] < 1.0);
  }
}

TEST_CASE("stieltjes transform at i") {
  const auto g1 = stieltjes_at_i(JacobiSequence::constant(1.0), 1);
  CHECK(g1.real() == 0.0);
  CHECK(g1.imag() == doctest::Approx(-0.5).epsilon(1e-15));
  const auto g4 = stieltjes_at_i(JacobiSequence::constant(1.0), 4);
  CHECK(g4.imag() == doctest::Approx(-0.625).epsilon(1e-14));
}

TEST_CASE("gap estimate: constant sequence gap vanishes") {
  const auto g = gap_estimate(JacobiSequence::constant(1.0), 200, 1e-10);
  CHECK(g.upper < 1e-20);
  CHECK(g.converged);
}

TEST_CASE("gap estimate: q = 2 bracket is positive and tight") {
  const auto g = gap_estimate(JacobiSequence::q_gaussian_pos(2.0), 200, 1e-10);
  CHECK(g.lower > 0.0);
  CHECK(g.upper >= g.lower);
  CHECK(g.upper - g.lower < 1e-12);
  CHECK(g.converged);
  CHECK(g.odd_index == 201);
  CHECK(g.even_index == 200);
}

TEST_CASE("gap estimate: power p = 2 partial products are 1/(m+1)") {
  const auto g = gap_estimate(JacobiSequence::power(2.0), 1000, 1e-10);
  // B_m = (m+1)! for omega_n = n^2, so prod_m = 1/(m+1) exactly
  CHECK(g.lower == doctest::Approx(1.0 / 1002.0).epsilon(1e-10));
  CHECK(g.upper == doctest::Approx(1.0 / 1001.0).epsilon(1e-10));
  CHECK_FALSE(g.converged);
}

TEST_CASE("log-space product keeps reporting below double underflow") {
  // omega = n: sum C_n ~ sqrt(n), so prod underflows long before m = 2e5
  const auto t = run_trace(JacobiSequence::power(1.0), 200000);
  CHECK(t.prod[200000] < 1e-300);
  CHECK(t.log_prod[200000] < -708.0);
  CHECK(std::isfinite(t.log_prod[200000]));
}

TEST_CASE("d_tail base case and hand recursion") {
  const auto seq = JacobiSequence::constant(1.0);
  CHECK(d_tail(seq, 2, 3) == 1.0);  // D^(m)_{m-1} = omega_m
  CHECK(d_tail(seq, 0, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(d_tail(seq, 3, 3), IndexError);
  CHECK_THROWS_AS(d_tail(seq, -1, 3), IndexError);
}

TEST_CASE("iG_m = 1/(1 + D^(m)_0) for random sequences, m <= 50") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 5; ++trial) {
    const auto omega = random_omegas(rng, 50);
    const auto seq = JacobiSequence::explicit_terms(omega);
    const auto t = run_trace(std::span<const double>(omega), Mode::Float);
    for (int m = 1; m <= 50; m += 7)
      CHECK(t.ig[m] == doctest::Approx(1.0 / (1.0 + d_tail(seq, 0, m))).epsilon(1e-13));
  }
}

TEST_CASE("D^(m)_n containment for m >= n+2") {
  std::mt19937_64 rng(15);
  const auto omega = random_omegas(rng, 40);
  const auto seq = JacobiSequence::explicit_terms(omega);
  for (int n = 0; n < 38; n += 3) {
    for (int m = n + 2; m <= 40; m += 5) {
      const double d = d_tail(seq, n, m);
      CHECK(d >= omega[n] / (1.0 + omega[n + 1]) - 1e-14);
      CHECK(d <= omega[n] + 1e-14);
    }
  }
}

TEST_CASE("trace CSV emission") {
  const auto t = run_trace(JacobiSequence::constant(1.0), 4);
  std::ostringstream os;
  write_trace_csv(os, t);
  const auto text = os.str();
  CHECK(text.substr(0, 48) == "m,omega_m,C_m,iG_m,delta_m,sumC_m,log_prod_m\n1,1");
  // last row carries iG_4 = 0.625
  const auto pos = text.rfind("\n4,");
  REQUIRE(pos != std::string::npos);
  double m, w, c, ig;
  std::sscanf(text.c_str() + pos + 1, "%lf,%lf,%lf,%lf", &m, &w, &c, &ig);
  CHECK(ig == doctest::Approx(0.625).epsilon(1e-14));
}

TEST_CASE("p = 2 partial sums grow like ln m") {
  // C_n = 1/(n+1) here, so sumC_m = H_{m+1} - 1: slope 1 against ln m
  const auto t = run_trace(JacobiSequence::power(2.0), 10000);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int m = 100; m <= 10000; m += 50) {
    const double x = std::log(static_cast<double>(m));
    sx += x;
    sy += t.sum_c[m];
    sxx += x * x;
    sxy += x * t.sum_c[m];
    ++cnt;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  CHECK(slope == doctest::Approx(1.0).epsilon(1e-3));
  for (int m = 2; m <= 10000; ++m) CHECK(t.sum_c[m] > t.sum_c[m - 1]);
}

TEST_CASE("run_trace validates input") {
  CHECK_THROWS_AS(run_trace(JacobiSequence::constant(1.0), 0), InvalidParameter);
  const std::vector<double> bad{1.0, -2.0};
  CHECK_THROWS_AS(run_trace(std::span<const double>(bad), Mode::Float), NonPositiveOmega);
}

TEST_SUITE_END();
