#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "zscrew/errors.hpp"
#include "zscrew/mangoldt.hpp"
#include "zscrew/zerotable.hpp"

using namespace zscrew;
using doctest::Approx;

namespace {

const ZeroTable& zeros() {
  static const ZeroTable t = load_zeros(ZSCREW_TEST_ZEROS, 0);
  return t;
}

const MangoldtTable& primes() {
  static const MangoldtTable t = build_table(1000000);
  return t;
}

std::string write_temp(const std::string& name, const std::vector<std::string>& lines) {
  const std::string path = "zerotable_" + name + ".txt";
  std::ofstream out(path);
  for (const auto& l : lines) out << l << "\n";
  return path;
}

}  // namespace

TEST_CASE("load_zeros reads the generated table") {
  const ZeroTable& z = zeros();
  REQUIRE(z.size() == 100000);
  CHECK(z.assumed_simple);
  // mpmath zetazero values.
  CHECK(z.ordinates[0] == Approx(14.13472514173469379).epsilon(1e-12));
  CHECK(z.ordinates[99] == Approx(236.5242296658162058).epsilon(1e-12));
  CHECK(z.ordinates[9999] == Approx(9877.7826540055011428).epsilon(1e-13));
  CHECK(z.ordinates[99999] == Approx(74920.827498994186794).epsilon(1e-14));
}

TEST_CASE("load_zeros truncation and errors") {
  CHECK(load_zeros(ZSCREW_TEST_ZEROS, 10).size() == 10);

  const auto desc = write_temp("desc", {"# header", "14.134725141735", "25.010857580146",
                                        "21.022039638772"});
  try {
    load_zeros(desc, 0);
    FAIL("expected ordering error");
  } catch (const DataError& e) {
    CHECK(e.line() == 4);
  }

  const auto bad = write_temp("bad", {"14.134725141735", "", "21.02x"});
  try {
    load_zeros(bad, 0);
    FAIL("expected parse error");
  } catch (const DataError& e) {
    CHECK(e.line() == 3);
  }

  const auto first = write_temp("first", {"15.5", "21.022039638772"});
  CHECK_THROWS_AS(load_zeros(first, 0), DataError);

  // Every other zero dropped: the count falls far below the density.
  std::vector<std::string> sparse;
  for (std::size_t i = 0; i < 400; i += 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", zeros().ordinates[i]);
    sparse.emplace_back(buf);
  }
  CHECK_THROWS_AS(load_zeros(write_temp("sparse", sparse), 0), DataError);
  CHECK_THROWS_AS(load_zeros("/nonexistent/zeros.txt", 0), DataError);
}

TEST_CASE("tail_sigma2 tracks the explicit partial tail") {
  CHECK(tail_sigma2(1000) == Approx((std::log(1000 / (2 * kPi)) + 1) / (kPi * 1000)).epsilon(1e-15));
  CHECK(tail_sigma2(1000) == Approx(1.93e-3).epsilon(5e-3));
  CHECK(tail_sigma2(2000) < tail_sigma2(1000));
  double prev = tail_sigma2(100);
  for (double x = 200; x < 1e7; x *= 1.7) {
    CHECK(tail_sigma2(x) < prev);
    prev = tail_sigma2(x);
  }
  CHECK_THROWS_AS(tail_sigma2(50), DomainError);

  // Explicit sum over 1000 < gamma <= 74920 plus the density estimate beyond.
  for (double cut : {1000.0, 5000.0, 20000.0}) {
    double explicit_sum = 0;
    for (double g : zeros().ordinates)
      if (g > cut) explicit_sum += 2 / (g * g);
    explicit_sum += tail_sigma2(zeros().cutoff());
    CHECK(std::abs(tail_sigma2(cut) / explicit_sum - 1) < 0.1);
  }
}

TEST_CASE("psi_zero_side interval") {
  const TailModel tail = make_tail(zeros());
  CHECK(tail.est > 0);
  CHECK(tail.est < 5e-5);
  const Interval at0 = psi_zero_side(0.0, zeros(), tail);
  CHECK(at0.lower == 0.0);
  CHECK(at0.upper == 0.0);
  for (double t : {0.1, 1.0, 3.0, 10.0, 100.0, 1000.0}) {
    const Interval iv = psi_zero_side(t, zeros(), tail);
    CHECK(iv.lower >= 0);
    CHECK(iv.upper < 0.094);
  }
  const TailModel none = make_tail(zeros(), TailMode::None);
  CHECK(none.est == 0.0);
  CHECK(psi_zero_side(1.0, zeros(), none).width() == 0.0);
  CHECK_THROWS_AS(psi_zero_side(1.0, ZeroTable{}, tail), DomainError);
}

TEST_CASE("two-sided agreement of the prime and zero evaluations") {
  const TailModel tail = make_tail(zeros());
  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double prime = psi_prime_side(t, primes()).value;
    const Interval iv = psi_zero_side(t, zeros(), tail);
    INFO("t = " << t << " prime " << prime << " zero [" << iv.lower << ", " << iv.upper << "]");
    CHECK(iv.contains(prime));
  }
}

TEST_CASE("kernel G identities") {
  const auto psi = [](double t) { return psi_prime_side(t, primes()).value; };
  CHECK(kernel_G(1.3, 0.0, psi) == Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(kernel_G(0.0, 2.1, psi)) < 1e-15);
  CHECK(kernel_G(1.7, 1.7, psi) == Approx(2 * psi(1.7)).epsilon(1e-15));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    const double t = dist(rng), u = dist(rng);
    CHECK(kernel_G(t, u, psi) == Approx(kernel_G(u, t, psi)).epsilon(1e-14));
  }

  const TailModel tail = make_tail(zeros());
  const auto zpsi = [&](double t) { return psi_zero_side(t, zeros(), tail).lower; };
  for (auto [t, u] : {std::pair{1.0, 2.0}, std::pair{1.0, -1.0}, std::pair{0.3, 2.5}}) {
    const Interval g = kernel_G_zero_sum(t, u, zeros(), tail);
    const double from_psi = kernel_G(t, u, zpsi);
    CHECK(std::abs(g.mid() - from_psi) <= 0.5 * g.width() + 6 * tail.est);
    CHECK(g.contains(kernel_G(t, u, psi)));
    CHECK(g.width() == Approx(8 * tail.est));
  }
  for (double t : {0.1, 0.9, 5.0}) CHECK(kernel_G_zero_sum(t, t, zeros(), TailModel{}).lower >= 0);
}

TEST_CASE("kernel G is positive semidefinite on random point sets") {
  const auto psi = [](double t) { return psi_prime_side(t, primes()).value; };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  double worst = 1.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> ts(6);
    for (double& t : ts) t = dist(rng);
    Eigen::MatrixXd g(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) g(i, j) = kernel_G(ts[i], ts[j], psi);
    const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff();
    worst = std::min(worst, lo);
  }
  CHECK(worst >= -1e-9);
}

TEST_CASE("Li coefficients from zeros") {
  const TailModel tail = make_tail(zeros());
  // lambda_1 = 1 + gamma_0/2 - log(2 sqrt(pi)); lambda_2, lambda_3 frozen from mpmath.
  const double l1 = 1 + kEulerGamma / 2 - kLog2 - kLogPi / 2;
  CHECK(l1 == Approx(0.0230957089661210338).epsilon(1e-15));
  const ZeroSum z1 = li_from_zeros(1, zeros(), tail);
  CHECK(std::abs(z1.value - l1) < 1e-8);
  CHECK(z1.truncated < l1);
  CHECK(z1.tail == Approx(tail.est / 2).epsilon(1e-3));
  const ZeroSum z2 = li_from_zeros(2, zeros(), tail);
  const ZeroSum z3 = li_from_zeros(3, zeros(), tail);
  CHECK(z2.value > 0);
  CHECK(z3.value > 0);
  CHECK(std::abs(z2.value - 0.0923457352280466704) < 1e-8);
  CHECK(std::abs(z3.value - 0.2076389205543248038) < 1e-8);
  CHECK_THROWS_AS(li_from_zeros(0, zeros(), tail), DomainError);
  CHECK_THROWS_AS(li_from_zeros(10001, zeros(), tail), DomainError);
  CHECK(li_from_zeros(10000, zeros(), tail).value > 0);
}

TEST_CASE("power sums over zeros") {
  const TailModel tail = make_tail(zeros());
  const ZeroSum s2 = zero_power_sum(2, zeros(), tail);
  // 1 + gamma_0^2 + 2 gamma_1 - pi^2/8 with the Stieltjes constant gamma_1.
  CHECK(std::abs(s2.value - (-0.0461543172958046028)) < 1e-8);
  const double l1 = li_from_zeros(1, zeros(), tail).value;
  const double l2 = li_from_zeros(2, zeros(), tail).value;
  CHECK(std::abs(s2.value - (2 * l1 - l2)) < 1e-8);
  for (int m = 3; m <= 8; ++m) {
    double binom = 1, combo = 0;
    for (int k = 1; k <= m; ++k) {
      binom = binom * (m - k + 1) / k;
      combo += (k % 2 == 1 ? 1 : -1) * binom * li_from_zeros(k, zeros(), tail).value;
    }
    INFO("m = " << m);
    CHECK(std::abs(zero_power_sum(m, zeros(), tail).value - combo) < 1e-7);
  }
  CHECK(std::abs(zero_power_sum(10, zeros()).value) < 1e-10);
  CHECK_THROWS_AS(zero_power_sum(1, zeros()), DomainError);
}
