#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "zscrew/errors.hpp"
#include "zscrew/mangoldt.hpp"

using namespace zscrew;
using doctest::Approx;

namespace {

const MangoldtTable& table() {
  static const MangoldtTable t = build_table(1000000);
  return t;
}

// Lambda(n) by trial factorization.
double naive_lambda(std::uint64_t n) {
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
  }
  return n > 1 ? std::log(static_cast<double>(n)) : 0.0;
}

}  // namespace

TEST_CASE("von Mangoldt values") {
  const auto& tb = table();
  CHECK(tb.lambda(1) == 0.0);
  CHECK(tb.lambda(2) == Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(tb.lambda(8) == Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(tb.lambda(6) == 0.0);
  CHECK(tb.lambda(9) == Approx(std::log(3.0)).epsilon(1e-15));
  for (std::uint64_t n = 1; n <= 3000; ++n) CHECK(tb.lambda(n) == Approx(naive_lambda(n)).epsilon(1e-14));
  for (std::uint64_t n = 999000; n <= 1000000; ++n)
    CHECK(tb.lambda(n) == Approx(naive_lambda(n)).epsilon(1e-14));
  CHECK_THROWS_AS(tb.lambda(1000001), RangeError);
}

TEST_CASE("Chebyshev psi is consistent and monotone") {
  const auto& tb = table();
  CHECK(tb.chebyshev_psi(100) == Approx(94.04531122935739224600493).epsilon(1e-14));
  double prev = 0.0;
  for (std::uint64_t x = 1; x <= 2000; x += 7) {
    const double v = tb.chebyshev_psi(x);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("build_table limits") {
  CHECK_THROWS_AS(build_table(1), DomainError);
  CHECK_THROWS_AS(build_table(1000, 500), CapacityError);
  const MangoldtTable small = build_table(2);
  CHECK(small.prime_power_count() == 1);
}

TEST_CASE("prime power stream matches the table") {
  PrimePowerStream stream(1000000);
  std::uint64_t n;
  double lp;
  std::size_t i = 0;
  bool ok = true;
  while (stream.next(n, lp)) {
    if (i >= table().prime_power_count() || table().prime_power(i) != n) ok = false;
    ++i;
  }
  CHECK(ok);
  CHECK(i == table().prime_power_count());
  CHECK(i == 78734);  // pi(10^6) = 78498 plus 236 higher prime powers
}

TEST_CASE("weighted Chebyshev sum") {
  const auto& tb = table();
  CHECK(chebyshev_weighted(0.5, tb) == 0.0);
  CHECK(chebyshev_weighted(std::log(2.0), tb) == Approx(0.0).epsilon(1e-15));
  CHECK(chebyshev_weighted(3.0, tb) == Approx(6.128015590961144544842428).epsilon(1e-13));
  double naive = 0.0;
  for (std::uint64_t n = 2; n <= 20; ++n) naive += naive_lambda(n) / std::sqrt(double(n)) * (3.0 - std::log(double(n)));
  CHECK(std::abs(chebyshev_weighted(3.0, tb) - naive) < 1e-12);
  CHECK(asymptotic_ratio(0.5, tb) == 0.0);
  CHECK_THROWS_AS(chebyshev_weighted(14.0, tb), RangeError);
}

TEST_CASE("streaming scan agrees with the table") {
  std::vector<double> ts;
  for (int i = 0; i <= 130; ++i) ts.push_back(0.1 * i);
  const auto v = chebyshev_weighted_scan(ts);
  for (std::size_t i = 0; i < ts.size(); ++i)
    CHECK(v[i] == Approx(chebyshev_weighted(ts[i], table())).epsilon(1e-13).scale(1.0));
  CHECK_THROWS_AS(chebyshev_weighted_scan({2.0, 1.0}), DomainError);
  CHECK_THROWS_AS(chebyshev_weighted_scan({10.0}, 0.5, 1000), CapacityError);
}

TEST_CASE("asymptotic ratio trend") {
  // Mean deviation from 1 over a unit window shrinks with t.
  auto window_dev = [](double lo) {
    std::vector<double> ts;
    for (int i = 0; i < 50; ++i) ts.push_back(lo + 0.02 * i);
    const auto v = chebyshev_weighted_scan(ts);
    double s = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) s += std::abs(v[i] / (4 * std::exp(ts[i] / 2)) - 1);
    return s / ts.size();
  };
  CHECK(window_dev(17.0) <= window_dev(9.0));
}

TEST_CASE("psi prime side values") {
  const auto& tb = table();
  CHECK(psi_prime_side(0.0, tb).value == 0.0);
  CHECK(psi_prime_side(1.0, tb).value == Approx(0.0440073052368525268602186).epsilon(1e-12));
  CHECK(psi_prime_side(5.0, tb).value == Approx(0.04537134955883396719237335).epsilon(1e-10));
  CHECK(psi_prime_side(0.25, tb).value == Approx(0.05123349628233368698314961).epsilon(1e-12));
  CHECK(std::abs(psi_prime_side(0.464002, tb).value - 0.0396618) <= 1e-6);
  for (double t : {0.3, 1.7, 4.2}) CHECK(psi_prime_side(t, tb).value == psi_prime_side(-t, tb).value);
  const PsiEvalResult r = psi_prime_side(4.2, tb);
  CHECK(r.est_error >= 0.0);
  CHECK(r.prime_terms_used == 27);  // prime powers up to e^4.2 = 66.7
  CHECK_THROWS_AS(psi_prime_side(14.0, tb), RangeError);
}

TEST_CASE("closed-form derivative before the first prime") {
  const auto [t1, t2] = psi_critical_points();
  CHECK(t1 == Approx(0.152630914454944).epsilon(1e-12));
  CHECK(t2 == Approx(0.464001789608754).epsilon(1e-12));
  CHECK(std::abs(psi_prime_derivative(0.152631)) <= 1e-4);
  CHECK(std::abs(psi_prime_derivative(0.464002)) <= 1e-4);
  // Logarithmic blow-up at 0+: about 5.70 at 1e-6, past 6 by 1e-7.
  CHECK(psi_prime_derivative(1e-6) > 5.5);
  CHECK(psi_prime_derivative(1e-7) > 6.0);
  CHECK(psi_prime_derivative(1e-12) > psi_prime_derivative(1e-9));
  // Matches a central difference of the prime-side Psi.
  const double h = 1e-6;
  const double fd = (psi_prime_side(0.3 + h, table()).value - psi_prime_side(0.3 - h, table()).value) / (2 * h);
  CHECK(psi_prime_derivative(0.3) == Approx(fd).epsilon(1e-7));
  CHECK_THROWS_AS(psi_prime_derivative(0.7), DomainError);
  CHECK_THROWS_AS(psi_prime_derivative(0.0), DomainError);
}

TEST_CASE("continuity across prime-power thresholds") {
  for (int n : {2, 3, 4, 5, 7, 8, 9}) {
    const double l = std::log(double(n)), eps = 1e-8;
    const double jump = std::abs(psi_prime_side(l + eps, table()).value - psi_prime_side(l - eps, table()).value);
    CHECK(jump <= 20 * eps);
  }
}

TEST_CASE("positivity and boundedness over the table range") {
  const double t_max = table().log_limit();
  std::vector<double> ts;
  for (double t = 1e-3; t <= t_max; t += 1e-3) ts.push_back(t);
  const auto phi = chebyshev_weighted_scan(ts);
  double lo = 1.0, hi = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double v = psi_smooth_part(ts[i]).value - phi[i];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 0.094);
}

TEST_CASE("shifted variants") {
  const auto& tb = table();
  for (double t : {0.1, 1.0, 3.0})
    CHECK(std::abs(psi_omega_prime_side(t, 0.0, tb).value - psi_prime_side(t, tb).value) <= 1e-12);
  for (double w = -1.0; w <= 1.0 + 1e-9; w += 0.125)
    CHECK(std::abs(psi_omega_prime_side(0.0, w, tb).value) <= 1e-12);
  // Near zero the closed form and the transform both tend to 0.
  for (double w : {0.1, 0.5, 1.0}) CHECK(std::abs(psi_omega_prime_side(1e-9, w, tb).value) < 1e-7);
  CHECK(std::abs(psi_omega_prime_side(1.0, 0.5, tb).value - psi_omega_transform(1.0, 0.5, tb)) <= 1e-6);
  CHECK(psi_omega_prime_side(1.0, 0.5, tb).value == Approx(0.0674118102).epsilon(1e-9));
  CHECK(psi_omega_prime_side(2.0, 0.3, tb).value == Approx(psi_omega_transform(2.0, 0.3, tb)).epsilon(1e-10));
  // Singular omega falls back to the transform.
  CHECK(psi_omega_prime_side(1.5, -0.5, tb).value == Approx(psi_omega_transform(1.5, -0.5, tb)).epsilon(1e-12));
  CHECK_THROWS_AS(psi_omega_smooth_part(1.0, -0.5), DomainError);
  // Omega < -1/2 takes the shifted Lerch branch.
  CHECK(psi_omega_prime_side(2.0, -0.8, tb).value == Approx(psi_omega_transform(2.0, -0.8, tb)).epsilon(1e-9));
}

TEST_CASE("unconditional nonnegativity for omega >= 1/2") {
  const auto& tb = table();
  for (double w : {0.5, 0.75, 1.0}) {
    double lo = 1.0;
    for (double t = 0.01; t <= tb.log_limit(); t += 0.01) lo = std::min(lo, psi_omega_prime_side(t, w, tb).value);
    CHECK(lo >= 0.0);
  }
}

TEST_CASE("sign change scan") {
  const auto& tb = table();
  const SignChange neg = find_sign_change(-0.1, 10.0, 1e-3);
  REQUIRE(neg.found);
  CHECK(neg.bracket_lo < neg.t);
  CHECK(neg.t <= neg.bracket_hi);
  CHECK(neg.bracket_hi - neg.bracket_lo == Approx(1e-3));
  CHECK(std::abs(psi_omega_prime_side(neg.t, -0.1, tb).value) < 1e-12);
  CHECK(psi_omega_prime_side(neg.bracket_lo, -0.1, tb).value > 0);
  CHECK(psi_omega_prime_side(neg.bracket_hi, -0.1, tb).value < 0);

  // At omega = -1/2 the smooth part is a limit; the transform confirms the root.
  const SignChange sing = find_sign_change(-0.5, 6.0, 1e-3);
  REQUIRE(sing.found);
  CHECK(psi_omega_transform(sing.t - 1e-5, -0.5, tb) > 0);
  CHECK(psi_omega_transform(sing.t + 1e-5, -0.5, tb) < 0);

  for (double w : {0.0, 0.5, 1.0}) {
    const SignChange none = find_sign_change(w, tb.log_limit(), 1e-3);
    CHECK_FALSE(none.found);
    CHECK(none.min_value > 0);
    CHECK(none.grid_points == static_cast<std::size_t>(std::floor(tb.log_limit() / 1e-3 + 1e-9)));
  }
  CHECK_THROWS_AS(find_sign_change(0.0, 25.0, 1e-3), RangeError);
  CHECK_THROWS_AS(find_sign_change(0.0, 5.0, 0.0), DomainError);
}

TEST_CASE("shift identity") {
  const auto& tb = table();
  const auto psi0 = [&tb](double u) { return psi_prime_side(u, tb).value; };
  const auto breaks = prime_power_logs(0.0, 3.0, tb);
  CHECK(std::abs(psi_omega_shift(psi0, 0.5, 1.0, breaks) - psi_omega_prime_side(1.0, 0.5, tb).value) <= 1e-6);
  CHECK(std::abs(psi_omega_shift(psi0, 1e-8, 1.0, breaks) - psi0(1.0)) <= 1e-7);
  const auto psi03 = [&tb](double u) { return psi_omega_prime_side(u, 0.3, tb).value; };
  CHECK(std::abs(psi_omega_shift(psi03, 0.2, 2.0, breaks) - psi_omega_prime_side(2.0, 0.5, tb).value) <= 1e-6);
  // Sampled input on a uniform grid.
  std::vector<double> samples;
  const int m = 4000;
  for (int i = 0; i <= m; ++i) samples.push_back(psi0(1.0 * i / m));
  CHECK(std::abs(psi_omega_shift(samples, 0.5, 1.0) - psi_omega_prime_side(1.0, 0.5, tb).value) <= 1e-6);
  CHECK_THROWS_AS(psi_omega_shift(std::vector<double>{0.0, 1.0}, 0.5, 1.0), DomainError);
}

TEST_CASE("binary cache round trip") {
  const MangoldtTable small = build_table(5000);
  const auto path = (std::filesystem::temp_directory_path() / "zscrew_lm_test.bin").string();
  small.save_cache(path);
  CHECK(std::filesystem::file_size(path) == 16 + 8 * 5000);
  const MangoldtTable back = MangoldtTable::load_cache(path);
  CHECK(back.limit() == 5000);
  CHECK(back.prime_power_count() == small.prime_power_count());
  CHECK(chebyshev_weighted(8.0, back) == chebyshev_weighted(8.0, small));
  {
    std::ofstream bad(path, std::ios::binary);
    bad << "NOTMAGIC";
  }
  CHECK_THROWS_AS(MangoldtTable::load_cache(path), DataError);
  std::filesystem::remove(path);
}
