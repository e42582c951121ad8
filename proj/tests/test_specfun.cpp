#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "zscrew/errors.hpp"
#include "zscrew/numeric.hpp"
#include "zscrew/specfun.hpp"

using namespace zscrew;
using doctest::Approx;

// Reference values below were frozen from mpmath at 30 significant digits.

TEST_CASE("digamma closed forms") {
  CHECK(digamma(1.0) == Approx(-kEulerGamma).epsilon(1e-15));
  CHECK(digamma(0.25) == Approx(-kEulerGamma - kPi / 2 - 3 * kLog2).epsilon(1e-15));
  CHECK(digamma(0.25) == Approx(-4.2274535333762654080895301461).epsilon(1e-15));
  CHECK(digamma(2.0) == Approx(1.0 - kEulerGamma).epsilon(1e-15));
  CHECK(digamma(3.7) == Approx(1.16715353936151144094765086066).epsilon(1e-15));
  CHECK(digamma(0.01) == Approx(-100.560885457868672415475307272).epsilon(1e-15));
  CHECK_THROWS_AS(digamma(0.0), DomainError);
  CHECK_THROWS_AS(digamma(-1.5), DomainError);
}

TEST_CASE("digamma recurrence on random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(1e-3, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(rng);
    CHECK(std::abs(digamma(x + 1) - digamma(x) - 1.0 / x) <= 1e-13 * (1.0 + 1.0 / x));
  }
}

TEST_CASE("trigamma values and reflection") {
  CHECK(trigamma(1.0) == Approx(kPi * kPi / 6).epsilon(1e-15));
  CHECK(trigamma(0.5) == Approx(kPi * kPi / 2).epsilon(1e-15));
  CHECK(trigamma(0.25) == Approx(kScrewC).epsilon(1e-15));
  CHECK(trigamma(0.25) == Approx(kPi * kPi + 8 * catalan()).epsilon(1e-15));
  CHECK(trigamma(0.1) == Approx(101.433299150792747704652039651).epsilon(1e-15));
  CHECK(trigamma(0.25) + trigamma(0.75) == Approx(2 * kPi * kPi).epsilon(1e-15));
  CHECK_THROWS_AS(trigamma(0.0), DomainError);
}

TEST_CASE("complex digamma and trigamma") {
  const cplx d = digamma(cplx(0.25, 5.0));
  CHECK(d.real() == Approx(1.60902051271433045542228834509).epsilon(1e-14));
  CHECK(d.imag() == Approx(1.62092293994429983317927846747).epsilon(1e-14));
  const cplx d2 = digamma(cplx(0.25, -0.7));
  CHECK(d2.real() == Approx(-0.419249218110660687002001567975).epsilon(1e-14));
  CHECK(d2.imag() == Approx(-1.98095125316696557186852706523).epsilon(1e-14));
  const cplx t = trigamma(cplx(0.25, 5.0));
  CHECK(t.real() == Approx(-0.0100766347430930156269973552133).epsilon(1e-12));
  CHECK(t.imag() == Approx(-0.200167254681254646122335596112).epsilon(1e-13));
  const cplx t2 = trigamma(cplx(0.25, 0.3));
  CHECK(t2.real() == Approx(-0.100176734960221197154269104132).epsilon(1e-12));
  CHECK(t2.imag() == Approx(-6.81340375375544249119397553923).epsilon(1e-14));
  // Real axis agrees with the real routines.
  CHECK(digamma(cplx(0.25, 0.0)).real() == Approx(digamma(0.25)).epsilon(1e-15));
}

TEST_CASE("complex digamma real part grows like log|z|") {
  for (double y : {1e2, 1e3, 1e4}) {
    const cplx z(0.25, y / 2);
    const double ratio = digamma(z).real() / std::log(std::abs(z));
    CHECK(std::abs(ratio - 1.0) < 2.0 / std::abs(z));
  }
}

TEST_CASE("lerch_phi2 special values") {
  CHECK(lerch_phi2(0.0, 0.25).value == 16.0);
  CHECK(lerch_phi2(1.0, 0.25).value == Approx(kScrewC).epsilon(1e-15));
  CHECK(lerch_phi2(std::exp(-2.0), 0.25).value ==
        Approx(16.09048755446530640416699416412862127224).epsilon(1e-15));
  CHECK(lerch_phi2(std::exp(-0.01), 0.25).value ==
        Approx(17.1476030381831455837538151222).epsilon(1e-15));
  CHECK(lerch_phi2(std::exp(-0.0001), 0.25).value ==
        Approx(17.1963730018842892376092912987).epsilon(1e-15));
  CHECK(lerch_phi2(std::exp(-0.6), 1.3).value ==
        Approx(0.737447445973321861540036856268).epsilon(1e-15));
  CHECK_THROWS_AS(lerch_phi2(1.5, 0.25), DomainError);
  CHECK_THROWS_AS(lerch_phi2(0.5, 0.0), DomainError);
}

TEST_CASE("lerch_phi2 matches brute-force summation") {
  const double z = std::exp(-2.0);
  CompensatedSum s;
  double zn = 1.0;
  for (int n = 0; n < 1000000 && zn > 0; ++n) {
    s += zn / ((n + 0.25) * (n + 0.25));
    zn *= z;
  }
  CHECK(std::abs(lerch_phi2(z, 0.25).value - s.value()) < 1e-12);
}

TEST_CASE("lerch_phi2 monotone in z") {
  double prev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double z = i / 200.0;
    const double v = lerch_phi2(z, 0.25).value;
    CHECK(v >= prev);
    CHECK(v <= lerch_phi2(1.0, 0.25).value + 1e-14);
    prev = v;
  }
}

TEST_CASE("catalan constant") {
  CHECK(catalan() == Approx(0.9159655942).epsilon(1e-10));
  // Alternating partial sums bracket the limit.
  for (long k : {0L, 1L, 10L, 1001L}) {
    const double even = catalan_partial(2 * k), odd = catalan_partial(2 * k + 1);
    CHECK(odd < catalan());
    CHECK(catalan() < even);
  }
  // Averaging consecutive partial sums accelerates convergence enough to validate the literal.
  const double avg = 0.5 * (catalan_partial(200000) + catalan_partial(200001));
  CHECK(std::abs(avg - catalan()) < 1e-11);
}

TEST_CASE("Bernoulli polynomials and Hurwitz zeta at nonpositive integers") {
  CHECK(hurwitz_zeta_nonpos(2, 0.25) == Approx(0.25).epsilon(1e-15));
  CHECK(hurwitz_zeta_nonpos(3, 0.25) == Approx(1.0 / 96.0).epsilon(1e-15));
  CHECK(hurwitz_zeta_nonpos(4, 0.25) == Approx(-1.0 / 64.0).epsilon(1e-15));
  // B_4(1/4) = 7/3840, so zeta(-3, 1/4) = -7/15360.
  CHECK(hurwitz_zeta_nonpos(5, 0.25) == Approx(-7.0 / 15360.0).epsilon(1e-14));
  CHECK(bernoulli_polynomial(6, 0.0) == Approx(1.0 / 42.0).epsilon(1e-15));
  CHECK(bernoulli_number(32) == Approx(-7709321041217.0 / 510.0).epsilon(1e-12));
  CHECK_THROWS_AS(hurwitz_zeta_nonpos(1, 0.25), DomainError);
}

TEST_CASE("small-t archimedean expansion") {
  CHECK(kSmallTA == Approx(7.91418137).epsilon(1e-8));
  const double t = 0.05;
  const double direct = kScrewC - std::exp(-t / 2) * lerch_phi2(std::exp(-2 * t), 0.25).value;
  CHECK(direct == Approx(0.694034097317398634252292367639).epsilon(1e-13));
  CHECK(std::abs(g_infty_smallt(t, 20).value - direct) < 1e-10);
  for (int i = 1; i <= 20; ++i) {
    const double s = 0.005 * i;
    const double d = kScrewC - std::exp(-s / 2) * lerch_phi2(std::exp(-2 * s), 0.25).value;
    CHECK(std::abs(g_infty_smallt(s, 30).value - d) <= 1e-10);
  }
  double prev_gap = 1.0;
  for (double s : {1e-3, 1e-4, 1e-5}) {
    const double gap = std::abs(g_infty_smallt(s, 10).value / (2 * s * std::log(1 / s)) - 1.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.7);
  CHECK_THROWS_AS(g_infty_smallt(0.9, 2, SpecFunAccuracy{1e-15, 10}), TruncationError);
}

TEST_CASE("zeta and the logarithmic derivative of xi") {
  CHECK(zeta(cplx(1.5, 0)).real() == Approx(2.61237534868548834334856756792).epsilon(1e-14));
  const cplx z = zeta(cplx(0.5, 14.0));
  CHECK(z.real() == Approx(0.022241142609993589246213199204).epsilon(1e-11));
  CHECK(z.imag() == Approx(-0.103258123266450057902363095553).epsilon(1e-12));
  CHECK(zeta_log_derivative(1.5) == Approx(-1.50523535578826791942204360304).epsilon(1e-14));
  CHECK(xi_log_derivative(1.5) == Approx(0.04613592806046257535946600654227199321796).epsilon(1e-13));
  CHECK(xi_log_derivative(1.0) ==
        Approx(1 + kEulerGamma / 2 - kLog2 - kLogPi / 2).epsilon(1e-14));
  CHECK(xi_log_derivative(1.0) == Approx(0.02309570896612103381431024790649529162192).epsilon(1e-13));
}

TEST_CASE("quadrature and double-double kernels") {
  const QuadResult r = integrate([](double x) { return std::exp(-x) * std::sin(3 * x); }, 0, 40, 1e-14);
  CHECK(r.value == Approx(0.3).epsilon(1e-13));
  const QuadratureRule& gl = gauss_legendre(20);
  double s = 0;
  for (int i = 0; i < 20; ++i) s += gl.weights[i] * std::pow(gl.nodes[i], 38);
  CHECK(s == Approx(2.0 / 39.0).epsilon(1e-14));
  const DoubleDouble third = DoubleDouble(1.0) / DoubleDouble(3.0);
  const DoubleDouble back = third * DoubleDouble(3.0) - DoubleDouble(1.0);
  CHECK(std::abs(back.to_double()) < 1e-30);
  CHECK(expint_e1(0.5) == Approx(0.559773594776160811746795939315).epsilon(1e-14));
  CHECK(expint_e1(3.0) == Approx(0.0130483810941970374125007566227).epsilon(1e-14));
  CHECK(find_root([](double x) { return x * x - 2; }, 0, 2) == Approx(std::sqrt(2.0)).epsilon(1e-15));
}
