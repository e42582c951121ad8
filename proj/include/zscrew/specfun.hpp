#pragma once

// Special functions used by the prime-side and archimedean terms.

#include <complex>
#include <numbers>

namespace zscrew {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;
inline constexpr double kCatalan = 0.915965594177219015054603514932384110;
inline constexpr double kLog2 = 0.693147180559945309417232121458176568;
inline constexpr double kLogPi = 1.14472988584940017414342735135305871;
// C = pi^2 + 8G = trigamma(1/4) = Phi(1, 2, 1/4).
inline constexpr double kScrewC = 17.1973291545071107392713191193352240;
// Coefficient of t in the small-t expansion of C - e^{-t/2} Phi(e^{-2t}, 2, 1/4).
inline constexpr double kSmallTA = kPi + 4.0 * kLog2 + 2.0;

struct SpecFunAccuracy {
  double abs_tol = 1e-15;
  long max_terms = 1000000;
};

struct SeriesResult {
  double value = 0.0;
  long terms = 0;
  double est_error = 0.0;
};

double digamma(double x);
double trigamma(double x);
cplx digamma(cplx z);
cplx trigamma(cplx z);

// Phi(z, 2, a) = sum_{n>=0} z^n / (n + a)^2 for 0 <= z <= 1, a > 0.
SeriesResult lerch_phi2(double z, double a, const SpecFunAccuracy& acc = {});

// Catalan's constant from the stored literal.  catalan_partial(k) is the
// k-th partial sum of the defining alternating series.
double catalan();
double catalan_partial(long k);

double bernoulli_number(int n);
double bernoulli_polynomial(int n, double x);

// zeta(2 - k, a) = -B_{k-1}(a) / (k - 1).
double hurwitz_zeta_nonpos(int k, double a);

// Truncated small-t expansion of C - e^{-t/2} Phi(e^{-2t}, 2, 1/4).
SeriesResult g_infty_smallt(double t, int terms, const SpecFunAccuracy& acc = {});

// Riemann zeta at complex s away from the pole, by Euler-Maclaurin.
cplx zeta(cplx s);
// zeta'(s) / zeta(s) for real s > 1.
double zeta_log_derivative(double s);
// xi'(s) / xi(s) for real s >= 1, with xi(s) = s(s-1)/2 pi^{-s/2} Gamma(s/2) zeta(s).
double xi_log_derivative(double s);

}  // namespace zscrew
