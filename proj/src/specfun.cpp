#include "zscrew/specfun.hpp"

#include <array>
#include <cmath>
#include <string>

#include "zscrew/errors.hpp"
#include "zscrew/numeric.hpp"

namespace zscrew {

namespace {

// B_{2k} for k = 1..15.
constexpr std::array<double, 15> kB2k = {
    1.0 / 6.0,         -1.0 / 30.0,        1.0 / 42.0,          -1.0 / 30.0,
    5.0 / 66.0,        -691.0 / 2730.0,    7.0 / 6.0,           -3617.0 / 510.0,
    43867.0 / 798.0,   -174611.0 / 330.0,  854513.0 / 138.0,    -236364091.0 / 2730.0,
    8553103.0 / 6.0,   -23749461029.0 / 870.0, 8615841276005.0 / 14322.0};

constexpr double kShift = 10.0;

}  // namespace

double digamma(double x) {
  if (!(x > 0)) throw DomainError("digamma: argument must be positive, got " + std::to_string(x));
  double acc = 0.0;
  while (x < kShift) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  double series = 0.0, p = inv2;
  for (int k = 1; k <= 10; ++k) {
    series += kB2k[k - 1] / (2.0 * k) * p;
    p *= inv2;
  }
  return acc + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
  if (!(x > 0)) throw DomainError("trigamma: argument must be positive, got " + std::to_string(x));
  double acc = 0.0;
  while (x < kShift) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x, inv2 = inv * inv;
  double series = 0.0, p = inv2 * inv;
  for (int k = 1; k <= 10; ++k) {
    series += kB2k[k - 1] * p;
    p *= inv2;
  }
  return acc + inv + 0.5 * inv2 + series;
}

cplx digamma(cplx z) {
  if (z.real() <= 0 && std::abs(z.imag()) < 1e-300 && z.real() == std::floor(z.real()))
    throw DomainError("digamma: pole at a nonpositive integer");
  cplx acc = 0.0;
  // Reflection keeps the asymptotic series away from the left half-plane.
  if (z.real() < 0.5 && std::abs(z.imag()) < kShift) {
    const cplx refl = kPi / std::tan(kPi * z);
    return digamma(1.0 - z) - refl;
  }
  while (std::abs(z) < kShift) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  const cplx inv2 = 1.0 / (z * z);
  cplx series = 0.0, p = inv2;
  for (int k = 1; k <= 10; ++k) {
    series += kB2k[k - 1] / (2.0 * k) * p;
    p *= inv2;
  }
  return acc + std::log(z) - 0.5 / z - series;
}

cplx trigamma(cplx z) {
  if (z.real() <= 0 && std::abs(z.imag()) < 1e-300 && z.real() == std::floor(z.real()))
    throw DomainError("trigamma: pole at a nonpositive integer");
  if (z.real() < 0.5 && std::abs(z.imag()) < kShift) {
    const cplx s = std::sin(kPi * z);
    return -trigamma(1.0 - z) + kPi * kPi / (s * s);
  }
  cplx acc = 0.0;
  while (std::abs(z) < kShift) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  const cplx inv = 1.0 / z, inv2 = inv * inv;
  cplx series = 0.0, p = inv2 * inv;
  for (int k = 1; k <= 10; ++k) {
    series += kB2k[k - 1] * p;
    p *= inv2;
  }
  return acc + inv + 0.5 * inv2 + series;
}

SeriesResult lerch_phi2(double z, double a, const SpecFunAccuracy& acc) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("lerch_phi2: z must lie in [0, 1]");
  if (!(a > 0.0)) throw DomainError("lerch_phi2: a must be positive");
  SeriesResult res;
  if (z == 0.0) {
    res.value = 1.0 / (a * a);
    res.terms = 1;
    return res;
  }
  const double w = -std::log(z);
  CompensatedSum sum;

  if (w > 0.5) {
    // Geometric decay: stop once z^N / ((N + a)^2 (1 - z)) is below tolerance.
    double zn = 1.0;
    long n = 0;
    for (;; ++n) {
      const double y = n + a;
      const double bound = zn / (y * y * (1.0 - z));
      if (bound < acc.abs_tol * 1e-2 && n > 0) {
        res.est_error = bound;
        break;
      }
      if (n >= acc.max_terms)
        throw TruncationError("lerch_phi2: series bound not met within max_terms");
      sum += zn / (y * y);
      zn *= z;
    }
    res.value = sum.value();
    res.terms = n;
    return res;
  }

  // Direct head, then Euler-Maclaurin on f(x) = e^{-wx} / (x + a)^2.
  const long n_head = std::max(0L, static_cast<long>(std::ceil(20.0 - a)));
  for (long n = 0; n < n_head; ++n) {
    const double y = n + a;
    sum += std::exp(-w * n) / (y * y);
  }
  const double big_n = static_cast<double>(n_head);
  const double y = big_n + a;
  const double en = std::exp(-w * big_n);
  double integral = en / y;
  if (w > 0.0) integral -= w * std::exp(w * a) * expint_e1(w * y);
  sum += integral;
  sum += 0.5 * en / (y * y);

  // f^{(m)}(N) by Leibniz: sum_j C(m,j) (-w)^{m-j} e^{-wN} (-1)^j (j+1)! / y^{j+2}
  auto derivative = [&](int m) {
    double total = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= m; ++j) {
      if (j > 0) binom = binom * (m - j + 1) / j;
      double fact = 1.0;
      for (int i = 2; i <= j + 1; ++i) fact *= i;
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      total += binom * std::pow(-w, m - j) * sign * fact / std::pow(y, j + 2);
    }
    return total * en;
  };
  double fact2k = 1.0;
  double last = 0.0;
  for (int k = 1; k <= 12; ++k) {
    fact2k *= (2.0 * k - 1.0) * (2.0 * k);
    last = kB2k[k - 1] / fact2k * derivative(2 * k - 1);
    sum += -last;
  }
  res.value = sum.value();
  res.terms = n_head + 12;
  res.est_error = std::abs(last) + 1e-16 * std::abs(res.value);
  if (res.est_error > std::max(acc.abs_tol, 4e-16 * std::abs(res.value)))
    throw TruncationError("lerch_phi2: Euler-Maclaurin tail did not converge");
  return res;
}

double catalan() { return kCatalan; }

double catalan_partial(long k) {
  CompensatedSum s;
  for (long n = 0; n <= k; ++n) {
    const double d = 2.0 * n + 1.0;
    s += (n % 2 == 0 ? 1.0 : -1.0) / (d * d);
  }
  return s.value();
}

double bernoulli_number(int n) {
  if (n < 0) throw DomainError("bernoulli_number: negative index");
  if (n == 0) return 1.0;
  if (n == 1) return -0.5;
  if (n % 2 == 1) return 0.0;
  if (n / 2 <= static_cast<int>(kB2k.size())) return kB2k[n / 2 - 1];
  // Recurrence sum_{k<n+1} C(n+1,k) B_k = 0 for larger even n.
  double total = 0.0;
  double binom = 1.0;
  for (int k = 0; k < n; ++k) {
    total += binom * bernoulli_number(k);
    binom = binom * (n + 1 - k) / (k + 1);
  }
  return -total / (n + 1);
}

double bernoulli_polynomial(int n, double x) {
  double total = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    total += binom * bernoulli_number(k) * std::pow(x, n - k);
    binom = binom * (n - k) / (k + 1);
  }
  return total;
}

double hurwitz_zeta_nonpos(int k, double a) {
  if (k < 2) throw DomainError("hurwitz_zeta_nonpos: k must be at least 2");
  return -bernoulli_polynomial(k - 1, a) / (k - 1);
}

SeriesResult g_infty_smallt(double t, int terms, const SpecFunAccuracy& acc) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("g_infty_smallt: t must lie in (0, 1)");
  if (terms < 2) throw DomainError("g_infty_smallt: need at least two terms");
  CompensatedSum s;
  s += 2.0 * t * std::log(1.0 / t);
  s += kSmallTA * t;
  double pow_over_fact = 1.0;  // (-2t)^k / k!
  pow_over_fact *= -2.0 * t;
  double last = 0.0;
  for (int k = 2; k <= terms + 1; ++k) {
    pow_over_fact *= -2.0 * t / k;
    const double term = hurwitz_zeta_nonpos(k, 0.25) * pow_over_fact;
    if (k == terms + 1) {
      last = term;
      break;
    }
    s += -term;
  }
  SeriesResult res{s.value(), terms, std::abs(last)};
  if (res.est_error > acc.abs_tol && res.est_error > 1e-16 * std::abs(res.value))
    throw TruncationError("g_infty_smallt: expansion tail exceeds tolerance");
  return res;
}

cplx zeta(cplx s) {
  if (std::abs(s - 1.0) < 1e-12) throw DomainError("zeta: pole at s = 1");
  if (s.real() < 0.5) throw DomainError("zeta: only Re s >= 1/2 is supported");
  const double height = std::abs(s.imag());
  const int n = static_cast<int>(height) + 20;
  CompensatedSum re, im;
  for (int k = 1; k < n; ++k) {
    const cplx term = std::exp(-s * std::log(static_cast<double>(k)));
    re += term.real();
    im += term.imag();
  }
  const double big_n = n;
  const cplx n_pow = std::exp(-s * std::log(big_n));
  cplx sum(re.value(), im.value());
  sum += n_pow * big_n / (s - 1.0) + 0.5 * n_pow;
  cplx rising = s;
  cplx n_term = n_pow / big_n;
  double fact = 2.0;
  for (int k = 1; k <= 14; ++k) {
    sum += kB2k[k - 1] / fact * rising * n_term;
    rising *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
    n_term /= big_n * big_n;
    fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
  }
  return sum;
}

double zeta_log_derivative(double s) {
  if (!(s > 1.0)) throw DomainError("zeta_log_derivative: s must exceed 1");
  // Complex-step derivative: exact to rounding for a function real on the real axis.
  const double h = 1e-30;
  const cplx z = zeta(cplx(s, h));
  return (z.imag() / h) / z.real();
}

double xi_log_derivative(double s) {
  if (!(s >= 1.0)) throw DomainError("xi_log_derivative: s must be at least 1");
  if (s == 1.0) {
    // 1/(s-1) + zeta'/zeta(s) -> gamma as s -> 1.
    return 1.0 + kEulerGamma - 0.5 * kLogPi + 0.5 * digamma(0.5);
  }
  return 1.0 / (s - 1.0) + 1.0 / s - 0.5 * kLogPi + 0.5 * digamma(0.5 * s) +
         zeta_log_derivative(s);
}

}  // namespace zscrew
