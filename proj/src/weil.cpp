#include "zscrew/weil.hpp"

#include <algorithm>
#include <cmath>

#include "zscrew/errors.hpp"
#include "zscrew/numeric.hpp"

namespace zscrew {

namespace {

constexpr cplx kI(0.0, 1.0);

double sign_k(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// Prime powers with log n <= x, as (log n, Lambda(n)/sqrt(n)).
template <typename F>
void for_prime_powers(const MangoldtTable& table, double x, F&& f) {
  const std::size_t count = table.count_upto_log(x);
  for (std::size_t i = 0; i < count; ++i) {
    const double n = static_cast<double>(table.prime_power(i));
    f(std::log(n), table.lambda_at(i) / std::sqrt(n));
  }
}

double archimedean_integral(const TestFunction& phi, int nodes, double z_max) {
  // Re digamma(1/4 + iz/2) has poles at distance 1/2 from the real axis, so
  // panels start short near the origin.
  const double h_far = std::min(1.0, kPi / (2.0 * std::max(phi.support_radius, 1e-3)));
  std::vector<double> breaks{0.0};
  while (breaks.back() < z_max) {
    const double z = breaks.back();
    const double h = std::min(h_far, 0.1 + 0.1 * z);
    breaks.push_back(std::min(z_max, z + h));
  }
  const QuadratureRule rule = composite_gauss_legendre(breaks, nodes);
  CompensatedSum s;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double z = rule.nodes[j];
    const double re_psi = digamma(cplx(0.25, 0.5 * z)).real();
    double ft = phi.transform(cplx(z, 0.0)).real();
    ft += phi.even ? ft : phi.transform(cplx(-z, 0.0)).real();
    s += rule.weights[j] * re_psi * ft;
  }
  return s.value() / (2.0 * kPi);
}

}  // namespace

TestFunction triangle(double t) {
  if (!(t > 0.0)) throw DomainError("triangle: t must be positive");
  TestFunction f;
  f.support_radius = t;
  f.tail_coeff = 1.0;
  f.even = true;
  f.value = [t](double x) { return cplx(std::abs(x) <= t ? 0.5 * (t - std::abs(x)) : 0.0, 0.0); };
  f.transform = [t](cplx z) {
    const cplx w = z * t;
    if (std::abs(w) < 1e-4) return cplx(0.5 * t * t) * (1.0 - w * w / 12.0);
    const cplx s = std::sin(0.5 * w);
    return 2.0 * s * s / (z * z);
  };
  return f;
}

ExplicitFormulaReport explicit_formula_rhs(const TestFunction& phi, const MangoldtTable& table,
                                           const WeilOptions& opt) {
  if (phi.support_radius > table.log_limit())
    throw RangeError("explicit_formula_rhs: support exceeds the prime table");
  ExplicitFormulaReport r;
  r.pole_terms = (phi.transform(cplx(0.0, 0.5)) + phi.transform(cplx(0.0, -0.5))).real();

  CompensatedSum primes;
  for_prime_powers(table, phi.support_radius, [&](double log_n, double w) {
    primes += w * (phi.value(log_n).real() + phi.value(-log_n).real());
  });
  r.prime_side = primes.value();
  r.log_pi_term = kLogPi * phi.value(0.0).real();

  const double z = opt.cutoff_z;
  const double fine = archimedean_integral(phi, opt.nodes_per_panel, z);
  const double coarse = archimedean_integral(phi, std::max(4, opt.nodes_per_panel - 2), z);
  r.quadrature_error = std::abs(fine - coarse);
  if (r.quadrature_error > opt.abs_tol)
    throw TruncationError("explicit_formula_rhs: archimedean quadrature did not converge");
  // Beyond |z| = Z the non-oscillating c/z^2 part of the transform against log(z/2).
  const double tail = phi.tail_coeff * (std::log(0.5 * z) + 1.0) / (kPi * z);
  r.archimedean = fine + tail;

  r.rhs = r.pole_terms - r.prime_side - r.log_pi_term + r.archimedean;
  return r;
}

double explicit_formula_lhs(const TestFunction& phi, const ZeroTable& zeros, const TailModel& tail) {
  CompensatedSum s;
  for (const double g : zeros.ordinates) {
    double v = phi.transform(cplx(g, 0.0)).real();
    v += phi.even ? v : phi.transform(cplx(-g, 0.0)).real();
    s += v;
  }
  return s.value() + phi.tail_coeff * tail.est;
}

ExplicitFormulaReport explicit_formula_check(const TestFunction& phi, const ZeroTable& zeros,
                                             const TailModel& tail, const MangoldtTable& table,
                                             const WeilOptions& opt) {
  ExplicitFormulaReport r = explicit_formula_rhs(phi, table, opt);
  r.zero_side = explicit_formula_lhs(phi, zeros, tail);
  r.zero_tail = phi.tail_coeff * tail.est;
  r.lhs = r.zero_side;
  r.residual = r.lhs - r.rhs;
  return r;
}

ChiPair chi_pairing_lhs(int k, double a, const ZeroTable& zeros, const TailModel& tail) {
  if (k < 1) throw DomainError("chi_pairing_lhs: k must be at least 1");
  if (!(a > 0.0)) throw DomainError("chi_pairing_lhs: a must be positive");
  const double sk = sign_k(k);
  const double kpi = k * kPi;
  ChiPair r;
  CompensatedSum s1, s2;
  for (const double g : zeros.ordinates) {
    const double ag = a * g;
    const double d = ag - kpi;
    if (std::abs(d) < 1e-6) r.near_resonance = true;
    const double sh = std::sin(0.5 * ag);
    const double cos_m1 = -2.0 * sh * sh;
    const double first = cos_m1 / (g * g);
    const double second = (ag * std::cos(ag) - std::sin(ag)) / (a * g * g * g);
    // +gamma and -gamma; the second uses sin(a gamma)/(k pi - a gamma) = -(-1)^k sinc(d).
    const double f = sk * 2.0 * a * std::sin(ag) / (kpi + ag) + 2.0 * a * sinc(d);
    s1 += first * f;
    s2 += second * f;
  }
  r.first = s1.value();
  r.second = s2.value();
  // Paired terms are O(1/gamma^3); integrate 8/u^3 against the density.
  if (tail.mode == TailMode::DensityIntegral) {
    const double x = tail.cutoff;
    r.tail = 2.0 / kPi * (std::log(x / (2.0 * kPi)) + 0.5) / (x * x);
  }
  return r;
}

ChiPair chi_pairing_rhs(int k, double a, const MangoldtTable& table) {
  if (k < 1) throw DomainError("chi_pairing_rhs: k must be at least 1");
  if (!(a > 0.0)) throw DomainError("chi_pairing_rhs: a must be positive");
  if (2.0 * a > table.log_limit()) throw RangeError("chi_pairing_rhs: e^{2a} exceeds the prime table");
  const double sk = sign_k(k);
  const double pk = kPi * k;
  const double pk2 = pk * pk;
  const double a2 = a * a;
  const double den = 4.0 * pk2 + a2;

  const cplx ia2(0.0, 0.5 * a);
  const cplx sin_ia2 = std::sin(ia2), cos_ia2 = std::cos(ia2);
  const cplx psi_p = digamma(cplx(0.25, pk / (2.0 * a)));
  const cplx psi_m = digamma(cplx(0.25, -pk / (2.0 * a)));
  const double psi_q = digamma(0.25);

  CompensatedSum r1, r2;
  r1 += (sk * 32.0 * a2 * kI * (cos_ia2 - 1.0) * sin_ia2 / den).real();
  r2 += (64.0 * a * (ia2 * cos_ia2 - sin_ia2) * sk * sin_ia2 / den).real();

  for_prime_powers(table, 2.0 * a, [&](double log_n, double w) {
    const double c = std::cos(pk * log_n / a);
    if (log_n <= a)
      r1 += -w * a2 / pk2 * ((sk - 2.0) * c + sk);
    else
      r1 += -w * a2 * sk / pk2 * (c - 1.0);
    r2 += -a2 * w * sk / (pk2 * pk) * std::sin(pk * log_n / a);
    r2 += a * w * sk / pk2 * ((log_n - a) - a * c);
  });

  r1 += -a2 / pk2 * (sk - 1.0) * kLogPi;
  r2 += -a2 * sk / pk2 * kLogPi;

  CompensatedSum e1, e2;
  for (long n = 0;; ++n) {
    if (n > 10000000) throw TruncationError("chi_pairing_rhs: exponential series did not converge");
    const double m = 4.0 * n + 1.0;
    const double q = a2 * m * m + 4.0 * pk2;
    const double t1 = (std::exp(-a * m) - 2.0 * std::exp(-0.5 * a * m)) / (m * q);
    const double t2 = (a * m + 2.0) * std::exp(-a * m) / (m * m * q);
    e1 += t1;
    e2 += t2;
    // Terms shrink at least geometrically with ratio e^{-2a}.
    const double ratio = std::exp(-2.0 * a);
    if (std::abs(t1) * ratio / (1.0 - ratio) < 1e-20 && std::abs(t2) * ratio / (1.0 - ratio) < 1e-20)
      break;
  }
  r1 += 8.0 * a2 * (-sk) * e1.value();
  r2 += 8.0 * a * (-sk) * e2.value();

  r1 += a2 * sk * (1.0 - 2.0 * sk) / (4.0 * pk2) * (psi_p + psi_m).real();
  r1 += a2 * sk / (2.0 * pk2) * psi_q;
  r2 += (a2 * kI * sk / (4.0 * pk2 * pk) * (psi_p * (1.0 - kI * pk) - psi_m * (1.0 + kI * pk))).real();
  r2 += a * sk / (4.0 * pk2) * (2.0 * a * psi_q + trigamma(0.25));

  ChiPair r;
  r.first = r1.value();
  r.second = r2.value();
  return r;
}

DecayFit chi_decay_fit(double a, const MangoldtTable& table, int k_min, int k_max) {
  if (k_min < 2 || k_max <= k_min + 1) throw DomainError("chi_decay_fit: need 2 <= k_min < k_max - 1");
  DecayFit fit;
  for (int k = k_min; k <= k_max; ++k) fit.values.push_back(chi_pairing_rhs(k, a, table).total());
  const std::size_t n = fit.values.size();
  std::vector<double> env(n);
  double run = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    run = std::max(run, std::abs(fit.values[i]));
    env[i] = run;
  }
  double mx = 0, my = 0;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = k_min + static_cast<double>(i);
    xs[i] = std::log(k);
    ys[i] = std::log(env[i] / std::log(k));
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  fit.exponent = -sxy / sxx;
  return fit;
}

}  // namespace zscrew
