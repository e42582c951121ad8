// make_zero_table: writes ordinates of the first N nontrivial zeros of zeta
// in the plain-text format read by zscrew::load_zeros.
//
// Zeros are bracketed on a grid that subdivides each Gram interval, with a
// local-extremum search that recovers close pairs the grid straddles, then
// polished with Brent's method.  Z(t) is the Riemann-Siegel main sum plus the
// C0..C4 correction terms (tools/rs_coefficients.hpp).  Below kLowHeight the
// Riemann-Siegel remainder is too coarse, so Z(t) is evaluated there from an
// Euler-Maclaurin sum for zeta(1/2 + it) instead.
//
// After the scan, N(g_n) - (n + 1) is tallied at every Gram point g_n: a
// missed pair would show as a persistent negative offset, and the tool exits
// nonzero if the offset is not back to zero at the last Gram point.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rs_coefficients.hpp"

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLowHeight = 2000.0;

double theta(double t) {
  const double t2 = t * t;
  return 0.5 * t * std::log(t / kTwoPi) - 0.5 * t - kPi / 8.0 + 1.0 / (48.0 * t) +
         7.0 / (5760.0 * t * t2) + 31.0 / (80640.0 * t * t2 * t2) +
         127.0 / (430080.0 * t * t2 * t2 * t2);
}

double theta_prime(double t) { return 0.5 * std::log(t / kTwoPi); }

double correction(int k, double x) {
  const auto& c = rs::kCorrection[k];
  double acc = 0.0;
  for (int i = rs::kDegree; i >= 0; --i) acc = acc * x + c[i];
  return acc;
}

double z_riemann_siegel(double t) {
  const double a = std::sqrt(t / kTwoPi);
  const auto n_max = static_cast<long>(std::floor(a));
  const double th = theta(t);
  double sum = 0.0;
  for (long n = 1; n <= n_max; ++n) {
    const double ln = std::log(static_cast<double>(n));
    sum += std::cos(th - t * ln) / std::sqrt(static_cast<double>(n));
  }
  sum *= 2.0;
  const double p = a - static_cast<double>(n_max);
  const double x = p - 0.5;
  const double tau = 1.0 / a;
  double rem = 0.0;
  double pow_tau = 1.0;
  for (int k = 0; k < 5; ++k) {
    rem += correction(k, x) * pow_tau;
    pow_tau *= tau;
  }
  const double sign = (n_max - 1) % 2 == 0 ? 1.0 : -1.0;
  return sum + sign * rem / std::sqrt(a);
}

// Euler-Maclaurin for zeta(s), s = 1/2 + it, then Z = Re(e^{i theta} zeta).
double z_euler_maclaurin(double t) {
  using cd = std::complex<double>;
  static const double kB2k[] = {1.0 / 6,         -1.0 / 30,      1.0 / 42,
                                -1.0 / 30,       5.0 / 66,       -691.0 / 2730,
                                7.0 / 6,         -3617.0 / 510,  43867.0 / 798,
                                -174611.0 / 330, 854513.0 / 138, -236364091.0 / 2730};
  const cd s(0.5, t);
  const int n = static_cast<int>(t) + 30;
  cd sum = 0.0;
  for (int k = 1; k < n; ++k) sum += std::exp(-s * std::log(static_cast<double>(k)));
  const double big_n = n;
  const cd n_pow = std::exp(-s * std::log(big_n));
  sum += n_pow * big_n / (s - 1.0) + 0.5 * n_pow;
  cd rising = s;  // s (s+1) ... (s+2k-2)
  cd n_term = n_pow / big_n;
  double fact = 2.0;  // (2k)!
  for (int k = 1; k <= 12; ++k) {
    sum += kB2k[k - 1] / fact * rising * n_term;
    rising *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
    n_term /= big_n * big_n;
    fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
  }
  return (std::exp(cd(0.0, theta(t))) * sum).real();
}

double z_function(double t) {
  return t < kLowHeight ? z_euler_maclaurin(t) : z_riemann_siegel(t);
}

double gram_point(long n, double guess) {
  double g = guess;
  for (int i = 0; i < 50; ++i) {
    const double step = (theta(g) - kPi * static_cast<double>(n)) / theta_prime(g);
    g -= step;
    if (std::abs(step) < 1e-13 * g) break;
  }
  return g;
}

double brent_root(double a, double b, double fa, double fb) {
  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 0; iter < 100; ++iter) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 4e-16 * std::abs(b) + 1e-15;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = d;
      }
    } else {
      d = m;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0 ? tol : -tol);
    fb = z_function(b);
  }
  return b;
}

// Golden-section search for the extremum of sign * Z on [a, c]; returns the
// abscissa where sign * Z is smallest.
double golden_extremum(double a, double c, double sign) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = c - r * (c - a), x2 = a + r * (c - a);
  double f1 = sign * z_function(x1), f2 = sign * z_function(x2);
  for (int i = 0; i < 60 && c - a > 1e-12 * c; ++i) {
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - r * (c - a);
      f1 = sign * z_function(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (c - a);
      f2 = sign * z_function(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

struct Sample {
  double t;
  double z;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate a table of nontrivial zeta zero ordinates"};
  long count = 100000;
  int per_gram = 12;
  std::string out_path;
  app.add_option("-n,--count", count, "number of zeros")->check(CLI::PositiveNumber);
  app.add_option("--samples-per-gram", per_gram, "grid points per Gram interval")
      ->check(CLI::Range(4, 256));
  app.add_option("-o,--out", out_path, "output file (default stdout)");
  CLI11_PARSE(app, argc, argv);

  std::vector<double> zeros;
  zeros.reserve(static_cast<std::size_t>(count));
  std::vector<double> gram;  // g_{-1}, g_0, ...

  std::vector<Sample> window;  // last three grid samples
  auto push_zero = [&](double z) {
    if (zeros.empty() || z > zeros.back() + 1e-9) zeros.push_back(z);
  };

  long n = -1;
  double g_lo = gram_point(-1, 9.7);
  gram.push_back(g_lo);
  window.push_back({g_lo, z_function(g_lo)});
  while (static_cast<long>(zeros.size()) < count + 5) {
    const double guess = g_lo + kPi / theta_prime(g_lo);
    const double g_hi = gram_point(n + 1, guess);
    gram.push_back(g_hi);
    for (int i = 1; i <= per_gram; ++i) {
      const double t = g_lo + (g_hi - g_lo) * static_cast<double>(i) / per_gram;
      Sample s{t, z_function(t)};
      const Sample prev = window.back();
      if ((prev.z > 0) != (s.z > 0)) {
        push_zero(brent_root(prev.t, s.t, prev.z, s.z));
      } else if (window.size() >= 2) {
        const Sample pp = window[window.size() - 2];
        const bool same = (pp.z > 0) == (prev.z > 0);
        if (same && std::abs(prev.z) < std::abs(pp.z) && std::abs(prev.z) < std::abs(s.z)) {
          const double sign = prev.z > 0 ? 1.0 : -1.0;
          const double x = golden_extremum(pp.t, s.t, sign);
          const double zx = z_function(x);
          if ((zx > 0) != (prev.z > 0)) {
            // Close pair straddled by the grid.
            push_zero(brent_root(pp.t, x, pp.z, zx));
            push_zero(brent_root(x, s.t, zx, s.z));
          }
        }
      }
      window.push_back(s);
      if (window.size() > 3) window.erase(window.begin());
    }
    g_lo = g_hi;
    ++n;
  }

  // Gram-point bookkeeping: offset = N(g_k) - (k + 1).
  std::size_t idx = 0;
  long worst = 0;
  long last_offset = 0;
  for (std::size_t k = 0; k < gram.size(); ++k) {
    while (idx < zeros.size() && zeros[idx] <= gram[k]) ++idx;
    if (zeros.back() < gram[k]) break;
    const long offset = static_cast<long>(idx) - static_cast<long>(k);  // k-th entry is g_{k-1}
    worst = std::min(worst, offset);
    last_offset = offset;
  }
  std::cerr << "zeros found: " << zeros.size() << ", last ordinate " << zeros.back()
            << ", min Gram offset " << worst << ", final offset " << last_offset << "\n";

  zeros.resize(static_cast<std::size_t>(count));
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "cannot open " << out_path << "\n";
      return 2;
    }
    out = &file;
  }
  *out << "# ordinates of the first " << count
       << " nontrivial zeros of zeta (Riemann-Siegel, make_zero_table)\n";
  char buf[64];
  for (double z : zeros) {
    std::snprintf(buf, sizeof buf, "%.12f\n", z);
    *out << buf;
  }
  return last_offset == 0 ? 0 : 3;
}
