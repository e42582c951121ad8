#include "zscrew/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "zscrew/errors.hpp"

namespace zscrew {

namespace {

inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

inline DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

}  // namespace

DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = two_sum(a.hi, b.hi);
  DoubleDouble t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  const double p = a.hi * b.hi;
  double e = std::fma(a.hi, b.hi, -p);
  e += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p, e);
}

DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
  const double q1 = a.hi / b.hi;
  DoubleDouble r = a - b * DoubleDouble(q1);
  const double q2 = r.hi / b.hi;
  r = r - b * DoubleDouble(q2);
  const double q3 = r.hi / b.hi;
  return DoubleDouble(quick_two_sum(q1, q2)) + DoubleDouble(q3);
}

const QuadratureRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return cache.emplace(n, std::move(rule)).first->second;
}

QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, int per_panel) {
  const QuadratureRule& base = gauss_legendre(per_panel);
  QuadratureRule out;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p], hi = breaks[p + 1];
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int i = 0; i < per_panel; ++i) {
      out.nodes.push_back(mid + half * base.nodes[i]);
      out.weights.push_back(half * base.weights[i]);
    }
  }
  return out;
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights (positive half).
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWk[7];
  double g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXk[j];
    const double f1 = f(c - dx), f2 = f(c + dx);
    k += kWk[j] * (f1 + f2);
    if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
  }
  const double err = std::abs((k - g) * h);
  return {a, b, k * h, err};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, const std::vector<double>& breaks,
                     double abs_tol, double rel_tol, int max_intervals) {
  std::priority_queue<Segment> heap;
  QuadResult res;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] <= breaks[i]) continue;
    heap.push(gk15(f, breaks[i], breaks[i + 1]));
    res.evaluations += 15;
  }
  auto totals = [&heap](double& v, double& e) {
    std::priority_queue<Segment> copy = heap;
    CompensatedSum vs, es;
    while (!copy.empty()) {
      vs += copy.top().value;
      es += copy.top().error;
      copy.pop();
    }
    v = vs.value();
    e = es.value();
  };
  double value = 0.0, error = 0.0;
  totals(value, error);
  int intervals = static_cast<int>(heap.size());
  while (!heap.empty() && error > std::max(abs_tol, rel_tol * std::abs(value))) {
    if (intervals >= max_intervals) {
      res.converged = false;
      break;
    }
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      res.converged = false;
      break;
    }
    heap.pop();
    const Segment l = gk15(f, worst.a, mid), r = gk15(f, mid, worst.b);
    heap.push(l);
    heap.push(r);
    res.evaluations += 30;
    ++intervals;
    value += l.value + r.value - worst.value;
    error += l.error + r.error - worst.error;
    if (intervals % 64 == 0) totals(value, error);
  }
  totals(value, error);
  res.value = value;
  res.error = error;
  return res;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol, int max_intervals) {
  return integrate(f, std::vector<double>{a, b}, abs_tol, rel_tol, max_intervals);
}

double find_root(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw DomainError("find_root: interval does not bracket a root");
  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
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
    const double t = 2.0 * 1.1e-16 * std::abs(b) + 0.5 * tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= t || fb == 0.0) return b;
    if (std::abs(e) >= t && std::abs(fa) > std::abs(fb)) {
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
      if (p > 0)
        q = -q;
      else
        p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(t * q), std::abs(e * q))) {
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
    b += std::abs(d) > t ? d : (m > 0 ? t : -t);
    fb = f(b);
  }
  throw TruncationError("find_root: no convergence");
}

double expint_e1(double x) {
  if (!(x > 0)) throw DomainError("expint_e1: x must be positive");
  if (x < 1.0) {
    // E1(x) = -gamma - log x - sum (-x)^k / (k k!)
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < 60; ++k) {
      term *= -x / k;
      const double add = term / k;
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return -0.57721566490153286061 - std::log(x) - sum;
  }
  // Continued fraction (modified Lentz).
  const double tiny = 1e-300;
  double b = x + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

}  // namespace zscrew
