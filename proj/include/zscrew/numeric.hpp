#pragma once

// Shared numerical kernels: compensated summation, double-double arithmetic
// and quadrature rules.

#include <cmath>
#include <functional>
#include <vector>

namespace zscrew {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2, about 32 significant digits.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  DoubleDouble() = default;
  DoubleDouble(double x) : hi(x), lo(0.0) {}
  DoubleDouble(double h, double l) : hi(h), lo(l) {}

  double to_double() const { return hi + lo; }
};

DoubleDouble operator+(DoubleDouble a, DoubleDouble b);
DoubleDouble operator-(DoubleDouble a, DoubleDouble b);
DoubleDouble operator*(DoubleDouble a, DoubleDouble b);
DoubleDouble operator/(DoubleDouble a, DoubleDouble b);
inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline bool operator<(DoubleDouble a, DoubleDouble b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline DoubleDouble abs(DoubleDouble a) { return a.hi < 0 ? -a : a; }

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].  Rules are cached per n.
const QuadratureRule& gauss_legendre(int n);

// Gauss-Legendre rule mapped onto consecutive panels [b_i, b_{i+1}].
QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, int per_panel);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool converged = true;
};

// Globally adaptive Gauss-Kronrod (G7/K15) quadrature on [a, b].  Stops when
// the summed error estimate drops below max(abs_tol, rel_tol * |value|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol = 1e-14, int max_intervals = 4000);

// Adaptive quadrature with forced breakpoints, for integrands with kinks.
QuadResult integrate(const std::function<double(double)>& f, const std::vector<double>& breaks,
                     double abs_tol, double rel_tol = 1e-14, int max_intervals = 4000);

// Brent's method on a sign-changing bracket.
double find_root(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-15, int max_iter = 200);

// Exponential integral E1(x) for x > 0.
double expint_e1(double x);

}  // namespace zscrew
