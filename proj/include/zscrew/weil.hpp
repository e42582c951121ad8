#pragma once

// The explicit formula as an executable identity.  The zero side sums a
// test function's transform over zeros; the other side collects the pole
// terms, the prime sums and the archimedean integral of Re digamma.

#include <functional>
#include <vector>

#include "zscrew/mangoldt.hpp"
#include "zscrew/specfun.hpp"
#include "zscrew/zerotable.hpp"

namespace zscrew {

// Compactly supported test function with a closed-form transform
//   transform(z) = int phi(x) e^{izx} dx.
// `tail_coeff` is c in transform(x) ~ c/x^2 + (oscillating) for large real x.
struct TestFunction {
  double support_radius = 0.0;
  std::function<cplx(double)> value;
  std::function<cplx(cplx)> transform;
  double tail_coeff = 0.0;
  bool even = false;
};

// Delta_t(x) = (t - |x|)/2 on |x| <= t, transform (1 - cos zt)/z^2.
TestFunction triangle(double t);

struct ExplicitFormulaReport {
  double zero_side = 0.0;
  double archimedean = 0.0;
  double prime_side = 0.0;   // both prime sums together
  double pole_terms = 0.0;
  double log_pi_term = 0.0;  // log(pi) phi(0)
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double quadrature_error = 0.0;
  double zero_tail = 0.0;
};

struct WeilOptions {
  double cutoff_z = 2e4;     // archimedean integral truncated at |z| = cutoff_z
  int nodes_per_panel = 10;
  double abs_tol = 1e-9;     // quadrature self-check tolerance
};

// Fills the right-hand-side fields; lhs and residual are left at zero.
ExplicitFormulaReport explicit_formula_rhs(const TestFunction& phi, const MangoldtTable& table,
                                           const WeilOptions& opt = {});

// 2 sum Re transform(gamma) plus tail_coeff * tail.est for the cut-off zeros.
double explicit_formula_lhs(const TestFunction& phi, const ZeroTable& zeros, const TailModel& tail);

// Both sides and the residual.
ExplicitFormulaReport explicit_formula_check(const TestFunction& phi, const ZeroTable& zeros,
                                             const TailModel& tail, const MangoldtTable& table,
                                             const WeilOptions& opt = {});

// The two zero sums whose difference is <chi_0, chi_k>.
struct ChiPair {
  double first = 0.0;
  double second = 0.0;
  double tail = 0.0;           // heuristic size of the omitted zeros
  bool near_resonance = false; // |k pi - a gamma| < 1e-6 for some gamma
  double total() const { return first - second; }
};

ChiPair chi_pairing_lhs(int k, double a, const ZeroTable& zeros, const TailModel& tail);
ChiPair chi_pairing_rhs(int k, double a, const MangoldtTable& table);

struct DecayFit {
  double exponent = 0.0;  // p in |<chi_0, chi_k>| ~ log k / k^p
  std::vector<double> values;
};

// Least-squares slope of log(envelope_k / log k) against log k over
// k in [k_min, k_max], where envelope_k = max_{j >= k} |<chi_0, chi_j>|.
DecayFit chi_decay_fit(double a, const MangoldtTable& table, int k_min = 8, int k_max = 64);

}  // namespace zscrew
