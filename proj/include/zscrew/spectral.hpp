#pragma once

// The integral operator with kernel G(t,u) = Psi(t) + Psi(u) - Psi(t-u) on
// [-a, a]: discretization, spectrum, and the equivalent linear system indexed
// by zeta zeros.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "zscrew/mangoldt.hpp"
#include "zscrew/zerotable.hpp"

namespace zscrew {

enum class OperatorMethod {
  Nystrom,          // composite Gauss-Legendre on panels split at the kinks of Psi
  NystromPlain,     // one Gauss-Legendre rule on [-a, a]
  NystromMidpoint,  // equal cells, midpoint nodes
  Galerkin,         // piecewise Legendre basis on panels split at the kinks of Psi
};

struct DiscretizeOptions {
  OperatorMethod method = OperatorMethod::Nystrom;
  int threads = 1;  // matrix assembly; results do not depend on it
};

struct OperatorDiscretization {
  double a = 0.0;
  OperatorMethod method = OperatorMethod::Nystrom;
  // Nystrom: the nodes and weights of the matrix.  Galerkin: a composite rule
  // on the panels, used only for the trace.
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> psi_at_nodes;
  // Nystrom: sqrt(w_i) G(t_i, t_j) sqrt(w_j).  Galerkin: <b_i, G b_j>.
  Eigen::MatrixXd sym_matrix;
};

struct SpectrumReport {
  std::vector<double> eigenvalues;  // descending
  double trace_quadrature = 0.0;    // sum_i w_i 2 Psi(t_i)
  double trace_eigsum = 0.0;
  double min_eig = 0.0;
  double spectral_floor = 0.0;  // 1e-12 * largest |eigenvalue|
  int numerically_zero = 0;     // eigenvalues with |lambda| below the floor
};

// Psi from the prime side, extended evenly with Psi(0) = 0.
std::function<double(double)> prime_side_psi(const MangoldtTable& table);
// The zero sum without tail correction, for cross-checks.
std::function<double(double)> zero_side_psi(const ZeroTable& zeros);

// psi must be accurate on [0, 2a].  n >= 8 is the matrix size; the panel
// layouts round it up to even.  Galerkin also needs a <= 6 so that the kinks
// at log m, m <= e^{2a}, can be listed.
OperatorDiscretization discretize(double a, int n, const std::function<double(double)>& psi,
                                  const DiscretizeOptions& opts = {});

SpectrumReport spectrum(const OperatorDiscretization& disc);

// H(x,y;a) = (2a/(xy)) (sinc(a(x-y)) - sinc(ax) - sinc(ay) + 1).
double h_kernel(double x, double y, double a);

// The 2m x 2m matrix [H(x_i, x_j; a)] over x = (g_1..g_m, -g_1..-g_m).
Eigen::MatrixXd zero_system_matrix(double a, const ZeroTable& zeros, int m);
// Its eigenvalues, descending, from the blocks A + B and A - B.
std::vector<double> zero_system_spectrum(double a, const ZeroTable& zeros, int m);

// The system leaves out the zeros past gamma_m.  Their functions
// (e^{ixt} - 1)/x are close to -1/x on [-a, a], so together they act as
// tau 1 (x) 1 with tau = sum over the omitted +-gamma of 1/gamma^2, estimated
// from the zero density.  Adding the function sqrt(tau) 1 to the system
// accounts for them.
struct ZeroSystemReport {
  std::vector<double> eigenvalues;  // descending, as zero_system_spectrum
  std::vector<double> corrected;    // descending, with the tail function added
  double tail_weight = 0.0;         // tau
};
// Needs gamma_m >= 100 for the density estimate.
ZeroSystemReport zero_system_report(double a, const ZeroTable& zeros, int m);

// K(t,u) = (|t| + |u| - |t-u|) / 2.
double k_kernel(double t, double u);
// K(t,u;y) for real y; tends to K(t,u) as y -> 0.
double k_kernel(double t, double u, double y);

}  // namespace zscrew
