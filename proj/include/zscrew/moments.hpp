#pragma once

// Moments mu_n = int_0^inf (1/4) e^{-t/2} t^n Psi(t) dt, Li coefficients,
// the exact linear maps between the two sequences, the a/b recurrences and
// Hankel determinants.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "zscrew/mangoldt.hpp"
#include "zscrew/numeric.hpp"
#include "zscrew/zerotable.hpp"

namespace zscrew {

enum class MomentMethod { Quadrature, FromLi };
enum class LiMethod { ZeroSum, FromMoments, Recurrence };

struct MomentSequence {
  std::vector<double> values;      // mu_0 .. mu_N
  std::vector<double> est_errors;  // per entry
  MomentMethod method = MomentMethod::Quadrature;
  // Low-order parts (double-double) when the values came from an exact
  // transform; empty otherwise.
  std::vector<double> lo;
};

struct LiSequence {
  std::vector<double> values;  // lambda_1 .. lambda_M at index 0 .. M-1
  LiMethod method = LiMethod::ZeroSum;
  std::vector<double> lo;      // as MomentSequence::lo
  double at(int n) const;      // 1-based
};

struct MomentOptions {
  double t_cut = 200.0;   // beyond this only the sup bound |Psi| < 0.094 is used
  double rel_tol = 1e-13;
};

struct LaplaceMoment {
  double value = 0.0;
  double est_error = 0.0;
};

// int_0^inf e^{-beta t} t^m Psi(t) dt for m = 0..m_max.  Psi comes from the
// prime side on [0, log(table limit)] and from the zero sum beyond; the part
// past opts.t_cut is bounded, not computed.
std::vector<LaplaceMoment> psi_laplace_moments(double beta, int m_max, const MangoldtTable& table,
                                               const ZeroTable& zeros, const TailModel& tail,
                                               const MomentOptions& opts = {});

MomentSequence moment_sequence(int n_max, const MangoldtTable& table, const ZeroTable& zeros,
                               const TailModel& tail, const MomentOptions& opts = {});

// Plain adaptive quadrature of (1/4) e^{-t/2} t^n psi(t) over [0, t_cut] with
// kinks at `breaks`, plus the sup-bound tail in est_error.
LaplaceMoment moment_mu(int n, const std::function<double(double)>& psi, double t_cut,
                        const std::vector<double>& breaks = {}, double rel_tol = 1e-12);

// (0.094/4) int_{t_cut}^inf e^{-t/2} t^n dt.
double moment_tail_bound(int n, double t_cut);

double li_from_moments(const MomentSequence& mu, int n);
double moments_from_li(const LiSequence& li, int n);
LiSequence li_sequence_from_moments(const MomentSequence& mu, int m);
MomentSequence moment_sequence_from_li(const LiSequence& li, int n_max);

// L maps (mu_0..mu_N) to (lambda_1..lambda_{N+1}); M is its inverse.
struct TransformMatrices {
  Eigen::MatrixXd L;
  Eigen::MatrixXd M;
  double roundtrip_error = 0.0;  // max |L M - I|, |M L - I| in double-double, per-entry relative
};

TransformMatrices transform_matrices(int n);

// Coefficient of mu_k in lambda_n, and of lambda_j in mu_n.
double li_coefficient(int n, int k);
double moment_coefficient(int n, int j);

// a_1..a_{j_max} from lambda by the forward solve of the Li recurrence.
std::vector<double> a_from_li(const LiSequence& li, int j_max);
// The inverse: lambda_1..lambda_M from a_1..a_M.
LiSequence li_from_a(const std::vector<double>& a);

// b_{n,k} for 0 <= k <= n; needs a_1..a_{n-k} (a[0] is a_1).
double b_coeff(int n, int k, const std::vector<double>& a);

// (-1)^n mu_n - [(n+1)! a_{n+1} - sum_{k<n} (-1)^k b_{n,k} mu_k].
double recurrence_residual(int n, const MomentSequence& mu, const std::vector<double>& a);

struct HankelResult {
  double det = 0.0;
  double error_bound = 0.0;        // first-order propagation of the moment errors
  bool positive_definite = false;  // Cholesky succeeded in double-double
  double log_det = 0.0;            // valid when positive_definite
  bool indefinite = false;         // det < -error_bound: accumulated moment error, not an RH verdict
};

// det [mu_{i+j}] (or [mu_{i+j+1}] when shifted), i, j = 0..n.
HankelResult hankel_det(const MomentSequence& mu, int n, bool shifted);

}  // namespace zscrew
