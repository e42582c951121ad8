#include "zscrew/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zscrew/errors.hpp"
#include "zscrew/specfun.hpp"

namespace zscrew {

namespace {

constexpr double kPsiSup = 0.094;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

DoubleDouble dd_factorial(int n) {
  DoubleDouble f(1.0);
  for (int i = 2; i <= n; ++i) f = f * DoubleDouble(i);
  return f;
}

DoubleDouble dd_binomial(int n, int k) {
  if (k < 0 || k > n) return DoubleDouble(0.0);
  k = std::min(k, n - k);
  DoubleDouble c(1.0);
  for (int i = 1; i <= k; ++i) c = c * DoubleDouble(n - k + i) / DoubleDouble(i);
  return c;
}

// Coefficient of mu_k in lambda_n: n C(n-1,k) ((2k-4n+1)^2 + 8n + 7) (-1)^k / (4 (k+3)!).
DoubleDouble dd_li_coefficient(int n, int k) {
  if (n < 1 || k < 0 || k >= n) return DoubleDouble(0.0);
  const double h = 2.0 * k - 4.0 * n + 1.0;
  const DoubleDouble num = DoubleDouble(n) * dd_binomial(n - 1, k) * DoubleDouble(h * h + 8.0 * n + 7.0);
  const DoubleDouble c = num / (DoubleDouble(4.0) * dd_factorial(k + 3));
  return k % 2 == 0 ? c : -c;
}

// Coefficient of lambda_j in mu_n.
DoubleDouble dd_moment_coefficient(int n, int j) {
  if (n < 0 || j < 1 || j > n + 1) return DoubleDouble(0.0);
  DoubleDouble s(0.0);
  for (int k = 1; k <= n - j + 2; ++k)
    s = s + DoubleDouble(k * std::ldexp(1.0, k - 1)) * dd_binomial(n - k + 2, j);
  const DoubleDouble c = dd_factorial(n) * s;
  return j % 2 == 1 ? c : -c;
}

DoubleDouble entry(const std::vector<double>& hi, const std::vector<double>& lo, std::size_t i) {
  return lo.size() == hi.size() ? DoubleDouble(hi[i], lo[i]) : DoubleDouble(hi[i]);
}

void split(DoubleDouble v, std::vector<double>& hi, std::vector<double>& lo) {
  const double h = v.to_double();
  hi.push_back(h);
  lo.push_back((DoubleDouble(v.hi, v.lo) - DoubleDouble(h)).to_double());
}

// F_m(x) = int_x^inf e^{-beta t} t^m dt for m = 0..m_max, by
// F_m = e^{-beta x} x^m / beta + (m / beta) F_{m-1}.
template <typename T>
std::vector<T> upper_moments(T beta, double x, int m_max) {
  std::vector<T> f(m_max + 1);
  const T e = std::exp(-beta * x);
  double xm = 1.0;
  f[0] = e / beta;
  for (int m = 1; m <= m_max; ++m) {
    xm *= x;
    f[m] = (e * xm + static_cast<double>(m) * f[m - 1]) / beta;
  }
  return f;
}

void require_moments(const MomentSequence& mu, std::size_t count, const char* what) {
  if (mu.values.size() < count)
    throw DomainError(std::string(what) + ": insufficient moments (need " + std::to_string(count) +
                      ", have " + std::to_string(mu.values.size()) + ")");
}

}  // namespace

double LiSequence::at(int n) const {
  if (n < 1 || static_cast<std::size_t>(n) > values.size())
    throw DomainError("LiSequence: index " + std::to_string(n) + " out of range");
  return values[n - 1];
}

double moment_tail_bound(int n, double t_cut) {
  return 0.25 * kPsiSup * upper_moments(0.5, t_cut, n)[n];
}

std::vector<LaplaceMoment> psi_laplace_moments(double beta, int m_max, const MangoldtTable& table,
                                               const ZeroTable& zeros, const TailModel& tail,
                                               const MomentOptions& opts) {
  if (!(beta > 0.0)) throw DomainError("psi_laplace_moments: beta must be positive");
  if (m_max < 0) throw DomainError("psi_laplace_moments: m_max must be nonnegative");
  const double t_cut = opts.t_cut;
  const double t1 = std::min(table.log_limit(), t_cut);
  if (t1 < t_cut && zeros.ordinates.empty())
    throw RangeError("psi_laplace_moments: prime table ends before t_cut and no zeros are given");

  std::vector<LaplaceMoment> out(m_max + 1);

  // Prime side on [0, t1]: the smooth part by adaptive quadrature, the prime
  // sum exactly, since phi(t) is piecewise linear.
  const std::vector<double> f_t1 = upper_moments(beta, t1, m_max + 1);
  std::vector<CompensatedSum> prime_sums(m_max + 1);
  std::vector<double> prime_abs(m_max + 1, 0.0);
  const std::size_t count = table.count_upto_log(t1);
  for (std::size_t i = 0; i < count; ++i) {
    const double n = static_cast<double>(table.prime_power(i));
    const double log_n = std::log(n);
    const double w = table.lambda_at(i) / std::sqrt(n);
    const std::vector<double> f = upper_moments(beta, log_n, m_max + 1);
    for (int m = 0; m <= m_max; ++m) {
      // int_{log n}^{t1} e^{-beta t} t^m (t - log n) dt
      const double v = (f[m + 1] - f_t1[m + 1]) - log_n * (f[m] - f_t1[m]);
      prime_sums[m] += w * v;
      prime_abs[m] += w * (f[m + 1] + log_n * f[m]);
    }
  }
  for (int m = 0; m <= m_max; ++m) {
    const auto g = [&](double t) {
      return std::exp(-beta * t) * std::pow(t, m) * psi_smooth_part(t).value;
    };
    const QuadResult q = integrate(g, 0.0, t1, 1e-300, opts.rel_tol, 20000);
    if (!q.converged) throw TruncationError("psi_laplace_moments: smooth-part quadrature failed");
    out[m].value = q.value - prime_sums[m].value();
    out[m].est_error = q.error + 4e-16 * (std::abs(q.value) + prime_abs[m]);
  }

  // Zero side on [t1, t_cut]: Psi = 2 sum (1 - cos gamma t)/gamma^2 + omitted
  // terms.  Its mean level 2 sum 1/gamma^2 over all zeros is
  // 2 lambda_1 + sum 1/(2 gamma^2 (gamma^2 + 1/4)), whose tail is O(X^{-3}).
  if (t1 < t_cut) {
    const std::vector<double> f_a = upper_moments(beta, t1, m_max);
    const std::vector<double> f_b = upper_moments(beta, t_cut, m_max);
    CompensatedSum level_sum;
    level_sum += 2.0 * xi_log_derivative(1.0);
    std::vector<CompensatedSum> osc(m_max + 1);
    for (const double g : zeros.ordinates) {
      const double g2 = g * g;
      level_sum += 0.5 / (g2 * (g2 + 0.25));
      const double c = 2.0 / g2;
      const cplx bz(beta, -g);
      const std::vector<cplx> ja = upper_moments(bz, t1, m_max);
      const std::vector<cplx> jb = upper_moments(bz, t_cut, m_max);
      for (int m = 0; m <= m_max; ++m) osc[m] += c * (ja[m] - jb[m]).real();
    }
    const double x = zeros.cutoff();
    // int_X^inf du / (2 u^4) against the density, to leading order.
    const double level_tail = std::log(x / (2.0 * kPi)) / (12.0 * kPi * x * x * x);
    level_sum += level_tail;
    const double level = level_sum.value();
    // Each omitted zero's oscillating part, integrated by parts, is at most
    // 3 max(weight) / gamma times 2/gamma^2; summed that is 3 max(weight) est / X.
    const double est = tail.mode == TailMode::None ? tail_sigma2(x) : tail.est;
    for (int m = 0; m <= m_max; ++m) {
      const double j = f_a[m] - f_b[m];
      out[m].value += level * j - osc[m].value();
      const double t_peak = std::clamp(m / beta, t1, t_cut);
      const double w_max = std::exp(-beta * t_peak) * std::pow(t_peak, m);
      out[m].est_error += (level_tail + 1e-15 * level) * j + est * 3.0 * w_max / x;
    }
  }

  const std::vector<double> f_cut = upper_moments(beta, t_cut, m_max);
  for (int m = 0; m <= m_max; ++m) out[m].est_error += kPsiSup * f_cut[m];
  return out;
}

MomentSequence moment_sequence(int n_max, const MangoldtTable& table, const ZeroTable& zeros,
                               const TailModel& tail, const MomentOptions& opts) {
  if (opts.t_cut < 40.0) throw DomainError("moment_sequence: t_cut must be at least 40");
  const std::vector<LaplaceMoment> lm = psi_laplace_moments(0.5, n_max, table, zeros, tail, opts);
  MomentSequence mu;
  mu.method = MomentMethod::Quadrature;
  for (const LaplaceMoment& v : lm) {
    mu.values.push_back(0.25 * v.value);
    mu.est_errors.push_back(0.25 * v.est_error);
  }
  return mu;
}

LaplaceMoment moment_mu(int n, const std::function<double(double)>& psi, double t_cut,
                        const std::vector<double>& breaks, double rel_tol) {
  if (n < 0) throw DomainError("moment_mu: n must be nonnegative");
  if (!(t_cut > 0.0)) throw DomainError("moment_mu: t_cut must be positive");
  std::vector<double> b{0.0};
  for (double x : breaks)
    if (x > 0.0 && x < t_cut) b.push_back(x);
  b.push_back(t_cut);
  std::sort(b.begin(), b.end());
  const auto g = [&](double t) { return 0.25 * std::exp(-0.5 * t) * std::pow(t, n) * psi(t); };
  const QuadResult q = integrate(g, b, 1e-300, rel_tol, 20000);
  if (!q.converged) throw TruncationError("moment_mu: quadrature did not converge");
  return {q.value, q.error + moment_tail_bound(n, t_cut)};
}

double li_coefficient(int n, int k) { return dd_li_coefficient(n, k).to_double(); }

double moment_coefficient(int n, int j) { return dd_moment_coefficient(n, j).to_double(); }

namespace {

DoubleDouble dd_li_from_moments(const MomentSequence& mu, int n) {
  DoubleDouble s(0.0);
  for (int k = 0; k < n; ++k) s = s + dd_li_coefficient(n, k) * entry(mu.values, mu.lo, k);
  return s;
}

DoubleDouble dd_moments_from_li(const LiSequence& li, int n) {
  DoubleDouble s(0.0);
  for (int j = 1; j <= n + 1; ++j) s = s + dd_moment_coefficient(n, j) * entry(li.values, li.lo, j - 1);
  return s;
}

}  // namespace

double li_from_moments(const MomentSequence& mu, int n) {
  if (n < 1) throw DomainError("li_from_moments: n must be at least 1");
  require_moments(mu, n, "li_from_moments");
  return dd_li_from_moments(mu, n).to_double();
}

double moments_from_li(const LiSequence& li, int n) {
  if (n < 0) throw DomainError("moments_from_li: n must be nonnegative");
  if (li.values.size() < static_cast<std::size_t>(n + 1))
    throw DomainError("moments_from_li: insufficient Li coefficients");
  return dd_moments_from_li(li, n).to_double();
}

LiSequence li_sequence_from_moments(const MomentSequence& mu, int m) {
  require_moments(mu, m, "li_sequence_from_moments");
  LiSequence li;
  li.method = LiMethod::FromMoments;
  for (int n = 1; n <= m; ++n) split(dd_li_from_moments(mu, n), li.values, li.lo);
  return li;
}

MomentSequence moment_sequence_from_li(const LiSequence& li, int n_max) {
  if (li.values.size() < static_cast<std::size_t>(n_max + 1))
    throw DomainError("moment_sequence_from_li: insufficient Li coefficients");
  MomentSequence mu;
  mu.method = MomentMethod::FromLi;
  for (int n = 0; n <= n_max; ++n) {
    split(dd_moments_from_li(li, n), mu.values, mu.lo);
    mu.est_errors.push_back(0.0);
  }
  return mu;
}

TransformMatrices transform_matrices(int n) {
  if (n < 0 || n > 64) throw DomainError("transform_matrices: N must lie in [0, 64]");
  const int d = n + 1;
  std::vector<std::vector<DoubleDouble>> l(d, std::vector<DoubleDouble>(d)), m = l;
  TransformMatrices t;
  t.L = Eigen::MatrixXd::Zero(d, d);
  t.M = Eigen::MatrixXd::Zero(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c <= r; ++c) {
      l[r][c] = dd_li_coefficient(r + 1, c);
      m[r][c] = dd_moment_coefficient(r, c + 1);
      t.L(r, c) = l[r][c].to_double();
      t.M(r, c) = m[r][c].to_double();
    }
  // Both are lower triangular, so only c <= r entries of the products are
  // nonzero.  Each residual is measured against sum |l||m| of its terms.
  double err = 0.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c <= r; ++c) {
      DoubleDouble lm(r == c ? -1.0 : 0.0), ml = lm;
      double scale_lm = 1.0, scale_ml = 1.0;
      for (int k = c; k <= r; ++k) {
        lm = lm + l[r][k] * m[k][c];
        ml = ml + m[r][k] * l[k][c];
        scale_lm += std::abs(l[r][k].to_double() * m[k][c].to_double());
        scale_ml += std::abs(m[r][k].to_double() * l[k][c].to_double());
      }
      err = std::max({err, std::abs(lm.to_double()) / scale_lm, std::abs(ml.to_double()) / scale_ml});
    }
  t.roundtrip_error = err;
  if (err > 1e-10) throw TruncationError("transform_matrices: L and M fail to invert each other");
  return t;
}

std::vector<double> a_from_li(const LiSequence& li, int j_max) {
  if (j_max < 1) throw DomainError("a_from_li: j_max must be at least 1");
  if (li.values.size() < static_cast<std::size_t>(j_max))
    throw DomainError("a_from_li: insufficient Li coefficients");
  std::vector<double> a(j_max);
  for (int n = 0; n < j_max; ++n) {
    CompensatedSum s;
    s += li.values[n];
    for (int j = 1; j <= n; ++j) s += a[n - j] * li.values[j - 1];
    a[n] = s.value() / (n + 1);
  }
  return a;
}

LiSequence li_from_a(const std::vector<double>& a) {
  LiSequence li;
  li.method = LiMethod::Recurrence;
  for (std::size_t n = 0; n < a.size(); ++n) {
    CompensatedSum s;
    s += (n + 1.0) * a[n];
    for (std::size_t j = 1; j <= n; ++j) s += -a[n - j] * li.values[j - 1];
    li.values.push_back(s.value());
  }
  return li;
}

double b_coeff(int n, int k, const std::vector<double>& a) {
  if (n < 0 || k < 0 || k > n) throw DomainError("b_coeff: need 0 <= k <= n");
  if (a.size() < static_cast<std::size_t>(n - k))
    throw DomainError("b_coeff: missing a-coefficients");
  const double h = k - (4.0 * n + 3.0) / 2.0;
  CompensatedSum s;
  s += factorial(n + 1) / factorial(n - k) * (h * h + 2.0 * n + 3.75);
  for (int j = k + 1; j <= n; ++j) {
    const double q = 2.0 * j - k;
    s += factorial(j) / factorial(j - k - 1) * (q * q + k + 2.0) * a[n - j];
  }
  return factorial(n) / (factorial(k) * factorial(k + 3)) * s.value();
}

double recurrence_residual(int n, const MomentSequence& mu, const std::vector<double>& a) {
  if (n < 0) throw DomainError("recurrence_residual: n must be nonnegative");
  require_moments(mu, n + 1, "recurrence_residual");
  if (a.size() < static_cast<std::size_t>(n + 1))
    throw DomainError("recurrence_residual: missing a-coefficients");
  CompensatedSum s;
  s += (n % 2 == 0 ? 1.0 : -1.0) * mu.values[n];
  s += -factorial(n + 1) * a[n];
  for (int k = 0; k < n; ++k) s += (k % 2 == 0 ? 1.0 : -1.0) * b_coeff(n, k, a) * mu.values[k];
  return s.value();
}

HankelResult hankel_det(const MomentSequence& mu, int n, bool shifted) {
  if (n < 0) throw DomainError("hankel_det: n must be nonnegative");
  const int off = shifted ? 1 : 0;
  require_moments(mu, 2 * n + off + 1, "hankel_det");
  const int d = n + 1;
  std::vector<std::vector<DoubleDouble>> a(d, std::vector<DoubleDouble>(d));
  Eigen::MatrixXd ad(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      a[i][j] = DoubleDouble(mu.values[i + j + off]);
      ad(i, j) = mu.values[i + j + off];
    }

  HankelResult r;
  // Elimination without pivoting is LDL^T for a symmetric matrix; all pivots
  // positive means positive definite.
  auto lu = a;
  bool pd = true;
  for (int k = 0; k < d && pd; ++k) {
    if (!(DoubleDouble(0.0) < lu[k][k])) {
      pd = false;
      break;
    }
    for (int i = k + 1; i < d; ++i) {
      const DoubleDouble f = lu[i][k] / lu[k][k];
      for (int j = k; j < d; ++j) lu[i][j] = lu[i][j] - f * lu[k][j];
    }
  }
  DoubleDouble det(1.0);
  if (pd) {
    double log_det = 0.0;
    for (int k = 0; k < d; ++k) {
      det = det * lu[k][k];
      log_det += std::log(lu[k][k].to_double());
    }
    r.positive_definite = true;
    r.log_det = log_det;
  } else {
    // Partial pivoting for the plain determinant.
    lu = a;
    for (int k = 0; k < d; ++k) {
      int p = k;
      for (int i = k + 1; i < d; ++i)
        if (abs(lu[p][k]) < abs(lu[i][k])) p = i;
      if (p != k) {
        std::swap(lu[p], lu[k]);
        det = -det;
      }
      if (lu[k][k].hi == 0.0) {
        det = DoubleDouble(0.0);
        break;
      }
      for (int i = k + 1; i < d; ++i) {
        const DoubleDouble f = lu[i][k] / lu[k][k];
        for (int j = k; j < d; ++j) lu[i][j] = lu[i][j] - f * lu[k][j];
      }
      det = det * lu[k][k];
    }
  }
  r.det = det.to_double();

  // d det / d A_ij = adj(A)_ji = det * inv(A)_ji; every entry A_ij = mu_{i+j}.
  if (!mu.est_errors.empty() && r.det != 0.0) {
    const Eigen::MatrixXd inv = ad.inverse();
    double e = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) e += std::abs(r.det * inv(j, i)) * mu.est_errors[i + j + off];
    r.error_bound = e;
  }
  r.indefinite = r.det < -r.error_bound;
  return r;
}

}  // namespace zscrew
