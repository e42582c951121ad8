#include "zscrew/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "zscrew/errors.hpp"
#include "zscrew/numeric.hpp"

namespace zscrew {

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers.  Each index is
// owned by exactly one worker, so results never depend on the thread count.
template <typename F>
void parallel_for(int count, int threads, F&& body) {
  threads = std::clamp(threads, 1, std::max(1, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += threads) body(i);
    });
  for (auto& th : pool) th.join();
}

// 1 - sinc(u) without cancellation for small u.
double one_minus_sinc(double u) {
  const double u2 = u * u;
  if (std::abs(u) < 0.1)
    return u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0 * (1.0 - u2 / 72.0 * (1.0 - u2 / 110.0))));
  return 1.0 - std::sin(u) / u;
}

double sinc_d1(double u) {
  const double u2 = u * u;
  if (std::abs(u) < 0.1)
    return u * (-1.0 / 3.0 + u2 * (1.0 / 30.0 + u2 * (-1.0 / 840.0 + u2 * (1.0 / 45360.0 - u2 / 3991680.0))));
  return (u * std::cos(u) - std::sin(u)) / u2;
}

double sinc_d2(double u) {
  const double u2 = u * u;
  if (std::abs(u) < 0.1)
    return -1.0 / 3.0 + u2 * (0.1 + u2 * (-1.0 / 168.0 + u2 * (1.0 / 6480.0 - u2 * 90.0 / 39916800.0)));
  return ((2.0 - u2) * std::sin(u) - 2.0 * u * std::cos(u)) / (u2 * u);
}

// Orthonormal Legendre basis on [lo, hi], values at t for degrees 0..p-1.
void legendre_basis(double t, double lo, double hi, int p, double* out) {
  const double h = hi - lo;
  const double x = 2.0 * (t - lo) / h - 1.0;
  double p0 = 1.0, p1 = x;
  for (int k = 0; k < p; ++k) {
    double pk;
    if (k == 0) {
      pk = p0;
    } else if (k == 1) {
      pk = p1;
    } else {
      pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    out[k] = pk * std::sqrt((2.0 * k + 1.0) / h);
  }
}

// log m for prime powers m with log m < x.
std::vector<double> kink_points(double x) {
  const auto limit = static_cast<std::uint64_t>(std::floor(std::exp(x)));
  std::vector<double> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t q = p * p; q <= limit; q += p) composite[q] = true;
    for (std::uint64_t m = p; m <= limit; m *= p) {
      const double l = std::log(static_cast<double>(m));
      if (l < x) out.push_back(l);
      if (m > limit / p) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Geometric points toward 0 inside (0, b): b r^k down to `floor`.
void add_grading(std::vector<double>& pts, double b, double ratio, double floor) {
  for (double g = b * ratio; g > floor; g *= ratio) pts.push_back(g);
}

std::vector<double> sorted_unique(std::vector<double> v, double lo, double hi) {
  std::vector<double> out;
  std::sort(v.begin(), v.end());
  for (double x : v) {
    if (x < lo || x > hi) continue;
    if (out.empty() || x - out.back() > 1e-14 * std::max(1.0, std::abs(x))) out.push_back(x);
  }
  return out;
}

constexpr double kGradeRatio = 0.15;
constexpr double kGradeFloor = 1e-9;
// Innermost layer sizes.  Nystrom nodes much closer to 0 only add tiny
// eigenvalues of size w_i Psi(t_i) without improving the trace.
constexpr double kNystromGradeFloor = 1e-4;
constexpr double kGalerkinGradeFloor = 1e-6;

struct PanelLayout {
  std::vector<double> breaks;  // symmetric about 0
  std::vector<int> degrees;    // nodes (Nystrom) or basis size (Galerkin) per panel
};

// Panels on [-a, a] split at 0 and at the kinks log m < a of Psi, with
// geometric layers toward the t log t singularity at 0.  Only the first n/8
// kinks are used so that large a cannot exhaust the budget.
PanelLayout panel_layout(double a, int n, const std::vector<double>& kinks, double grade_floor) {
  constexpr int kMaxDegree = 16;
  const int half = (n + 1) / 2;

  std::vector<double> pos{0.0, a};
  for (double k : kinks)
    if (k < a && pos.size() < static_cast<std::size_t>(n / 8) + 2) pos.push_back(k);
  pos = sorted_unique(pos, 0.0, a);

  // Geometric layers inside (0, pos[1]); the degree rises linearly away
  // from 0 up to a cap that grows with n.  Small budgets get fewer layers.
  const int graded_cap = std::clamp(n / 30, 2, kMaxDegree);
  auto graded_degree = [&](int layer) { return std::min(graded_cap, 2 + layer); };
  std::vector<double> layers;
  add_grading(layers, pos[1], kGradeRatio, grade_floor);
  std::reverse(layers.begin(), layers.end());  // innermost first
  int graded_dofs = 0, used = 0;
  const int reserve = 2 * static_cast<int>(pos.size() - 1);
  for (int i = 0; i < static_cast<int>(layers.size()); ++i) {
    if (graded_dofs + graded_degree(i) + reserve > half) break;
    graded_dofs += graded_degree(i);
    ++used;
  }
  layers.erase(layers.begin(), layers.end() - used);

  std::vector<double> half_pts{0.0};
  std::vector<int> half_deg;
  for (int i = 0; i < used; ++i) {
    half_pts.push_back(layers[i]);
    half_deg.push_back(graded_degree(i));
  }

  // The remaining budget goes to the other panels in proportion to their
  // length, by largest remainder, splitting any panel whose share exceeds
  // kMaxDegree.
  std::vector<double> bulk{used > 0 ? layers.back() : 0.0};
  bulk.insert(bulk.end(), pos.begin() + 1, pos.end());
  const double bulk_len = a - bulk.front();
  const int budget = std::max(half - graded_dofs, 2 * static_cast<int>(bulk.size() - 1));
  std::vector<int> share(bulk.size() - 1);
  std::vector<std::pair<double, int>> rem;
  int assigned = 0;
  for (std::size_t i = 0; i + 1 < bulk.size(); ++i) {
    const double exact = budget * (bulk[i + 1] - bulk[i]) / bulk_len;
    share[i] = std::max(2, static_cast<int>(std::floor(exact)));
    assigned += share[i];
    rem.emplace_back(exact - std::floor(exact), static_cast<int>(i));
  }
  std::stable_sort(rem.begin(), rem.end(), [](auto& x, auto& y) { return x.first > y.first; });
  for (std::size_t k = 0; assigned < budget; k = (k + 1) % rem.size(), ++assigned) ++share[rem[k].second];

  for (std::size_t i = 0; i + 1 < bulk.size(); ++i) {
    const int pieces = (share[i] + kMaxDegree - 1) / kMaxDegree;
    for (int k = 1; k <= pieces; ++k) {
      half_pts.push_back(k == pieces ? bulk[i + 1] : bulk[i] + (bulk[i + 1] - bulk[i]) * k / pieces);
      half_deg.push_back(share[i] / pieces + (k <= share[i] % pieces ? 1 : 0));
    }
  }

  PanelLayout out;
  for (std::size_t i = half_pts.size(); i-- > 1;) out.breaks.push_back(-half_pts[i]);
  out.breaks.insert(out.breaks.end(), half_pts.begin(), half_pts.end());
  for (std::size_t i = half_deg.size(); i-- > 0;) out.degrees.push_back(half_deg[i]);
  out.degrees.insert(out.degrees.end(), half_deg.begin(), half_deg.end());
  return out;
}

OperatorDiscretization nystrom(double a, int n, const std::function<double(double)>& psi,
                               const DiscretizeOptions& opts) {
  OperatorDiscretization d;
  d.a = a;
  d.method = opts.method;
  if (opts.method == OperatorMethod::Nystrom) {
    const PanelLayout layout = panel_layout(a, n, kink_points(std::min(a, 12.0)), kNystromGradeFloor);
    for (std::size_t I = 0; I + 1 < layout.breaks.size(); ++I) {
      const QuadratureRule& g = gauss_legendre(layout.degrees[I]);
      const double h = 0.5 * (layout.breaks[I + 1] - layout.breaks[I]);
      const double m = 0.5 * (layout.breaks[I + 1] + layout.breaks[I]);
      for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        d.nodes.push_back(m + h * g.nodes[k]);
        d.weights.push_back(h * g.weights[k]);
      }
    }
    n = static_cast<int>(d.nodes.size());
  } else if (opts.method == OperatorMethod::NystromPlain) {
    const QuadratureRule& g = gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
      d.nodes.push_back(a * g.nodes[i]);
      d.weights.push_back(a * g.weights[i]);
    }
  } else {
    d.nodes.resize(n);
    d.weights.resize(n);
    const double h = 2.0 * a / n;
    for (int i = 0; i < n; ++i) {
      d.nodes[i] = -a + (i + 0.5) * h;
      d.weights[i] = h;
    }
  }
  d.psi_at_nodes.resize(n);
  for (int i = 0; i < n; ++i) d.psi_at_nodes[i] = psi(d.nodes[i]);

  d.sym_matrix.resize(n, n);
  parallel_for(n, opts.threads, [&](int i) {
    for (int j = 0; j <= i; ++j) {
      const double g = d.psi_at_nodes[i] + d.psi_at_nodes[j] - psi(d.nodes[i] - d.nodes[j]);
      d.sym_matrix(i, j) = g * std::sqrt(d.weights[i] * d.weights[j]);
    }
  });
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) d.sym_matrix(j, i) = d.sym_matrix(i, j);
  return d;
}

// Galerkin matrix <b_i, G b_j> in a piecewise orthonormal Legendre basis.
// The Toeplitz part is integrated in s = t - u, where the singular lines of
// Psi(t - u) become breakpoints.
OperatorDiscretization galerkin(double a, int n, const std::function<double(double)>& psi,
                                const DiscretizeOptions& opts) {
  if (a > 6.0) throw DomainError("discretize: Galerkin needs a <= 6");
  const std::vector<double> kinks = kink_points(2.0 * a);

  const PanelLayout layout = panel_layout(a, n, kinks, kGalerkinGradeFloor);
  const std::vector<double>& br = layout.breaks;
  const std::vector<int>& deg = layout.degrees;
  const int panels = static_cast<int>(br.size()) - 1;
  std::vector<int> off(panels + 1, 0);
  for (int I = 0; I < panels; ++I) off[I + 1] = off[I] + deg[I];
  const int dim = off[panels];
  const int pmax = *std::max_element(deg.begin(), deg.end());

  OperatorDiscretization d;
  d.a = a;
  d.method = OperatorMethod::Galerkin;
  // Trace rule: pmax + 12 points on every panel.
  const int qt = pmax + 12;
  const QuadratureRule trace_rule = composite_gauss_legendre(br, qt);
  d.nodes = trace_rule.nodes;
  d.weights = trace_rule.weights;
  d.psi_at_nodes.resize(d.nodes.size());
  for (std::size_t i = 0; i < d.nodes.size(); ++i) d.psi_at_nodes[i] = psi(d.nodes[i]);

  // c_i = int Psi b_i and e_i = int b_i.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim), e = Eigen::VectorXd::Zero(dim);
  std::vector<double> bv(pmax);
  for (int I = 0; I < panels; ++I) {
    e(off[I]) = std::sqrt(br[I + 1] - br[I]);
    for (int r = 0; r < qt; ++r) {
      const std::size_t idx = static_cast<std::size_t>(I) * qt + r;
      legendre_basis(d.nodes[idx], br[I], br[I + 1], deg[I], bv.data());
      for (int k = 0; k < deg[I]; ++k) c(off[I] + k) += d.weights[idx] * d.psi_at_nodes[idx] * bv[k];
    }
  }

  std::vector<double> s_sing{0.0};
  for (double k : kinks) {
    s_sing.push_back(k);
    s_sing.push_back(-k);
  }

  std::vector<std::pair<int, int>> pairs;
  for (int I = 0; I < panels; ++I)
    for (int J = I; J < panels; ++J) pairs.emplace_back(I, J);

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dim, dim);
  parallel_for(static_cast<int>(pairs.size()), opts.threads, [&](int idx) {
    const auto [I, J] = pairs[idx];
    const int pI = deg[I], pJ = deg[J];
    const QuadratureRule& gq = gauss_legendre(std::max(pI, pJ) + 12);
    const QuadratureRule& gi = gauss_legendre((pI + pJ) / 2 + 1);
    const double aI = br[I], bI = br[I + 1], aJ = br[J], bJ = br[J + 1];
    const double lo = aI - bJ, hi = bI - aJ;
    std::vector<double> sb{lo, hi, aI - aJ, bI - bJ};
    for (double s : s_sing) sb.push_back(s);
    if (lo < 0.0 && hi > 0.0) {
      const double span = std::max(-lo, hi);
      std::vector<double> g;
      add_grading(g, span, kGradeRatio, kGradeFloor);
      for (double x : g) {
        sb.push_back(x);
        sb.push_back(-x);
      }
    }
    sb = sorted_unique(sb, lo, hi);

    Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(pI, pJ);
    Eigen::MatrixXd C(pI, pJ);
    std::vector<double> bt(pI), bu(pJ);
    for (std::size_t piece = 0; piece + 1 < sb.size(); ++piece) {
      const double s0 = sb[piece], s1 = sb[piece + 1];
      const double hs = 0.5 * (s1 - s0), ms = 0.5 * (s1 + s0);
      for (std::size_t r = 0; r < gq.nodes.size(); ++r) {
        const double s = ms + hs * gq.nodes[r];
        const double ul = std::max(aJ, aI - s), uh = std::min(bJ, bI - s);
        if (!(uh > ul)) continue;
        const double hu = 0.5 * (uh - ul), mu = 0.5 * (uh + ul);
        C.setZero();
        for (std::size_t k = 0; k < gi.nodes.size(); ++k) {
          const double u = mu + hu * gi.nodes[k];
          legendre_basis(u + s, aI, bI, pI, bt.data());
          legendre_basis(u, aJ, bJ, pJ, bu.data());
          const double wk = hu * gi.weights[k];
          for (int x = 0; x < pI; ++x)
            for (int y = 0; y < pJ; ++y) C(x, y) += wk * bt[x] * bu[y];
        }
        blk += (hs * gq.weights[r] * psi(s)) * C;
      }
    }
    T.block(off[I], off[J], pI, pJ) = blk;
    if (I != J) T.block(off[J], off[I], pJ, pI) = blk.transpose();
  });

  d.sym_matrix = c * e.transpose() + e * c.transpose() - T;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < i; ++j) {
      const double v = 0.5 * (d.sym_matrix(i, j) + d.sym_matrix(j, i));
      d.sym_matrix(i, j) = d.sym_matrix(j, i) = v;
    }
  return d;
}

}  // namespace

std::function<double(double)> prime_side_psi(const MangoldtTable& table) {
  return [&table](double t) {
    t = std::abs(t);
    return t == 0.0 ? 0.0 : psi_prime_side(t, table).value;
  };
}

std::function<double(double)> zero_side_psi(const ZeroTable& zeros) {
  return [&zeros](double t) {
    CompensatedSum s;
    for (const double g : zeros.ordinates) {
      const double h = std::sin(0.5 * g * t) / g;
      s += 4.0 * h * h;
    }
    return s.value();
  };
}

OperatorDiscretization discretize(double a, int n, const std::function<double(double)>& psi,
                                  const DiscretizeOptions& opts) {
  if (!(a > 0.0)) throw DomainError("discretize: a must be positive");
  if (n < 8) throw DomainError("discretize: need at least 8 nodes");
  if (opts.method == OperatorMethod::Galerkin) return galerkin(a, n, psi, opts);
  return nystrom(a, n, psi, opts);
}

SpectrumReport spectrum(const OperatorDiscretization& disc) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(disc.sym_matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw TruncationError("spectrum: eigensolver did not converge");
  SpectrumReport r;
  const Eigen::VectorXd& ev = es.eigenvalues();
  r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(r.eigenvalues.rbegin(), r.eigenvalues.rend());

  CompensatedSum tq, te;
  for (std::size_t i = 0; i < disc.nodes.size(); ++i) tq += disc.weights[i] * 2.0 * disc.psi_at_nodes[i];
  for (double v : r.eigenvalues) te += v;
  r.trace_quadrature = tq.value();
  r.trace_eigsum = te.value();
  r.min_eig = r.eigenvalues.empty() ? 0.0 : r.eigenvalues.back();

  double norm = 0.0;
  for (double v : r.eigenvalues) norm = std::max(norm, std::abs(v));
  r.spectral_floor = 1e-12 * norm;
  for (double v : r.eigenvalues)
    if (std::abs(v) < r.spectral_floor) ++r.numerically_zero;
  return r;
}

double h_kernel(double x, double y, double a) {
  if (std::abs(x) > std::abs(y)) std::swap(x, y);
  if (std::abs(y) < 1e-5) {
    // Both small: fourth-order expansion of the bracket divided by xy.
    return 2.0 * a * (a * a / 3.0 + std::pow(a, 4) * (2 * x * x - 3 * x * y + 2 * y * y) / 60.0);
  }
  if (std::abs(x) < 1e-5) {
    // Second-order expansion in x at fixed y.
    const double u = a * y;
    return 2.0 * a / y * (-a * sinc_d1(u) + 0.5 * x * a * a * (sinc_d2(u) + 1.0 / 3.0));
  }
  const double num = one_minus_sinc(a * x) + one_minus_sinc(a * y) - one_minus_sinc(a * (x - y));
  return 2.0 * a * num / (x * y);
}

Eigen::MatrixXd zero_system_matrix(double a, const ZeroTable& zeros, int m) {
  if (m < 1 || static_cast<std::size_t>(m) > zeros.size())
    throw DomainError("zero_system_matrix: m outside the zero table");
  Eigen::MatrixXd h(2 * m, 2 * m);
  for (int i = 0; i < 2 * m; ++i) {
    const double xi = i < m ? zeros.ordinates[i] : -zeros.ordinates[i - m];
    for (int j = 0; j <= i; ++j) {
      const double xj = j < m ? zeros.ordinates[j] : -zeros.ordinates[j - m];
      h(i, j) = h(j, i) = h_kernel(xi, xj, a);
    }
  }
  return h;
}

namespace {

// H(-x,-y) = H(x,y) makes the 2m system [[A, B], [B, A]]; its spectrum is
// that of A + B together with that of A - B.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> zero_system_blocks(double a, const ZeroTable& zeros, int m) {
  if (m < 1 || static_cast<std::size_t>(m) > zeros.size())
    throw DomainError("zero system: m outside the zero table");
  Eigen::MatrixXd plus(m, m), minus(m, m);
  for (int i = 0; i < m; ++i) {
    const double gi = zeros.ordinates[i];
    for (int j = 0; j <= i; ++j) {
      const double gj = zeros.ordinates[j];
      const double A = h_kernel(gi, gj, a);
      const double B = h_kernel(gi, -gj, a);
      plus(i, j) = plus(j, i) = A + B;
      minus(i, j) = minus(j, i) = A - B;
    }
  }
  return {std::move(plus), std::move(minus)};
}

}  // namespace

std::vector<double> zero_system_spectrum(double a, const ZeroTable& zeros, int m) {
  const auto [plus, minus] = zero_system_blocks(a, zeros, m);
  std::vector<double> out;
  out.reserve(2 * m);
  for (const Eigen::MatrixXd* mat : {&plus, &minus}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*mat, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw TruncationError("zero_system_spectrum: eigensolver did not converge");
    out.insert(out.end(), es.eigenvalues().data(), es.eigenvalues().data() + m);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

ZeroSystemReport zero_system_report(double a, const ZeroTable& zeros, int m) {
  const auto [plus, minus] = zero_system_blocks(a, zeros, m);
  if (zeros.ordinates[m - 1] < 100.0) throw DomainError("zero_system_report: needs gamma_m >= 100");
  ZeroSystemReport r;
  r.tail_weight = tail_sigma2(zeros.ordinates[m - 1]);

  // int g_x = 2a (sinc(ax) - 1)/x is odd in x, so the constant only couples
  // to the A - B block, whose vectors are (v, -v)/sqrt(2).
  Eigen::MatrixXd aug(m + 1, m + 1);
  aug.topLeftCorner(m, m) = minus;
  const double scale = std::sqrt(2.0 * r.tail_weight);
  for (int i = 0; i < m; ++i) {
    const double g = zeros.ordinates[i];
    aug(i, m) = aug(m, i) = -scale * 2.0 * a * one_minus_sinc(a * g) / g;
  }
  aug(m, m) = 2.0 * a * r.tail_weight;

  auto eig = [](const Eigen::MatrixXd& mat) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw TruncationError("zero_system_report: eigensolver did not converge");
    return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + mat.rows());
  };
  const std::vector<double> ep = eig(plus), em = eig(minus), ea = eig(aug);
  r.eigenvalues = ep;
  r.eigenvalues.insert(r.eigenvalues.end(), em.begin(), em.end());
  r.corrected = ep;
  r.corrected.insert(r.corrected.end(), ea.begin(), ea.end());
  std::sort(r.eigenvalues.rbegin(), r.eigenvalues.rend());
  std::sort(r.corrected.rbegin(), r.corrected.rend());
  return r;
}

double k_kernel(double t, double u) { return 0.5 * (std::abs(t) + std::abs(u) - std::abs(t - u)); }

double k_kernel(double t, double u, double y) {
  if (y == 0.0) return k_kernel(t, u);
  const double e1 = std::expm1(-y * (t + std::abs(t)));
  const double e2 = std::expm1(-y * (u + std::abs(u)));
  const double e3 = std::expm1(-y * (t + u + std::abs(t - u)));
  return (e3 - e1 - e2) / (2.0 * y);
}

}  // namespace zscrew
