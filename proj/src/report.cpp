#include "zscrew/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "zscrew/errors.hpp"
#include "zscrew/moments.hpp"
#include "zscrew/numeric.hpp"
#include "zscrew/spectral.hpp"
#include "zscrew/specfun.hpp"
#include "zscrew/weil.hpp"

namespace zscrew {

namespace {

constexpr std::uint64_t kTableCap = 1000000;

bool evaluate(const Check& c) {
  switch (c.relation) {
    case Relation::Near:
      return std::abs(c.computed - c.target) <= c.tol;
    case Relation::AtMost:
      return c.computed <= c.target;
    case Relation::AtLeast:
      return c.computed >= c.target;
    case Relation::Above:
      return c.computed > c.target;
    case Relation::Holds:
      return c.computed == 1.0;
  }
  return false;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

class Builder {
 public:
  explicit Builder(int id, std::string title) {
    res_.id = id;
    res_.title = std::move(title);
  }
  void near(const std::string& id, const std::string& what, double target, double computed, double tol) {
    add(id, what, target, computed, tol, Relation::Near);
  }
  void at_most(const std::string& id, const std::string& what, double bound, double computed) {
    add(id, what, bound, computed, 0.0, Relation::AtMost);
  }
  void at_least(const std::string& id, const std::string& what, double bound, double computed) {
    add(id, what, bound, computed, 0.0, Relation::AtLeast);
  }
  void above(const std::string& id, const std::string& what, double bound, double computed) {
    add(id, what, bound, computed, 0.0, Relation::Above);
  }
  void holds(const std::string& id, const std::string& what, bool ok) {
    add(id, what, 1.0, ok ? 1.0 : 0.0, 0.0, Relation::Holds);
  }
  void note(const std::string& text) {
    if (!res_.note.empty()) res_.note += "; ";
    res_.note += text;
  }
  CriterionResult finish(double seconds, double budget) {
    res_.seconds = seconds;
    at_most("runtime", "wall time in seconds", budget, seconds);
    return std::move(res_);
  }

 private:
  void add(const std::string& id, const std::string& what, double target, double computed, double tol,
           Relation rel) {
    Check c;
    c.id = std::to_string(res_.id) + "." + id;
    c.description = what;
    c.target = target;
    c.computed = computed;
    c.tol = tol;
    c.relation = rel;
    c.pass = evaluate(c);
    res_.checks.push_back(std::move(c));
  }
  CriterionResult res_;
};

double safe_log_limit(std::uint64_t limit) { return std::log(static_cast<double>(limit)) - 1e-9; }

// ---------------------------------------------------------------------------

void critical_points(Builder& b, ReportContext& ctx) {
  const auto [t1, t2] = psi_critical_points();
  b.near("t1", "first root of Psi' on (0, log 2)", 0.152631, t1, 1e-5);
  b.near("t2", "second root of Psi' on (0, log 2)", 0.464002, t2, 1e-5);
  b.near("psi_t2", "Psi at the second root", 0.0396618, psi_prime_side(t2, ctx.primes()).value, 1e-6);
}

void two_sided(Builder& b, ReportContext& ctx) {
  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double p = psi_prime_side(t, ctx.primes()).value;
    const Interval z = psi_zero_side(t, ctx.zeros(), ctx.tail());
    const std::string tag = "t=" + fmt(t);
    b.holds(tag + ".inside", "prime-side Psi lies in the zero-side interval", z.contains(p));
    b.at_most(tag + ".halfwidth", "zero-side interval half-width", 4e-3, 0.5 * z.width());
  }
}

void supremum(Builder& b, ReportContext& ctx) {
  const double hi_t = std::log(10.0);
  double peak = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = hi_t * i / 999.0;
    peak = std::max(peak, psi_prime_side(t, ctx.primes()).value);
  }
  b.at_most("figure_bound", "max Psi on 1000 points over [0, log 10]", 0.094, peak);
  const std::uint64_t limit = ctx.config().prime_limit;
  const double t_max = std::min(30.0, safe_log_limit(limit));
  const SignChange s = find_sign_change(0.0, t_max, 1e-3, limit);
  b.holds("no_sign_change", "Psi keeps its sign on the grid (0, t_max] at step 1e-3", !s.found);
  b.above("grid_min", "min Psi on the grid", 0.0, s.min_value);
  b.note("grid ends at t = " + fmt(t_max) + " = log(prime_limit); t up to 30 needs primes to 1.1e13");
}

void weil_identity(Builder& b, ReportContext& ctx) {
  for (double t : {0.5, 1.0, 2.0, 3.0}) {
    const auto r = explicit_formula_check(triangle(t), ctx.zeros(), ctx.tail(), ctx.primes());
    b.near("t=" + fmt(t), "explicit formula residual for the triangle", 0.0, r.residual, 1e-4);
    b.near("t=" + fmt(t) + ".psi", "zero side against prime-side Psi", 0.0,
           r.lhs - psi_prime_side(t, ctx.primes()).value, 1e-4);
  }
}

void chi_pairing(Builder& b, ReportContext& ctx) {
  const std::pair<double, int> cases[] = {{1.0, 1}, {1.0, 3}, {2.0, 2}};
  for (const auto& [a, k] : cases) {
    const ChiPair lhs = chi_pairing_lhs(k, a, ctx.zeros(), ctx.tail());
    const ChiPair rhs = chi_pairing_rhs(k, a, ctx.primes());
    b.near("a=" + fmt(a) + ".k=" + std::to_string(k), "zero sum minus closed form", 0.0,
           lhs.total() - rhs.total(), 1e-4);
  }
  const DecayFit fit = chi_decay_fit(1.0, ctx.primes());
  b.near("decay", "decay exponent of |<chi_0, chi_k>| over k in [8, 64]", 2.0, fit.exponent, 0.2);
}

void li_consistency(Builder& b, ReportContext& ctx) {
  const LiSequence& zero_li = ctx.zero_li();
  const LiSequence from_mu = li_sequence_from_moments(ctx.moments(), 6);
  for (int n = 1; n <= 6; ++n)
    b.near("n=" + std::to_string(n), "lambda_n from zeros against lambda_n from moments", zero_li.at(n),
           from_mu.at(n), 1e-3);
  const double closed = 1.0 + 0.5 * kEulerGamma - 0.5 * std::log(4.0 * kPi);
  b.near("lambda1.closed", "closed form 1 + gamma/2 - log(4 pi)/2", 0.0230957, closed, 1e-5);
  b.near("lambda1.zeros", "lambda_1 from zeros", 0.0230957, zero_li.at(1), 1e-5);
  b.near("lambda1.moments", "lambda_1 from moments", 0.0230957, from_mu.at(1), 1e-5);

  double worst = 0.0;
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> dist(0.1, 10.0);
  for (int n = 1; n <= 12; ++n) {
    worst = std::max(worst, transform_matrices(n).roundtrip_error);
    for (int trial = 0; trial < 20; ++trial) {
      MomentSequence s;
      for (int i = 0; i <= n; ++i) {
        s.values.push_back(dist(rng));
        s.est_errors.push_back(0.0);
      }
      const MomentSequence back = moment_sequence_from_li(li_sequence_from_moments(s, n + 1), n);
      for (int i = 0; i <= n; ++i) worst = std::max(worst, std::abs(back.values[i] / s.values[i] - 1));
    }
  }
  b.at_most("LM", "max relative |LM - I| and round-trip error for N <= 12", 1e-10, worst);
}

void recurrence(Builder& b, ReportContext& ctx) {
  const std::vector<double> a = a_from_li(ctx.zero_li(), 10);
  bool positive = true;
  for (int n = 0; n <= 5; ++n) {
    b.near("n=" + std::to_string(n), "moment recurrence residual", 0.0, recurrence_residual(n, ctx.moments(), a), 1e-4);
    for (int k = 0; k <= n; ++k) positive = positive && b_coeff(n, k, a) > 0;
  }
  b.holds("b_positive", "all b_{n,k} > 0 for n <= 5", positive);
}

void hankel(Builder& b, ReportContext& ctx) {
  for (int n = 0; n <= 5; ++n)
    for (bool shifted : {false, true}) {
      const HankelResult h = hankel_det(ctx.moments(), n, shifted);
      const std::string tag = std::string(shifted ? "shifted" : "plain") + ".n=" + std::to_string(n);
      b.above(tag, "determinant minus its propagated error", 0.0, h.det - h.error_bound);
      b.holds(tag + ".cholesky", "extended-precision Cholesky succeeds", h.positive_definite);
    }
}

void spectra(Builder& b, ReportContext& ctx) {
  const auto psi = prime_side_psi(ctx.primes());
  DiscretizeOptions opts;
  opts.threads = ctx.config().threads;
  const SpectrumReport s = spectrum(discretize(1.0, 200, psi, opts));
  b.at_least("a=1.min_eig", "smallest eigenvalue at a = 1, n = 200", -1e-9, s.min_eig);
  const double trace = 4.0 * integrate(psi, {0.0, std::log(2.0), 1.0}, 1e-14).value;
  b.near("a=1.trace", "sum of eigenvalues against 2 int_{-a}^{a} Psi", trace, s.trace_eigsum, 1e-6);

  const int m = static_cast<int>(std::min<std::size_t>(2000, ctx.zeros().size()));
  const ZeroSystemReport z = zero_system_report(1.0, ctx.zeros(), m);
  double raw_gap = 0.0;
  for (int i = 0; i < 5; ++i) {
    b.near("a=1.top" + std::to_string(i + 1), "zero-system eigenvalue against Nystrom", s.eigenvalues[i],
           z.corrected[i], 1e-3);
    raw_gap = std::max(raw_gap, std::abs(z.eigenvalues[i] - s.eigenvalues[i]));
  }
  b.note("zero system with m = " + std::to_string(m) + " zeros; without the tail function the top-5 gap is " +
         fmt(raw_gap) + " (tail weight " + fmt(z.tail_weight) + ")");

  const SpectrumReport small = spectrum(discretize(0.1, 200, psi, opts));
  b.above("a=0.1.min_eig", "smallest eigenvalue at a = 0.1", 0.0, small.min_eig);
}

void asymptotic(Builder& b, ReportContext& ctx) {
  const double t = 20.0;
  const double phi = chebyshev_weighted_scan({t}, 0.5, ctx.config().prime_limit)[0];
  b.near("t=20", "phi(t) / (4 e^{t/2})", 1.0, phi / (4.0 * std::exp(0.5 * t)), 0.05);
}

void fourier(Builder& b, ReportContext& ctx) {
  MomentOptions opts;
  opts.t_cut = ctx.config().t_cut;
  const auto l = psi_laplace_moments(1.0, 0, ctx.primes(), ctx.zeros(), ctx.tail(), opts);
  b.near("z=i", "int_0^inf Psi(t) e^{-t} dt against (xi'/xi)(3/2)", xi_log_derivative(1.5), l[0].value, 1e-6);
}

void shifted(Builder& b, ReportContext& ctx) {
  const MangoldtTable& tb = ctx.primes();
  for (double t : {0.5, 1.0, 2.0})
    b.near("half.t=" + fmt(t), "closed form of Psi_{1/2} against the transform of Psi",
           psi_omega_transform(t, 0.5, tb), psi_omega_prime_side(t, 0.5, tb).value, 1e-6);
  double worst = 0.0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 3.0, 5.0})
    worst = std::max(worst, std::abs(psi_omega_prime_side(t, 0.0, tb).value - psi_prime_side(t, tb).value));
  b.at_most("zero_shift", "max |Psi_0 - Psi|", 1e-12, worst);
  const std::uint64_t limit = ctx.config().prime_limit;
  const SignChange s = find_sign_change(-0.1, std::min(50.0, safe_log_limit(limit)), 1e-3, limit);
  b.holds("scan", "Psi_{-0.1} changes sign", s.found);
  if (s.found) b.note("first sign change of Psi_{-0.1} at t = " + fmt(s.t));
}

struct Spec {
  const char* title;
  double budget;
  void (*run)(Builder&, ReportContext&);
};

const Spec kSpecs[12] = {
    {"critical points of Psi", 1, critical_points},
    {"prime side inside the zero-side interval", 10, two_sided},
    {"supremum and positivity", 60, supremum},
    {"explicit formula for triangles", 30, weil_identity},
    {"chi pairings and their decay", 60, chi_pairing},
    {"Li coefficients and moment transforms", 30, li_consistency},
    {"moment recurrence", 5, recurrence},
    {"Hankel determinants", 10, hankel},
    {"operator spectra", 30, spectra},
    {"asymptotic of the weighted Chebyshev sum", 120, asymptotic},
    {"Laplace transform at z = i", 5, fourier},
    {"shifted variants", 10, shifted},
};

}  // namespace

bool CriterionResult::pass() const {
  if (checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

struct ReportContext::Cache {
  std::optional<ZeroTable> zeros;
  std::optional<TailModel> tail;
  std::optional<MangoldtTable> primes;
  std::optional<MomentSequence> moments;
  std::optional<LiSequence> zero_li;
};

ReportContext::ReportContext(ReportConfig cfg) : cfg_(std::move(cfg)), cache_(std::make_unique<Cache>()) {}
ReportContext::~ReportContext() = default;

const ZeroTable& ReportContext::zeros() {
  if (!cache_->zeros) cache_->zeros = load_zeros(cfg_.zeros_path, cfg_.zeros_limit);
  return *cache_->zeros;
}

const TailModel& ReportContext::tail() {
  if (!cache_->tail) cache_->tail = make_tail(zeros());
  return *cache_->tail;
}

const MangoldtTable& ReportContext::primes() {
  if (!cache_->primes) cache_->primes = build_table(std::min(cfg_.prime_limit, kTableCap), cfg_.prime_limit);
  return *cache_->primes;
}

const MomentSequence& ReportContext::moments() {
  if (!cache_->moments) {
    MomentOptions opts;
    opts.t_cut = cfg_.t_cut;
    cache_->moments = moment_sequence(12, primes(), zeros(), tail(), opts);
  }
  return *cache_->moments;
}

const LiSequence& ReportContext::zero_li() {
  if (!cache_->zero_li) {
    LiSequence li;
    for (int n = 1; n <= 10; ++n) li.values.push_back(li_from_zeros(n, zeros(), tail()).value);
    cache_->zero_li = std::move(li);
  }
  return *cache_->zero_li;
}

Suite parse_suite(const std::string& name) {
  if (name == "identities") return Suite::Identities;
  if (name == "spectra") return Suite::Spectra;
  if (name == "moments") return Suite::Moments;
  if (name == "all") return Suite::All;
  throw ConfigError("unknown suite '" + name + "'");
}

std::vector<int> suite_criteria(Suite suite) {
  switch (suite) {
    case Suite::Identities:
      return {1, 2, 3, 4, 5, 11, 12};
    case Suite::Spectra:
      return {9};
    case Suite::Moments:
      return {6, 7, 8};
    case Suite::All:
      break;
  }
  return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
}

CriterionResult run_criterion(int id, ReportContext& ctx) {
  if (id < 1 || id > 12) throw DomainError("run_criterion: id must lie in [1, 12]");
  const Spec& spec = kSpecs[id - 1];
  Builder b(id, spec.title);
  const auto start = std::chrono::steady_clock::now();
  try {
    spec.run(b, ctx);
  } catch (const DataError&) {
    throw;
  } catch (const Error& e) {
    b.holds("error", e.what(), false);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return b.finish(secs, spec.budget);
}

}  // namespace zscrew
