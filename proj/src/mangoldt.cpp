#include "zscrew/mangoldt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "zscrew/errors.hpp"
#include "zscrew/numeric.hpp"

namespace zscrew {

namespace {

constexpr std::size_t kSegmentOdds = std::size_t{1} << 18;

std::vector<std::uint32_t> small_primes(std::uint32_t upto) {
  std::vector<std::uint8_t> composite(upto + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t i = 2; i <= upto; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = std::uint64_t{i} * i; j <= upto; j += i) composite[j] = 1;
  }
  return primes;
}

std::uint64_t isqrt(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

// floor(e^t) clipped to uint64, used for coverage checks.
double exp_floor(double t) { return std::floor(std::exp(t)); }

}  // namespace

// ---------------------------------------------------------------------------
// PrimePowerStream

PrimePowerStream::PrimePowerStream(std::uint64_t limit) : limit_(limit) {
  if (limit_ < 2) {
    done_ = true;
    return;
  }
  base_primes_ = small_primes(static_cast<std::uint32_t>(isqrt(limit_)));
  for (std::uint32_t p : base_primes_) {
    const double lp = std::log(static_cast<double>(p));
    std::uint64_t q = std::uint64_t{p} * p;
    while (q <= limit_) {
      higher_powers_.emplace_back(q, lp);
      if (q > limit_ / p) break;
      q *= p;
    }
  }
  std::sort(higher_powers_.begin(), higher_powers_.end());
  seg_lo_ = 3;
  fill_segment();
}

void PrimePowerStream::fill_segment() {
  if (seg_lo_ > limit_) {
    segment_.clear();
    seg_pos_ = 0;
    return;
  }
  const std::uint64_t max_count = (limit_ - seg_lo_) / 2 + 1;
  const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(kSegmentOdds, max_count));
  segment_.assign(count, 1);
  const std::uint64_t seg_hi = seg_lo_ + 2 * (count - 1);  // last odd number covered
  for (std::size_t i = 1; i < base_primes_.size(); ++i) {
    const std::uint64_t p = base_primes_[i];
    if (p * p > seg_hi) break;
    std::uint64_t start = std::max(p * p, (seg_lo_ + p - 1) / p * p);
    if (start % 2 == 0) start += p;
    for (std::uint64_t j = (start - seg_lo_) / 2; j < count; j += p) segment_[j] = 0;
  }
  seg_pos_ = 0;
}

bool PrimePowerStream::next(std::uint64_t& n, double& log_p) {
  if (done_) return false;
  if (!emitted_two_) {
    emitted_two_ = true;
    n = 2;
    log_p = kLog2;
    return true;
  }
  // Next odd prime from the segments, 0 if exhausted.
  std::uint64_t prime = 0;
  while (!segment_.empty()) {
    while (seg_pos_ < segment_.size() && !segment_[seg_pos_]) ++seg_pos_;
    if (seg_pos_ < segment_.size()) {
      prime = seg_lo_ + 2 * seg_pos_;
      break;
    }
    seg_lo_ += 2 * segment_.size();
    fill_segment();
  }
  const bool have_power = higher_pos_ < higher_powers_.size();
  if (prime == 0 && !have_power) {
    done_ = true;
    return false;
  }
  if (have_power && (prime == 0 || higher_powers_[higher_pos_].first < prime)) {
    n = higher_powers_[higher_pos_].first;
    log_p = higher_powers_[higher_pos_].second;
    ++higher_pos_;
    return true;
  }
  n = prime;
  log_p = std::log(static_cast<double>(prime));
  ++seg_pos_;
  return true;
}

// ---------------------------------------------------------------------------
// MangoldtTable

MangoldtTable build_table(std::uint64_t limit, std::uint64_t budget) {
  if (limit < 2) throw DomainError("build_table: limit must be at least 2");
  if (limit > budget)
    throw CapacityError("build_table: limit " + std::to_string(limit) +
                        " exceeds the memory budget of " + std::to_string(budget) + " integers");
  if (limit > std::numeric_limits<std::uint32_t>::max())
    throw CapacityError("build_table: limit exceeds 32-bit table indices");
  MangoldtTable table;
  table.limit_ = limit;
  const double est = 1.1 * static_cast<double>(limit) / std::log(static_cast<double>(limit)) + 64;
  table.n_.reserve(static_cast<std::size_t>(est));
  table.k_.reserve(static_cast<std::size_t>(est));
  PrimePowerStream stream(limit);
  std::uint64_t n;
  double lp;
  while (stream.next(n, lp)) {
    table.n_.push_back(static_cast<std::uint32_t>(n));
    table.k_.push_back(static_cast<std::uint8_t>(
        std::lround(std::log(static_cast<double>(n)) / lp)));
  }
  table.finalize();
  return table;
}

void MangoldtTable::finalize() {
  const std::size_t blocks = n_.size() / kStride + 1;
  chk_s0_.assign(blocks, 0.0);
  chk_s1_.assign(blocks, 0.0);
  CompensatedSum s0, s1;
  for (std::size_t i = 0; i < n_.size(); ++i) {
    if (i % kStride == 0) {
      chk_s0_[i / kStride] = s0.value();
      chk_s1_[i / kStride] = s1.value();
    }
    const double ln = std::log(static_cast<double>(n_[i]));
    const double w = (ln / k_[i]) / std::sqrt(static_cast<double>(n_[i]));
    s0 += w;
    s1 += w * ln;
  }
  if (n_.size() % kStride == 0) {
    chk_s0_[n_.size() / kStride] = s0.value();
    chk_s1_[n_.size() / kStride] = s1.value();
  }
}

double MangoldtTable::log_limit() const { return std::log(static_cast<double>(limit_)); }

double MangoldtTable::lambda_at(std::size_t i) const {
  return std::log(static_cast<double>(n_[i])) / k_[i];
}

double MangoldtTable::lambda(std::uint64_t n) const {
  if (n == 0) throw DomainError("lambda: n must be positive");
  if (n > limit_) throw RangeError("lambda: n beyond table limit");
  auto it = std::lower_bound(n_.begin(), n_.end(), static_cast<std::uint32_t>(n));
  if (it == n_.end() || *it != n) return 0.0;
  return lambda_at(static_cast<std::size_t>(it - n_.begin()));
}

std::size_t MangoldtTable::count_upto_log(double t) const {
  if (n_.empty() || t < kLog2 * 0.5) return 0;
  const double x = std::min(exp_floor(t), static_cast<double>(limit_));
  auto idx = static_cast<std::size_t>(
      std::upper_bound(n_.begin(), n_.end(), static_cast<std::uint32_t>(x)) - n_.begin());
  // Membership is decided by log n <= t in binary64.
  while (idx > 0 && std::log(static_cast<double>(n_[idx - 1])) > t) --idx;
  while (idx < n_.size() && std::log(static_cast<double>(n_[idx])) <= t) ++idx;
  return idx;
}

std::pair<double, double> MangoldtTable::weighted_sums(double t, double sigma) const {
  const std::size_t idx = count_upto_log(t);
  CompensatedSum s0, s1;
  std::size_t start = 0;
  if (sigma == 0.5) {
    start = (idx / kStride) * kStride;
    s0 += chk_s0_[idx / kStride];
    s1 += chk_s1_[idx / kStride];
  }
  for (std::size_t i = start; i < idx; ++i) {
    const double ln = std::log(static_cast<double>(n_[i]));
    const double w = (ln / k_[i]) * std::exp(-sigma * ln);
    s0 += w;
    s1 += w * ln;
  }
  return {s0.value(), s1.value()};
}

double MangoldtTable::chebyshev_psi(std::uint64_t x) const {
  if (x > limit_) throw RangeError("chebyshev_psi: x beyond table limit");
  CompensatedSum s;
  for (std::size_t i = 0; i < n_.size() && n_[i] <= x; ++i) s += lambda_at(i);
  return s.value();
}

void MangoldtTable::save_cache(const std::string& path) const {
  if (limit_ > std::numeric_limits<std::uint32_t>::max())
    throw CapacityError("save_cache: limit does not fit the u32 header field");
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("save_cache: cannot open " + tmp);
    auto put_u32 = [&out](std::uint32_t v) {
      unsigned char b[4];
      for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
      out.write(reinterpret_cast<const char*>(b), 4);
    };
    out.write("ZSCREWLM", 8);
    put_u32(1);
    put_u32(static_cast<std::uint32_t>(limit_));
    std::size_t next = 0;
    for (std::uint64_t n = 1; n <= limit_; ++n) {
      double v = 0.0;
      if (next < n_.size() && n_[next] == n) v = lambda_at(next++);
      std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
      unsigned char b[8];
      for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
      out.write(reinterpret_cast<const char*>(b), 8);
    }
    if (!out) throw DataError("save_cache: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw DataError("save_cache: cannot rename into " + path);
}

MangoldtTable MangoldtTable::load_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_cache: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "ZSCREWLM", 8) != 0) throw DataError("load_cache: bad magic in " + path);
  auto get_u32 = [&in]() {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{b[i]} << (8 * i);
    return v;
  };
  const std::uint32_t version = get_u32();
  const std::uint32_t limit = get_u32();
  if (!in || version != 1) throw DataError("load_cache: unsupported version in " + path);
  MangoldtTable table;
  table.limit_ = limit;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw DataError("load_cache: truncated file " + path, static_cast<long>(n));
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t{b[i]} << (8 * i);
    const double v = std::bit_cast<double>(bits);
    if (v != 0.0) {
      const long k = std::lround(std::log(static_cast<double>(n)) / v);
      if (k < 1 || std::abs(k * v - std::log(static_cast<double>(n))) > 1e-9)
        throw DataError("load_cache: entry is not a von Mangoldt value", static_cast<long>(n));
      table.n_.push_back(static_cast<std::uint32_t>(n));
      table.k_.push_back(static_cast<std::uint8_t>(k));
    }
  }
  table.finalize();
  return table;
}

// ---------------------------------------------------------------------------
// Weighted Chebyshev sums

namespace {

void require_covered(double t, const MangoldtTable& table, const char* who) {
  if (exp_floor(t) > static_cast<double>(table.limit()))
    throw RangeError(std::string(who) + ": e^t = " + std::to_string(std::exp(t)) +
                     " exceeds the prime table limit " + std::to_string(table.limit()));
}

}  // namespace

double chebyshev_weighted(double t, const MangoldtTable& table) {
  if (t < 0) throw DomainError("chebyshev_weighted: t must be nonnegative");
  require_covered(t, table, "chebyshev_weighted");
  const auto [s0, s1] = table.weighted_sums(t);
  return t * s0 - s1;
}

double asymptotic_ratio(double t, const MangoldtTable& table) {
  return chebyshev_weighted(t, table) / (4.0 * std::exp(0.5 * t));
}

std::vector<double> chebyshev_weighted_scan(const std::vector<double>& ts, double sigma,
                                            std::uint64_t budget) {
  std::vector<double> out(ts.size(), 0.0);
  if (ts.empty()) return out;
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (ts[i] < ts[i - 1]) throw DomainError("chebyshev_weighted_scan: t values must ascend");
  const double x_max = exp_floor(std::max(0.0, ts.back()));
  if (x_max > static_cast<double>(budget))
    throw CapacityError("chebyshev_weighted_scan: e^t exceeds the prime budget");
  PrimePowerStream stream(static_cast<std::uint64_t>(x_max));
  CompensatedSum s0, s1;
  std::size_t idx = 0;
  std::uint64_t n;
  double lp;
  while (stream.next(n, lp)) {
    const double ln = std::log(static_cast<double>(n));
    while (idx < ts.size() && ln > ts[idx]) {
      out[idx] = ts[idx] * s0.value() - s1.value();
      ++idx;
    }
    const double w = lp * std::exp(-sigma * ln);
    s0 += w;
    s1 += w * ln;
  }
  for (; idx < ts.size(); ++idx) out[idx] = ts[idx] * s0.value() - s1.value();
  return out;
}

// ---------------------------------------------------------------------------
// Psi

PsiEvalResult psi_smooth_part(double t, const SpecFunAccuracy& acc) {
  t = std::abs(t);
  PsiEvalResult res;
  if (t == 0.0) return res;
  const double sh = std::sinh(0.25 * t);
  const double poles = 16.0 * sh * sh;
  const double linear = 0.5 * t * (digamma(0.25) - kLogPi);
  const SeriesResult phi = lerch_phi2(std::exp(-2.0 * t), 0.25, acc);
  const double decay = std::exp(-0.5 * t);
  res.value = poles + linear + 0.25 * (kScrewC - decay * phi.value);
  res.series_terms_used = phi.terms;
  res.est_error = 0.25 * decay * phi.est_error;
  return res;
}

PsiEvalResult psi_prime_side(double t, const MangoldtTable& table, const SpecFunAccuracy& acc) {
  t = std::abs(t);
  require_covered(t, table, "psi_prime_side");
  PsiEvalResult res = psi_smooth_part(t, acc);
  res.value -= chebyshev_weighted(t, table);
  res.prime_terms_used = static_cast<long>(table.count_upto_log(t));
  return res;
}

double psi_prime_derivative(double t) {
  if (!(t > 0.0 && t < kLog2))
    throw DomainError("psi_prime_derivative: t must lie in (0, log 2)");
  // Derivative of the smooth part; the -(log pi)/2 comes from the (t/2)(-log pi) term.
  const double c = kPi / 4.0 - 0.5 * (kEulerGamma + 3.0 * kLog2) - 0.5 * kLogPi;
  const double e = std::exp(0.5 * t);
  return 2.0 * (e - 1.0 / e) + c - std::atan(e) + std::atanh(1.0 / e);
}

std::pair<double, double> psi_critical_points() {
  const double t1 = find_root(psi_prime_derivative, 1e-6, 0.3, 1e-15);
  const double t2 = find_root(psi_prime_derivative, 0.3, kLog2 - 1e-9, 1e-15);
  return {t1, t2};
}

namespace {

bool omega_singular(double omega) {
  const double a = 0.25 + 0.5 * omega;
  return omega == -0.5 || (a <= 0 && a == std::floor(a));
}

}  // namespace

PsiEvalResult psi_omega_smooth_part(double t, double omega, const SpecFunAccuracy& acc) {
  t = std::abs(t);
  PsiEvalResult res;
  if (t == 0.0) return res;
  if (omega == 0.5) {
    const SeriesResult phi = lerch_phi2(std::exp(-2.0 * t), 0.5, acc);
    const double et = std::exp(-t);
    res.value = 0.5 * (t + 1.0) * (t + 1.0) - 1.5 + et -
                0.5 * t * (kEulerGamma + 2.0 * kLog2 + kLogPi) +
                0.25 * (0.5 * kPi * kPi - et * phi.value);
    res.series_terms_used = phi.terms;
    res.est_error = 0.25 * et * phi.est_error;
    return res;
  }
  if (omega_singular(omega))
    throw DomainError("psi_omega_smooth_part: closed form is singular at this omega");
  const double a = 0.25 + 0.5 * omega;
  const double u = 1.0 - 2.0 * omega, v = 1.0 + 2.0 * omega, uv = 1.0 - 4.0 * omega * omega;
  const double poles = 4.0 * (std::exp((0.5 - omega) * t) / (u * u) +
                              std::exp(-(0.5 + omega) * t) / (v * v) -
                              (4.0 - 2.0 * (1.0 - omega * t) * uv) / (uv * uv));
  double psi0, psi1;
  if (a > 0) {
    psi0 = digamma(a);
    psi1 = trigamma(a);
  } else {
    psi0 = digamma(cplx(a, 0.0)).real();
    psi1 = trigamma(cplx(a, 0.0)).real();
  }
  // Phi(z, 2, a) = 1/a^2 + z Phi(z, 2, a + 1) moves a into (0, 1].
  const double z = std::exp(-2.0 * t);
  double shifted = a, head = 0.0, zpow = 1.0;
  while (shifted <= 0) {
    head += zpow / (shifted * shifted);
    zpow *= z;
    shifted += 1.0;
  }
  const SeriesResult phi = lerch_phi2(z, shifted, acc);
  const double decay = std::exp(-(0.5 + omega) * t);
  res.value = poles + 0.5 * t * (psi0 - kLogPi) + 0.25 * (psi1 - decay * (head + zpow * phi.value));
  res.series_terms_used = phi.terms;
  res.est_error = 0.25 * decay * zpow * phi.est_error;
  return res;
}

PsiEvalResult psi_omega_prime_side(double t, double omega, const MangoldtTable& table,
                                   const SpecFunAccuracy& acc) {
  t = std::abs(t);
  require_covered(t, table, "psi_omega_prime_side");
  if (omega_singular(omega)) {
    PsiEvalResult res;
    res.value = psi_omega_transform(t, omega, table);
    res.prime_terms_used = static_cast<long>(table.count_upto_log(t));
    return res;
  }
  PsiEvalResult res = psi_omega_smooth_part(t, omega, acc);
  const auto [s0, s1] = table.weighted_sums(t, 0.5 + omega);
  res.value -= t * s0 - s1;
  res.prime_terms_used = static_cast<long>(table.count_upto_log(t));
  return res;
}

std::vector<double> prime_power_logs(double lo, double hi, const MangoldtTable& table) {
  std::vector<double> out;
  for (std::size_t i = table.count_upto_log(lo); i < table.prime_power_count(); ++i) {
    const double l = std::log(static_cast<double>(table.prime_power(i)));
    if (l >= hi) break;
    if (l > lo) out.push_back(l);
  }
  return out;
}

double psi_omega_shift(const std::function<double(double)>& psi_omega, double eta, double t,
                       const std::vector<double>& breaks, double tol) {
  t = std::abs(t);
  if (t == 0.0) return 0.0;
  std::vector<double> pts{0.0};
  for (double b : breaks)
    if (b > 0.0 && b < t) pts.push_back(b);
  pts.push_back(t);
  const auto integrand = [&](double u) {
    return std::exp(-eta * u) * psi_omega(u) * (2.0 * eta + eta * eta * (t - u));
  };
  const QuadResult q = integrate(integrand, pts, tol, 1e-14);
  if (!q.converged) throw TruncationError("psi_omega_shift: quadrature did not converge");
  return std::exp(-eta * t) * psi_omega(t) + q.value;
}

double psi_omega_shift(const std::vector<double>& samples, double eta, double t) {
  const std::size_t m = samples.size() > 0 ? samples.size() - 1 : 0;
  if (m < 2 || m % 2 != 0)
    throw DomainError("psi_omega_shift: need an odd number (>= 3) of uniform samples");
  const double h = t / static_cast<double>(m);
  CompensatedSum s;
  for (std::size_t i = 0; i <= m; ++i) {
    const double u = h * static_cast<double>(i);
    const double f = std::exp(-eta * u) * samples[i] * (2.0 * eta + eta * eta * (t - u));
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    s += w * f;
  }
  return std::exp(-eta * t) * samples[m] + s.value() * h / 3.0;
}

double psi_omega_transform(double t, double omega, const MangoldtTable& table, double tol) {
  t = std::abs(t);
  require_covered(t, table, "psi_omega_transform");
  const auto psi = [&table](double u) { return psi_prime_side(u, table).value; };
  return psi_omega_shift(psi, omega, t, prime_power_logs(0.0, t, table), tol);
}

namespace {

// Smooth part of Psi_omega, with the removable singularities of the closed
// form bridged by symmetric averages in omega and one Richardson step.
double omega_smooth(double t, double omega) {
  if (!omega_singular(omega)) return psi_omega_smooth_part(t, omega).value;
  constexpr double d = 1e-3;
  const auto avg = [t, omega](double h) {
    return 0.5 * (psi_omega_smooth_part(t, omega + h).value + psi_omega_smooth_part(t, omega - h).value);
  };
  return (4.0 * avg(d) - avg(2.0 * d)) / 3.0;
}

}  // namespace

SignChange find_sign_change(double omega, double t_max, double step, std::uint64_t prime_limit) {
  if (!(step > 0.0) || !(t_max >= step) || !std::isfinite(t_max))
    throw DomainError("find_sign_change: need 0 < step <= t_max");
  if (std::exp(t_max) > static_cast<double>(prime_limit))
    throw RangeError("find_sign_change: e^t_max exceeds the prime limit");
  const double sigma = 0.5 + omega;
  const std::size_t count = static_cast<std::size_t>(std::floor(t_max / step + 1e-9));

  SignChange out;
  out.min_value = std::numeric_limits<double>::infinity();
  PrimePowerStream stream(static_cast<std::uint64_t>(exp_floor(t_max)));
  CompensatedSum s0, s1;
  // Prime powers between the previous grid point and the current one.
  std::vector<std::pair<double, double>> pending;
  double prev_t = 0.0, prev_v = 0.0, prev_s0 = 0.0, prev_s1 = 0.0;
  std::uint64_t n = 0;
  double lp = 0.0;
  bool have = stream.next(n, lp);
  double ln = have ? std::log(static_cast<double>(n)) : 0.0;

  for (std::size_t i = 1; i <= count; ++i) {
    const double t = static_cast<double>(i) * step;
    pending.clear();
    while (have && ln <= t) {
      const double w = lp * std::exp(-sigma * ln);
      s0 += w;
      s1 += w * ln;
      pending.emplace_back(ln, w);
      have = stream.next(n, lp);
      if (have) ln = std::log(static_cast<double>(n));
    }
    const double v = omega_smooth(t, omega) - (t * s0.value() - s1.value());
    out.grid_points = i;
    if (v < out.min_value) {
      out.min_value = v;
      out.t_at_min = t;
    }
    if (i > 1 && ((prev_v > 0 && v < 0) || (prev_v < 0 && v > 0))) {
      const auto value_at = [&](double x) {
        double a0 = prev_s0, a1 = prev_s1;
        for (const auto& [l, w] : pending) {
          if (l > x) break;
          a0 += w;
          a1 += w * l;
        }
        return omega_smooth(x, omega) - (x * a0 - a1);
      };
      double lo = prev_t, hi = t;
      const bool lo_positive = prev_v > 0;
      for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((value_at(mid) > 0) == lo_positive)
          lo = mid;
        else
          hi = mid;
      }
      out.found = true;
      out.bracket_lo = prev_t;
      out.bracket_hi = t;
      out.t = 0.5 * (lo + hi);
      return out;
    }
    prev_t = t;
    prev_v = v;
    prev_s0 = s0.value();
    prev_s1 = s1.value();
  }
  return out;
}

}  // namespace zscrew
