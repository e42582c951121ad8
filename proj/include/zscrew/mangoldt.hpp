#pragma once

// Prime side: the von Mangoldt function, the weighted Chebyshev sum
//   phi(t) = sum_{n <= e^t} Lambda(n) n^{-1/2} (t - log n)
// and the evaluation of Psi(t) and its shifted variants Psi_omega(t) from
// primes plus special functions.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "zscrew/specfun.hpp"

namespace zscrew {

inline constexpr std::uint64_t kDefaultPrimeBudget = std::uint64_t{1} << 31;

// Ascending enumeration of prime powers p^k <= limit by a segmented sieve.
// Memory is O(sqrt(limit)) regardless of the limit.
class PrimePowerStream {
 public:
  explicit PrimePowerStream(std::uint64_t limit);
  // Yields the next prime power n with log p; false once past the limit.
  bool next(std::uint64_t& n, double& log_p);

 private:
  void fill_segment();

  std::uint64_t limit_;
  std::vector<std::uint32_t> base_primes_;
  std::vector<std::pair<std::uint64_t, double>> higher_powers_;  // p^k, k >= 2, sorted
  std::size_t higher_pos_ = 0;
  std::vector<std::uint8_t> segment_;  // odd numbers only
  std::uint64_t seg_lo_ = 0;           // first odd number in segment
  std::size_t seg_pos_ = 0;
  bool emitted_two_ = false;
  bool done_ = false;
};

// Immutable table of the prime powers up to `limit` with checkpointed prefix
// sums of Lambda(n)/sqrt(n) and Lambda(n) log(n)/sqrt(n).  Lambda(n) is only
// stored where it is nonzero.
class MangoldtTable {
 public:
  MangoldtTable() = default;

  std::uint64_t limit() const { return limit_; }
  double log_limit() const;
  std::size_t prime_power_count() const { return n_.size(); }
  std::uint64_t prime_power(std::size_t i) const { return n_[i]; }
  double lambda_at(std::size_t i) const;
  // Lambda(n) for any 1 <= n <= limit.
  double lambda(std::uint64_t n) const;

  // Number of stored prime powers n with log n <= t.
  std::size_t count_upto_log(double t) const;

  // sum_{log n <= t} Lambda(n) n^{-sigma} and sum Lambda(n) log(n) n^{-sigma}.
  std::pair<double, double> weighted_sums(double t, double sigma = 0.5) const;
  // Chebyshev psi(x) = sum_{n <= x} Lambda(n).
  double chebyshev_psi(std::uint64_t x) const;

  // Binary cache: "ZSCREWLM", u32 version, u32 limit, then Lambda(1..limit) as
  // little-endian float64.
  void save_cache(const std::string& path) const;
  static MangoldtTable load_cache(const std::string& path);

 private:
  friend MangoldtTable build_table(std::uint64_t, std::uint64_t);
  void finalize();

  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> n_;
  std::vector<std::uint8_t> k_;
  static constexpr std::size_t kStride = 64;
  std::vector<double> chk_s0_, chk_s1_;  // sums over entries [0, j * kStride)
};

// Throws CapacityError when limit exceeds the budget (count of integers covered).
MangoldtTable build_table(std::uint64_t limit, std::uint64_t budget = kDefaultPrimeBudget);

double chebyshev_weighted(double t, const MangoldtTable& table);
double asymptotic_ratio(double t, const MangoldtTable& table);

// phi_sigma(t) = sum_{n <= e^t} Lambda(n) n^{-sigma} (t - log n) at every t of
// an ascending list, by one streaming pass up to e^{max t}.
std::vector<double> chebyshev_weighted_scan(const std::vector<double>& ts, double sigma = 0.5,
                                            std::uint64_t budget = kDefaultPrimeBudget);

struct PsiEvalResult {
  double value = 0.0;
  long prime_terms_used = 0;
  long series_terms_used = 0;
  double est_error = 0.0;
};

// Everything in Psi except the prime sum:
//   4(e^{t/2} + e^{-t/2} - 2) + (t/2)(psi(1/4) - log pi) + (C - e^{-t/2} Phi(e^{-2t}, 2, 1/4))/4
PsiEvalResult psi_smooth_part(double t, const SpecFunAccuracy& acc = {});

PsiEvalResult psi_prime_side(double t, const MangoldtTable& table, const SpecFunAccuracy& acc = {});

// Psi'(t) on (0, log 2), where no prime term is active.
double psi_prime_derivative(double t);
// The two roots t1 < t2 of psi_prime_derivative on (0, log 2).
std::pair<double, double> psi_critical_points();

// Smooth part of Psi_omega (everything but the prime sum).
PsiEvalResult psi_omega_smooth_part(double t, double omega, const SpecFunAccuracy& acc = {});

PsiEvalResult psi_omega_prime_side(double t, double omega, const MangoldtTable& table,
                                   const SpecFunAccuracy& acc = {});

// Psi_omega(t) as the integral transform of Psi, by adaptive quadrature with
// breakpoints at prime-power logarithms.  Valid for every real omega.
double psi_omega_transform(double t, double omega, const MangoldtTable& table, double tol = 1e-12);

// Psi_{omega+eta}(t) from Psi_omega by the shift identity.  `breaks` lists
// interior points where psi_omega has kinks (prime-power logarithms).
double psi_omega_shift(const std::function<double(double)>& psi_omega, double eta, double t,
                       const std::vector<double>& breaks = {}, double tol = 1e-12);

// Same identity from samples of Psi_omega on a uniform grid 0 = u_0 < ... < u_m = t
// (composite Simpson, m even).  Throws DomainError for too few or uneven samples.
double psi_omega_shift(const std::vector<double>& samples, double eta, double t);

struct SignChange {
  bool found = false;
  double t = 0.0;                     // root located by bisection
  double bracket_lo = 0.0, bracket_hi = 0.0;
  double min_value = 0.0;             // smallest grid value seen
  double t_at_min = 0.0;
  std::size_t grid_points = 0;        // points evaluated before stopping
};

// First sign change of Psi_omega on the grid step, 2 step, ..., <= t_max,
// refined by bisection.  One streaming pass over the primes that stops at the
// first change.  Throws RangeError when e^{t_max} exceeds the prime limit.
// At the poles of the closed form the smooth part is taken as a limit in omega.
SignChange find_sign_change(double omega, double t_max, double step,
                            std::uint64_t prime_limit = kDefaultPrimeBudget);

// Prime-power logarithms in (lo, hi), for quadrature breakpoints.
std::vector<double> prime_power_logs(double lo, double hi, const MangoldtTable& table);

}  // namespace zscrew
