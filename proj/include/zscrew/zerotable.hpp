#pragma once

// Zero side: ordinates gamma > 0 of the nontrivial zeros 1/2 + i gamma, the
// zero-sum form of Psi and of the kernel G, and Li coefficients from zeros.
// Every sum over zeros pairs gamma with -gamma and keeps twice the real part.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace zscrew {

struct ZeroTable {
  std::vector<double> ordinates;
  std::string source;
  bool assumed_simple = true;

  std::size_t size() const { return ordinates.size(); }
  double cutoff() const { return ordinates.empty() ? 0.0 : ordinates.back(); }
};

enum class TailMode { None, DensityIntegral };

// Omitted tail beyond the largest ordinate.  `est` approximates sum_{gamma > cutoff} 2/gamma^2.
struct TailModel {
  double cutoff = 0.0;
  TailMode mode = TailMode::None;
  double est = 0.0;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double mid() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }
  bool contains(double x) const { return lower <= x && x <= upper; }
};

// Text file, one ordinate per line, '#' comments.  Reads at most `limit`
// ordinates (0 means all) and checks ordering, the first zero and the
// zero-counting density.
ZeroTable load_zeros(const std::string& path, std::size_t limit);
// Same checks on ordinates already in memory.
void validate_zeros(const ZeroTable& table);

// Smooth zero count (T/2pi) log(T/2pi) - T/2pi + 7/8.
double zero_count_smooth(double t);

// (1/pi)(log(cutoff/2pi) + 1)/cutoff; needs cutoff >= 100.
double tail_sigma2(double cutoff);
TailModel make_tail(const ZeroTable& table, TailMode mode = TailMode::DensityIntegral);

// 2 sum (1 - cos gamma t)/gamma^2 with the one-sided tail [0, 2 est].
Interval psi_zero_side(double t, const ZeroTable& table, const TailModel& tail);

// Psi(t) + Psi(u) - Psi(t - u) from any even evaluator of Psi.
double kernel_G(double t, double u, const std::function<double(double)>& psi);

Interval kernel_G_zero_sum(double t, double u, const ZeroTable& table, const TailModel& tail);

// Truncated zero sum plus a density-integral estimate of what was cut off.
struct ZeroSum {
  double value = 0.0;       // truncated sum + tail estimate
  double truncated = 0.0;   // sum over the table only
  double tail = 0.0;        // heuristic, not a bound
};

ZeroSum li_from_zeros(int n, const ZeroTable& table, const TailModel& tail);

// sum_rho rho^{-m}, m >= 2.
ZeroSum zero_power_sum(int m, const ZeroTable& table, const TailModel& tail = {});

}  // namespace zscrew
