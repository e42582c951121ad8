#include "zscrew/zerotable.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "zscrew/errors.hpp"
#include "zscrew/numeric.hpp"
#include "zscrew/specfun.hpp"

namespace zscrew {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kDensitySlack = 2.0;
constexpr int kMaxLiIndex = 10000;

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// int_X^inf f(u) dN(u) with dN = (1/2pi) log(u/2pi) du, substituting u = X/s.
double density_tail(const std::function<double(double)>& f, double cutoff) {
  const auto g = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double u = cutoff / s;
    return f(u) * std::log(u / kTwoPi) / kTwoPi * cutoff / (s * s);
  };
  return integrate(g, 0.0, 1.0, 1e-18, 1e-10).value;
}

}  // namespace

double zero_count_smooth(double t) {
  const double x = t / kTwoPi;
  return x * std::log(x) - x + 0.875;
}

void validate_zeros(const ZeroTable& table) {
  const auto& g = table.ordinates;
  if (g.empty()) throw DataError("zero table is empty");
  if (!(g[0] > 14.0 && g[0] < 14.2))
    throw DataError("first ordinate " + std::to_string(g[0]) + " is not the first zero", 0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (k > 0 && !(g[k] > g[k - 1]))
      throw DataError("ordinates not strictly increasing at entry " + std::to_string(k + 1));
    // N jumps from k to k+1 at g[k]; both sides must sit near the smooth count.
    const double smooth = zero_count_smooth(g[k]);
    if (std::abs(static_cast<double>(k + 1) - smooth) > kDensitySlack ||
        std::abs(static_cast<double>(k) - smooth) > kDensitySlack)
      throw DataError("zero count at height " + std::to_string(g[k]) +
                      " disagrees with the Riemann-von Mangoldt density");
  }
}

ZeroTable load_zeros(const std::string& path, std::size_t limit) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open zero file " + path);
  if (limit == 0) limit = std::numeric_limits<std::size_t>::max();
  ZeroTable table;
  table.source = path;
  std::string line;
  long line_no = 0;
  while (table.ordinates.size() < limit && std::getline(in, line)) {
    ++line_no;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
      throw DataError(path + ":" + std::to_string(line_no) + ": cannot parse ordinate", line_no);
    if (!(v > 0.0))
      throw DataError(path + ":" + std::to_string(line_no) + ": ordinate must be positive", line_no);
    if (!table.ordinates.empty() && !(v > table.ordinates.back()))
      throw DataError(path + ":" + std::to_string(line_no) + ": ordinates not strictly increasing",
                      line_no);
    table.ordinates.push_back(v);
  }
  validate_zeros(table);
  return table;
}

double tail_sigma2(double cutoff) {
  if (!(cutoff >= 100.0)) throw DomainError("tail_sigma2: cutoff must be at least 100");
  return (std::log(cutoff / kTwoPi) + 1.0) / (kPi * cutoff);
}

TailModel make_tail(const ZeroTable& table, TailMode mode) {
  TailModel tail;
  tail.cutoff = table.cutoff();
  tail.mode = mode;
  if (mode == TailMode::DensityIntegral) tail.est = tail_sigma2(tail.cutoff);
  return tail;
}

Interval psi_zero_side(double t, const ZeroTable& table, const TailModel& tail) {
  if (table.ordinates.empty()) throw DomainError("psi_zero_side: empty zero table");
  if (t == 0.0) return {0.0, 0.0};
  CompensatedSum s;
  for (const double g : table.ordinates) {
    const double h = std::sin(0.5 * g * t) / g;
    s += 4.0 * h * h;  // 2 (1 - cos g t) / g^2
  }
  const double c = s.value();
  return {c, c + 2.0 * tail.est};
}

double kernel_G(double t, double u, const std::function<double(double)>& psi) {
  return psi(std::abs(t)) + psi(std::abs(u)) - psi(std::abs(t - u));
}

Interval kernel_G_zero_sum(double t, double u, const ZeroTable& table, const TailModel& tail) {
  if (table.ordinates.empty()) throw DomainError("kernel_G_zero_sum: empty zero table");
  CompensatedSum s;
  for (const double g : table.ordinates) {
    const double inv2 = 1.0 / (g * g);
    s += 2.0 * (std::cos(g * (t - u)) - std::cos(g * t) - std::cos(g * u) + 1.0) * inv2;
  }
  const double c = s.value();
  return {c - 4.0 * tail.est, c + 4.0 * tail.est};
}

ZeroSum li_from_zeros(int n, const ZeroTable& table, const TailModel& tail) {
  if (n < 1) throw DomainError("li_from_zeros: n must be at least 1");
  if (n > kMaxLiIndex) throw DomainError("li_from_zeros: n above 10^4 is not supported");
  // A pair contributes 2(1 - cos n theta) with theta = 2 atan(1/(2 gamma)).
  const auto term = [n](double g) {
    const double h = std::sin(n * std::atan(0.5 / g));
    return 4.0 * h * h;
  };
  CompensatedSum s;
  for (const double g : table.ordinates) s += term(g);
  ZeroSum r;
  r.truncated = s.value();
  if (tail.mode == TailMode::DensityIntegral) r.tail = density_tail(term, tail.cutoff);
  r.value = r.truncated + r.tail;
  return r;
}

ZeroSum zero_power_sum(int m, const ZeroTable& table, const TailModel& tail) {
  if (m < 2) throw DomainError("zero_power_sum: m must be at least 2");
  const auto term = [m](double g) {
    const double r2 = 0.25 + g * g;
    return 2.0 * std::pow(r2, -0.5 * m) * std::cos(m * std::atan2(g, 0.5));
  };
  CompensatedSum s;
  for (const double g : table.ordinates) s += term(g);
  ZeroSum r;
  r.truncated = s.value();
  if (tail.mode == TailMode::DensityIntegral) r.tail = density_tail(term, tail.cutoff);
  r.value = r.truncated + r.tail;
  return r;
}

}  // namespace zscrew
