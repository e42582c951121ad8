// zscrew: command-line front end.
//
// Exit codes: 0 ok, 1 configuration, 2 data, 3 numerical failure or a check
// that did not pass.  Output is assembled in memory and written at the end,
// to --out through a temporary file and rename, so a failed run leaves no
// partial file behind.

#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "zscrew/errors.hpp"
#include "zscrew/mangoldt.hpp"
#include "zscrew/moments.hpp"
#include "zscrew/report.hpp"
#include "zscrew/spectral.hpp"
#include "zscrew/weil.hpp"
#include "zscrew/zerotable.hpp"

#ifndef ZSCREW_DEFAULT_ZEROS
#define ZSCREW_DEFAULT_ZEROS ""
#endif

namespace {

using namespace zscrew;

enum class Format { Csv, Jsonl };

struct RunConfig {
  std::string zeros_path = ZSCREW_DEFAULT_ZEROS;
  std::size_t zeros_limit = 100000;
  std::uint64_t prime_limit = kDefaultPrimeBudget;
  double abs_tol = 1e-4;
  double t_cut = 200.0;
  Format output_format = Format::Csv;
  int threads = 1;
};

// Raw settings from one source, keyed as in the config file.
using Settings = std::map<std::string, std::string>;

const char* const kKeys[] = {"zeros", "zeros_limit", "prime_limit", "abs_tol", "t_cut", "format", "threads"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Settings read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  Settings out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

Settings read_env() {
  Settings out;
  for (const char* key : kKeys) {
    std::string name = "ZSCREW_";
    for (const char* c = key; *c; ++c) name += static_cast<char>(std::toupper(static_cast<unsigned char>(*c)));
    if (const char* v = std::getenv(name.c_str())) out[key] = v;
  }
  return out;
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (in.fail() || !(in >> std::ws).eof()) throw ConfigError("bad value '" + text + "' for " + key);
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  // Accepts 2147483648 as well as 1e6.
  const double d = parse_value<double>(key, text);
  if (!(d >= 0) || d > 1.8e19 || d != std::floor(d)) throw ConfigError("bad value '" + text + "' for " + key);
  return static_cast<std::uint64_t>(d);
}

void apply_settings(RunConfig& cfg, const Settings& s) {
  for (const auto& [key, v] : s) {
    if (key == "zeros")
      cfg.zeros_path = v;
    else if (key == "zeros_limit")
      cfg.zeros_limit = parse_count(key, v);
    else if (key == "prime_limit")
      cfg.prime_limit = parse_count(key, v);
    else if (key == "abs_tol")
      cfg.abs_tol = parse_value<double>(key, v);
    else if (key == "t_cut")
      cfg.t_cut = parse_value<double>(key, v);
    else if (key == "threads")
      cfg.threads = parse_value<int>(key, v);
    else if (key == "format") {
      if (v == "csv")
        cfg.output_format = Format::Csv;
      else if (v == "jsonl")
        cfg.output_format = Format::Jsonl;
      else
        throw ConfigError("format must be csv or jsonl, got '" + v + "'");
    }
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.zeros_limit < 100) throw ConfigError("zeros_limit must be at least 100");
  if (cfg.prime_limit < 10000) throw ConfigError("prime_limit must be at least 10000");
  if (!(cfg.abs_tol > 0 && cfg.abs_tol <= 1e-2)) throw ConfigError("abs_tol must lie in (0, 1e-2]");
  if (!(cfg.t_cut > 0) || !std::isfinite(cfg.t_cut)) throw ConfigError("t_cut must be positive");
  if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
}

// ---------------------------------------------------------------------------
// Tabular output

using Cell = std::variant<double, long, bool, std::string>;

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void row(std::vector<Cell> cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("row width does not match the header");
    rows_.push_back(std::move(cells));
  }

  std::string render(Format f) const {
    std::string out;
    if (f == Format::Csv) {
      out += "# zscrew-csv v1\n";
      for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
      out += '\n';
      for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (i) out += ',';
          out += csv_cell(r[i]);
        }
        out += '\n';
      }
    } else {
      for (const auto& r : rows_) {
        nlohmann::ordered_json j;
        for (std::size_t i = 0; i < r.size(); ++i)
          std::visit([&](const auto& v) { j[columns_[i]] = json_value(v); }, r[i]);
        out += j.dump() + '\n';
      }
    }
    return out;
  }

 private:
  static std::string number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  static std::string csv_cell(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) return number(*d);
    if (const long* l = std::get_if<long>(&c)) return std::to_string(*l);
    if (const bool* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    return std::get<std::string>(c);
  }
  static nlohmann::ordered_json json_value(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
  }
  template <class T>
  static nlohmann::ordered_json json_value(const T& v) {
    return v;
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text << std::flush;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(out_path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + tmp.string());
    f << text;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw DataError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw DataError("cannot rename onto " + out_path + ": " + ec.message());
  }
}

// ---------------------------------------------------------------------------
// Shared resources

class Resources {
 public:
  explicit Resources(const RunConfig& cfg) : cfg_(cfg) {}

  const ZeroTable& zeros() {
    if (!zeros_) {
      if (cfg_.zeros_path.empty()) throw ConfigError("no zeros file: pass --zeros or set ZSCREW_ZEROS");
      zeros_ = load_zeros(cfg_.zeros_path, cfg_.zeros_limit);
    }
    return *zeros_;
  }
  const TailModel& tail() {
    if (!tail_) tail_ = make_tail(zeros());
    return *tail_;
  }
  // Table covering log n <= t_max, never below 10^4 and never past prime_limit.
  const MangoldtTable& primes(double t_max) {
    const double need = std::max(1e4, std::ceil(std::exp(std::max(0.0, t_max))));
    if (need > static_cast<double>(cfg_.prime_limit))
      throw RangeError("t = " + std::to_string(t_max) + " needs primes past prime_limit " +
                       std::to_string(cfg_.prime_limit));
    const auto limit = static_cast<std::uint64_t>(need);
    if (!primes_ || primes_->limit() < limit) primes_ = build_table(limit, cfg_.prime_limit);
    return *primes_;
  }

 private:
  RunConfig cfg_;
  std::optional<ZeroTable> zeros_;
  std::optional<TailModel> tail_;
  std::optional<MangoldtTable> primes_;
};

std::vector<double> grid(double lo, double hi, double step) {
  if (!(step > 0) || !std::isfinite(step)) throw ConfigError("--step must be positive");
  if (!(hi >= lo)) throw ConfigError("--t needs LO <= HI");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (n > 50000000) throw ConfigError("grid has too many points");
  std::vector<double> ts(n);
  for (std::size_t i = 0; i < n; ++i) ts[i] = lo + static_cast<double>(i) * step;
  return ts;
}

// Prime-side Psi at arbitrary t by one streaming pass over the primes.
std::vector<double> psi_prime_values(const std::vector<double>& ts, std::uint64_t prime_limit) {
  std::vector<std::size_t> order(ts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&ts](std::size_t a, std::size_t b) { return std::abs(ts[a]) < std::abs(ts[b]); });
  std::vector<double> sorted(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) sorted[i] = std::abs(ts[order[i]]);
  if (!sorted.empty() && std::exp(sorted.back()) > static_cast<double>(prime_limit))
    throw RangeError("|t| = " + std::to_string(sorted.back()) + " needs primes past prime_limit");
  const std::vector<double> phi = chebyshev_weighted_scan(sorted, 0.5, prime_limit);
  std::vector<double> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) out[order[i]] = psi_smooth_part(sorted[i]).value - phi[i];
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands.  Each returns the process exit code.

struct PsiArgs {
  std::vector<double> t{0.0, 1.0};
  double step = 0.01;
  std::string side = "prime";
  bool figure1 = false;
};

int cmd_psi(const PsiArgs& a, const RunConfig& cfg, Resources& res, std::string& out) {
  std::vector<double> ts;
  if (a.figure1) {
    const double hi = std::log(10.0);
    for (int i = 0; i < 1000; ++i) ts.push_back(hi * i / 999.0);
  } else {
    ts = grid(a.t[0], a.t[1], a.step);
  }
  const bool want_prime = a.side != "zeros", want_zero = a.side != "prime";
  std::vector<std::string> cols{"t"};
  if (want_prime) cols.push_back("psi_prime");
  if (want_zero) {
    cols.push_back("zero_lo");
    cols.push_back("zero_hi");
  }
  if (want_prime && want_zero) cols.push_back("agree");
  std::size_t marker = 0;
  if (a.figure1) {
    cols.push_back("marker_log2");
    for (std::size_t i = 1; i < ts.size(); ++i)
      if (std::abs(ts[i] - std::log(2.0)) < std::abs(ts[marker] - std::log(2.0))) marker = i;
  }
  Table table(cols);
  std::vector<double> prime;
  if (want_prime) prime = psi_prime_values(ts, cfg.prime_limit);
  bool all_agree = true;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::vector<Cell> row{ts[i]};
    if (want_prime) row.emplace_back(prime[i]);
    if (want_zero) {
      const Interval z = psi_zero_side(ts[i], res.zeros(), res.tail());
      row.emplace_back(z.lower);
      row.emplace_back(z.upper);
      if (want_prime) {
        const bool ok = prime[i] >= z.lower - cfg.abs_tol && prime[i] <= z.upper + cfg.abs_tol;
        all_agree = all_agree && ok;
        row.emplace_back(ok);
      }
    }
    if (a.figure1) row.emplace_back(static_cast<long>(i == marker));
    table.row(std::move(row));
  }
  out = table.render(cfg.output_format);
  return all_agree ? 0 : 3;
}

struct PsiOmegaArgs {
  double omega = 0.0;
  std::vector<double> t{0.0, 1.0};
  double step = 0.01;
};

int cmd_psi_omega(const PsiOmegaArgs& a, const RunConfig& cfg, Resources& res, std::string& out) {
  const std::vector<double> ts = grid(a.t[0], a.t[1], a.step);
  double t_max = 0.0;
  for (double t : ts) t_max = std::max(t_max, std::abs(t));
  const MangoldtTable& tb = res.primes(t_max);
  Table table({"t", "omega", "psi_omega"});
  for (double t : ts) table.row({t, a.omega, psi_omega_prime_side(t, a.omega, tb).value});
  out = table.render(cfg.output_format);
  return 0;
}

struct ScanArgs {
  double omega = 0.0;
  double t_max = 10.0;
  double step = 1e-3;
  bool clip = false;
};

int cmd_scan_sign(const ScanArgs& a, const RunConfig& cfg, std::string& out) {
  if (!(a.omega >= -1.0 && a.omega <= 1.0)) throw RangeError("omega must lie in [-1, 1]");
  double t_max = a.t_max;
  const double ceiling = std::log(static_cast<double>(cfg.prime_limit)) - 1e-9;
  if (a.clip) t_max = std::min(t_max, ceiling);
  if (t_max > ceiling)
    throw RangeError("e^t_max exceeds prime_limit; t_max can be at most " + std::to_string(ceiling) +
                     " (or pass --clip)");
  const SignChange s = find_sign_change(a.omega, t_max, a.step, cfg.prime_limit);
  const double nan = std::nan("");
  Table table({"omega", "t_max", "result", "t_change", "bracket_lo", "bracket_hi", "min_value", "t_at_min"});
  table.row({a.omega, t_max, std::string(s.found ? "found" : "none"), s.found ? s.t : nan,
             s.found ? s.bracket_lo : nan, s.found ? s.bracket_hi : nan, s.min_value, s.t_at_min});
  out = table.render(cfg.output_format);
  return 0;
}

struct NArgs {
  int n_max = 6;
  std::string method = "zeros";
};

MomentSequence moments_for(int n_max, const RunConfig& cfg, Resources& res) {
  MomentOptions opts;
  opts.t_cut = cfg.t_cut;
  return moment_sequence(n_max, res.primes(std::min(std::log(1e6), std::log(double(cfg.prime_limit)))), res.zeros(),
                         res.tail(), opts);
}

int cmd_moments(const NArgs& a, const RunConfig& cfg, Resources& res, std::string& out) {
  if (a.n_max < 0) throw ConfigError("--n-max must be non-negative");
  const MomentSequence mu = moments_for(a.n_max, cfg, res);
  Table table({"n", "value", "est_error", "method"});
  for (int n = 0; n <= a.n_max; ++n)
    table.row({static_cast<long>(n), mu.values[n], mu.est_errors[n], std::string("quadrature")});
  out = table.render(cfg.output_format);
  return 0;
}

int cmd_li(const NArgs& a, const RunConfig& cfg, Resources& res, std::string& out) {
  if (a.n_max < 1) throw ConfigError("--n-max must be at least 1");
  Table table({"n", "value", "est_error", "method"});
  if (a.method == "zeros") {
    for (int n = 1; n <= a.n_max; ++n) {
      const ZeroSum z = li_from_zeros(n, res.zeros(), res.tail());
      table.row({static_cast<long>(n), z.value, std::abs(z.tail), std::string("zeros")});
    }
  } else {
    const MomentSequence mu = moments_for(a.n_max - 1, cfg, res);
    const LiSequence li = li_sequence_from_moments(mu, a.n_max);
    for (int n = 1; n <= a.n_max; ++n) {
      double err = 0.0;
      for (int k = 0; k < n; ++k) err += std::abs(li_coefficient(n, k)) * mu.est_errors[k];
      table.row({static_cast<long>(n), li.at(n), err, std::string("moments")});
    }
  }
  out = table.render(cfg.output_format);
  return 0;
}

int cmd_hankel(const NArgs& a, const RunConfig& cfg, Resources& res, std::string& out) {
  if (a.n_max < 0) throw ConfigError("--n-max must be non-negative");
  const MomentSequence mu = moments_for(2 * a.n_max + 1, cfg, res);
  Table table({"n", "value", "est_error", "method"});
  for (int n = 0; n <= a.n_max; ++n)
    for (bool shifted : {false, true}) {
      const HankelResult h = hankel_det(mu, n, shifted);
      table.row({static_cast<long>(n), h.det, h.error_bound, std::string(shifted ? "shifted" : "plain")});
    }
  out = table.render(cfg.output_format);
  return 0;
}

struct SpectrumArgs {
  double a = 1.0;
  int nodes = 200;
  int zero_system = 0;
  bool raw = false;
  std::string method = "nystrom";
};

int cmd_spectrum(const SpectrumArgs& a, const RunConfig& cfg, Resources& res, std::string& out) {
  if (!(a.a > 0)) throw ConfigError("--a must be positive");
  std::vector<double> eig;
  if (a.zero_system > 0) {
    const ZeroTable& z = res.zeros();
    if (static_cast<std::size_t>(a.zero_system) > z.size())
      throw ConfigError("--zero-system exceeds the number of loaded zeros");
    if (a.raw || z.ordinates[a.zero_system - 1] < 100.0)
      eig = zero_system_spectrum(a.a, z, a.zero_system);
    else
      eig = zero_system_report(a.a, z, a.zero_system).corrected;
  } else {
    static const std::map<std::string, OperatorMethod> methods{{"nystrom", OperatorMethod::Nystrom},
                                                               {"plain", OperatorMethod::NystromPlain},
                                                               {"midpoint", OperatorMethod::NystromMidpoint},
                                                               {"galerkin", OperatorMethod::Galerkin}};
    DiscretizeOptions opts;
    opts.method = methods.at(a.method);
    opts.threads = cfg.threads;
    const auto psi = prime_side_psi(res.primes(2.0 * a.a));
    eig = spectrum(discretize(a.a, a.nodes, psi, opts)).eigenvalues;
  }
  Table table({"index", "eigenvalue"});
  for (std::size_t i = 0; i < eig.size(); ++i) table.row({static_cast<long>(i), eig[i]});
  out = table.render(cfg.output_format);
  return 0;
}

int cmd_weil_check(double t, const RunConfig& cfg, Resources& res, std::string& out) {
  if (!(t > 0)) throw ConfigError("--t must be positive");
  const auto r = explicit_formula_check(triangle(t), res.zeros(), res.tail(), res.primes(t));
  const bool pass = std::abs(r.residual) <= cfg.abs_tol;
  Table table({"t", "zero_side", "archimedean", "prime_side", "pole_terms", "log_pi_term", "lhs", "rhs", "residual",
               "quadrature_error", "zero_tail", "pass"});
  table.row({t, r.zero_side, r.archimedean, r.prime_side, r.pole_terms, r.log_pi_term, r.lhs, r.rhs, r.residual,
             r.quadrature_error, r.zero_tail, pass});
  out = table.render(cfg.output_format);
  return pass ? 0 : 3;
}

int cmd_chi_check(double a, int k, const RunConfig& cfg, Resources& res, std::string& out) {
  if (!(a > 0)) throw ConfigError("--a must be positive");
  const ChiPair lhs = chi_pairing_lhs(k, a, res.zeros(), res.tail());
  const ChiPair rhs = chi_pairing_rhs(k, a, res.primes(2.0 * a));
  const double residual = lhs.total() - rhs.total();
  const bool pass = std::abs(residual) <= cfg.abs_tol;
  Table table({"a", "k", "zeros_first", "zeros_second", "zeros_total", "closed_first", "closed_second",
               "closed_total", "residual", "zero_tail", "pass"});
  table.row({a, static_cast<long>(k), lhs.first, lhs.second, lhs.total(), rhs.first, rhs.second, rhs.total(),
             residual, lhs.tail, pass});
  out = table.render(cfg.output_format);
  return pass ? 0 : 3;
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Near:
      return "near";
    case Relation::AtMost:
      return "at_most";
    case Relation::AtLeast:
      return "at_least";
    case Relation::Above:
      return "above";
    case Relation::Holds:
      return "holds";
  }
  return "";
}

// Always JSON lines: one record per check, then one summary per criterion.
int cmd_report(const std::string& suite_name, const RunConfig& cfg, std::string& out) {
  const Suite suite = parse_suite(suite_name);
  ReportConfig rc;
  rc.zeros_path = cfg.zeros_path;
  rc.zeros_limit = cfg.zeros_limit;
  rc.prime_limit = cfg.prime_limit;
  rc.t_cut = cfg.t_cut;
  rc.threads = cfg.threads;
  if (rc.zeros_path.empty()) throw ConfigError("no zeros file: pass --zeros or set ZSCREW_ZEROS");
  ReportContext ctx(rc);
  ctx.zeros();  // surface data errors before any work
  bool all = true;
  for (int id : suite_criteria(suite)) {
    const CriterionResult r = run_criterion(id, ctx);
    for (const Check& c : r.checks) {
      nlohmann::ordered_json j;
      j["id"] = c.id;
      j["target"] = c.target;
      j["computed"] = std::isfinite(c.computed) ? nlohmann::ordered_json(c.computed) : nullptr;
      j["tol"] = c.tol;
      j["pass"] = c.pass;
      j["relation"] = relation_name(c.relation);
      j["description"] = c.description;
      out += j.dump() + '\n';
    }
    nlohmann::ordered_json s;
    s["id"] = std::to_string(r.id);
    s["criterion"] = r.title;
    s["pass"] = r.pass();
    s["seconds"] = r.seconds;
    if (!r.note.empty()) s["note"] = r.note;
    out += s.dump() + '\n';
    all = all && r.pass();
  }
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerics for the screw function Psi of the Riemann xi-function"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path, zeros, format, out_path;
  std::optional<std::string> zeros_limit, prime_limit;
  std::optional<double> abs_tol, t_cut;
  std::optional<int> threads;
  app.add_option("--config", config_path, "key=value config file (also ZSCREW_CONFIG)");
  app.add_option("--zeros", zeros, "zero ordinates file");
  app.add_option("--zeros-limit", zeros_limit, "use the first N zeros (>= 100)");
  app.add_option("--prime-limit", prime_limit, "largest integer sieved (>= 10000)");
  app.add_option("--abs-tol", abs_tol, "agreement tolerance in (0, 1e-2]");
  app.add_option("--t-cut", t_cut, "moment integrals are bounded past this t");
  app.add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--threads", threads, "worker threads for matrix assembly");
  app.add_option("--out", out_path, "output file (default stdout)");

  PsiArgs psi;
  auto* c_psi = app.add_subcommand("psi", "Psi(t) on a grid from the prime side, the zero side, or both");
  c_psi->add_option("--t", psi.t, "LO HI")->expected(2);
  c_psi->add_option("--step", psi.step);
  c_psi->add_option("--side", psi.side)->check(CLI::IsMember({"prime", "zeros", "both"}));
  c_psi->add_flag("--figure1", psi.figure1, "1000 points on [0, log 10] with a marker at log 2");

  PsiOmegaArgs pso;
  auto* c_pso = app.add_subcommand("psi-omega", "shifted variant Psi_omega(t) on a grid");
  c_pso->add_option("--omega", pso.omega)->required();
  c_pso->add_option("--t", pso.t, "LO HI")->expected(2);
  c_pso->add_option("--step", pso.step);

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("scan-sign", "first sign change of Psi_omega on (0, t_max]");
  c_scan->add_option("--omega", scan.omega)->required();
  c_scan->add_option("--t-max", scan.t_max);
  c_scan->add_option("--step", scan.step);
  c_scan->add_flag("--clip", scan.clip, "lower t_max to log(prime_limit) instead of failing");

  NArgs mom, li, hank;
  auto* c_mom = app.add_subcommand("moments", "moments mu_0..mu_N");
  c_mom->add_option("--n-max", mom.n_max);
  auto* c_li = app.add_subcommand("li", "Li coefficients lambda_1..lambda_N");
  c_li->add_option("--n-max", li.n_max);
  c_li->add_option("--method", li.method)->check(CLI::IsMember({"zeros", "moments"}));
  auto* c_hank = app.add_subcommand("hankel", "Hankel determinants of the moments");
  hank.n_max = 5;
  c_hank->add_option("--n-max", hank.n_max);

  SpectrumArgs spec;
  auto* c_spec = app.add_subcommand("spectrum", "eigenvalues of the operator on [-a, a]");
  c_spec->add_option("--a", spec.a);
  c_spec->add_option("--nodes", spec.nodes);
  c_spec->add_option("--zero-system", spec.zero_system, "use the system over the first M zeros instead");
  c_spec->add_flag("--raw", spec.raw, "zero system without the tail function");
  c_spec->add_option("--method", spec.method)->check(CLI::IsMember({"nystrom", "plain", "midpoint", "galerkin"}));

  double weil_t = 1.0;
  auto* c_weil = app.add_subcommand("weil-check", "explicit formula for the triangle of half-width t");
  c_weil->add_option("--t", weil_t);

  double chi_a = 1.0;
  int chi_k = 1;
  auto* c_chi = app.add_subcommand("chi-check", "chi pairing: zero sums against closed forms");
  c_chi->add_option("--a", chi_a);
  c_chi->add_option("--k", chi_k);

  std::string suite = "all";
  auto* c_rep = app.add_subcommand("report", "numbered checks as JSON lines");
  c_rep->add_option("--suite", suite)->check(CLI::IsMember({"identities", "spectra", "moments", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    RunConfig cfg;
    const char* env_cfg = std::getenv("ZSCREW_CONFIG");
    if (config_path)
      apply_settings(cfg, read_config_file(*config_path));
    else if (env_cfg && *env_cfg)
      apply_settings(cfg, read_config_file(env_cfg));
    apply_settings(cfg, read_env());
    Settings flags;
    if (zeros) flags["zeros"] = *zeros;
    if (zeros_limit) flags["zeros_limit"] = *zeros_limit;
    if (prime_limit) flags["prime_limit"] = *prime_limit;
    if (format) flags["format"] = *format;
    apply_settings(cfg, flags);
    if (abs_tol) cfg.abs_tol = *abs_tol;
    if (t_cut) cfg.t_cut = *t_cut;
    if (threads) cfg.threads = *threads;
    validate(cfg);

    Resources res(cfg);
    std::string out;
    int code = 0;
    if (c_psi->parsed())
      code = cmd_psi(psi, cfg, res, out);
    else if (c_pso->parsed())
      code = cmd_psi_omega(pso, cfg, res, out);
    else if (c_scan->parsed())
      code = cmd_scan_sign(scan, cfg, out);
    else if (c_mom->parsed())
      code = cmd_moments(mom, cfg, res, out);
    else if (c_li->parsed())
      code = cmd_li(li, cfg, res, out);
    else if (c_hank->parsed())
      code = cmd_hankel(hank, cfg, res, out);
    else if (c_spec->parsed())
      code = cmd_spectrum(spec, cfg, res, out);
    else if (c_weil->parsed())
      code = cmd_weil_check(weil_t, cfg, res, out);
    else if (c_chi->parsed())
      code = cmd_chi_check(chi_a, chi_k, cfg, res, out);
    else if (c_rep->parsed())
      code = cmd_report(suite, cfg, out);
    emit(out, out_path.value_or(""));
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "zscrew: configuration error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "zscrew: data error: " << e.what();
    if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
    std::cerr << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "zscrew: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "zscrew: " << e.what() << '\n';
    return 3;
  }
}
