#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("zscrew_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// `env` is a prefix of shell assignments, e.g. "ZSCREW_FORMAT=csv ".
Run run(const std::string& args, const std::string& env = "") {
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = env + "'" + std::string(ZSCREW_CLI_PATH) + "' " + args + " 2>'" + err.string() + "'";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::string zeros_flag() { return std::string("--zeros '") + ZSCREW_TEST_ZEROS + "' "; }

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream s(line);
  std::string cell;
  while (std::getline(s, cell, ',')) out.push_back(cell);
  return out;
}

Csv parse_csv(const std::string& text) {
  std::stringstream s(text);
  std::string line;
  Csv c;
  REQUIRE(std::getline(s, line));
  CHECK(line == "# zscrew-csv v1");
  REQUIRE(std::getline(s, line));
  c.header = split(line);
  while (std::getline(s, line)) c.rows.push_back(split(line));
  return c;
}

std::vector<nlohmann::json> parse_jsonl(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::stringstream s(text);
  std::string line;
  while (std::getline(s, line))
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("psi at a single point") {
  const Run r = run("psi --t 0 0 --step 1");
  REQUIRE(r.code == 0);
  const Csv c = parse_csv(r.out);
  REQUIRE(c.rows.size() == 1);
  CHECK(std::stod(c.rows[0][c.col("t")]) == 0.0);
  CHECK(std::stod(c.rows[0][c.col("psi_prime")]) == 0.0);
}

TEST_CASE("dataset on [0, log 10] with the log 2 marker") {
  const Run r = run("psi --figure1");
  REQUIRE(r.code == 0);
  const Csv c = parse_csv(r.out);
  REQUIRE(c.rows.size() == 1000);
  const std::size_t t = c.col("t"), v = c.col("psi_prime"), m = c.col("marker_log2");
  CHECK(std::stod(c.rows.front()[t]) == 0.0);
  CHECK(std::stod(c.rows.back()[t]) == doctest::Approx(std::log(10.0)).epsilon(1e-15));
  int markers = 0;
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    if (i > 0) CHECK(std::stod(c.rows[i][v]) > 0.0);
    CHECK(std::stod(c.rows[i][v]) < 0.094);
    if (c.rows[i][m] == "1") {
      ++markers;
      CHECK(std::abs(std::stod(c.rows[i][t]) - std::log(2.0)) < std::log(10.0) / 999);
    }
  }
  CHECK(markers == 1);
  // The local minimum before log 2 sits near t = 0.464.
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.rows.size(); ++i) {
    const double ti = std::stod(c.rows[i][t]);
    if (ti > 0.3 && ti < std::log(2.0) && (best == 0 || std::stod(c.rows[i][v]) < std::stod(c.rows[best][v])))
      best = i;
  }
  CHECK(std::abs(std::stod(c.rows[best][t]) - 0.464) < 0.005);
}

TEST_CASE("both sides agree") {
  const Run r = run(zeros_flag() + "psi --side both --t 1 2 --step 0.5");
  REQUIRE(r.code == 0);
  const Csv c = parse_csv(r.out);
  REQUIRE(c.rows.size() == 3);
  CHECK(c.header == std::vector<std::string>{"t", "psi_prime", "zero_lo", "zero_hi", "agree"});
  for (const auto& row : c.rows) CHECK(row[c.col("agree")] == "true");

  const Run j = run(zeros_flag() + "--format jsonl psi --side both --t 1 2 --step 0.5");
  REQUIRE(j.code == 0);
  const auto recs = parse_jsonl(j.out);
  REQUIRE(recs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(recs[i]["agree"] == true);
    CHECK(recs[i]["psi_prime"].get<double>() == std::stod(c.rows[i][1]));
  }
}

TEST_CASE("negative t uses evenness") {
  const Run r = run("psi --t -1 1 --step 0.5");
  REQUIRE(r.code == 0);
  const Csv c = parse_csv(r.out);
  REQUIRE(c.rows.size() == 5);
  CHECK(c.rows[0][1] == c.rows[4][1]);
  CHECK(c.rows[1][1] == c.rows[3][1]);
}

TEST_CASE("output is deterministic and written atomically") {
  const std::string args = zeros_flag() + "psi --side both --t 0 3 --step 0.25";
  const Run a = run(args), b = run(args);
  CHECK(a.out == b.out);
  const fs::path out = scratch() / "psi.csv";
  const Run f = run("--out '" + out.string() + "' " + args);
  REQUIRE(f.code == 0);
  CHECK(f.out.empty());
  CHECK(slurp(out) == a.out);
  for (const auto& e : fs::directory_iterator(scratch()))
    CHECK(e.path().filename().string().find(".tmp.") == std::string::npos);
}

TEST_CASE("exit codes") {
  const fs::path missing = scratch() / "no_such_zeros.txt";
  const fs::path out = scratch() / "never.csv";
  const Run m = run("--zeros '" + missing.string() + "' --out '" + out.string() + "' psi --side zeros --t 1 1");
  CHECK(m.code == 2);
  CHECK(m.err.find(missing.string()) != std::string::npos);
  CHECK_FALSE(fs::exists(out));

  const Run rep = run("--zeros '" + missing.string() + "' report --suite moments");
  CHECK(rep.code == 2);
  CHECK(rep.err.find(missing.string()) != std::string::npos);

  CHECK(run("--zeros-limit 50 psi").code == 1);
  CHECK(run("--prime-limit 1000 psi").code == 1);
  CHECK(run("--abs-tol 0.1 psi").code == 1);
  CHECK(run("--abs-tol 0 psi").code == 1);
  CHECK(run("--threads 0 psi").code == 1);
  CHECK(run("no-such-command").code == 1);
  CHECK(run("psi --step 0").code == 1);
  CHECK(run("--config '" + (scratch() / "absent.cfg").string() + "' psi").code == 1);
  // Needs primes past the limit.
  CHECK(run("--prime-limit 10000 psi --t 10 10").code == 3);
}

TEST_CASE("configuration precedence") {
  const fs::path cfg = scratch() / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# comment\nformat = jsonl\nzeros_limit=1000\n";
  }
  const std::string base = "--config '" + cfg.string() + "' psi --t 1 1";
  CHECK(run(base).out.rfind("{", 0) == 0);
  CHECK(run(base, "ZSCREW_FORMAT=csv ").out.rfind("# zscrew-csv v1", 0) == 0);
  CHECK(run("--format jsonl " + base, "ZSCREW_FORMAT=csv ").out.rfind("{", 0) == 0);
  CHECK(run("psi --t 1 1", "ZSCREW_CONFIG='" + cfg.string() + "' ").out.rfind("{", 0) == 0);

  // The environment zero file is overridden by the flag.
  const std::string bad = "ZSCREW_ZEROS='" + (scratch() / "missing.txt").string() + "' ";
  CHECK(run("psi --side zeros --t 1 1", bad).code == 2);
  CHECK(run(zeros_flag() + "psi --side zeros --t 1 1", bad).code == 0);
  CHECK(run("psi --t 1 1", "ZSCREW_THREADS=0 ").code == 1);

  {
    std::ofstream f(cfg);
    f << "colour = blue\n";
  }
  CHECK(run(base).code == 1);
}

TEST_CASE("sign scans") {
  const Run neg = run("scan-sign --omega -0.1 --t-max 10");
  REQUIRE(neg.code == 0);
  const Csv c = parse_csv(neg.out);
  REQUIRE(c.rows.size() == 1);
  CHECK(c.rows[0][c.col("result")] == "found");
  const double t = std::stod(c.rows[0][c.col("t_change")]);
  CHECK(t > std::stod(c.rows[0][c.col("bracket_lo")]));
  CHECK(t <= std::stod(c.rows[0][c.col("bracket_hi")]));
  CHECK(std::abs(t - 5.31) < 0.01);

  const Run half = run("scan-sign --omega 0.5 --t-max 12");
  REQUIRE(half.code == 0);
  CHECK(parse_csv(half.out).rows[0][2] == "none");

  // e^30 is past the default prime limit.
  CHECK(run("scan-sign --omega 0 --t-max 30").code == 3);
  const Run clipped = run("--prime-limit 1e7 scan-sign --omega 0 --t-max 30 --clip");
  REQUIRE(clipped.code == 0);
  const Csv cc = parse_csv(clipped.out);
  CHECK(cc.rows[0][cc.col("result")] == "none");
  CHECK(std::stod(cc.rows[0][cc.col("t_max")]) == doctest::Approx(std::log(1e7)).epsilon(1e-9));
  CHECK(run("scan-sign --omega 1.5 --t-max 5").code == 3);
}

TEST_CASE("psi-omega") {
  const Run r = run("psi-omega --omega 0.5 --t 1 1");
  REQUIRE(r.code == 0);
  const Csv c = parse_csv(r.out);
  CHECK(std::stod(c.rows[0][c.col("psi_omega")]) == doctest::Approx(0.0674118102).epsilon(1e-9));
}

TEST_CASE("moments, Li coefficients and Hankel determinants") {
  const Run mu = run(zeros_flag() + "moments --n-max 3");
  REQUIRE(mu.code == 0);
  const Csv m = parse_csv(mu.out);
  CHECK(m.header == std::vector<std::string>{"n", "value", "est_error", "method"});
  REQUIRE(m.rows.size() == 4);
  CHECK(std::stod(m.rows[0][1]) == doctest::Approx(0.02309570896612103).epsilon(1e-9));

  const Csv lz = parse_csv(run(zeros_flag() + "li --n-max 4 --method zeros").out);
  const Csv lm = parse_csv(run(zeros_flag() + "li --n-max 4 --method moments").out);
  REQUIRE(lz.rows.size() == 4);
  REQUIRE(lm.rows.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(std::stod(lz.rows[i][1]) - std::stod(lm.rows[i][1])) < 1e-3);

  const Csv h = parse_csv(run(zeros_flag() + "hankel --n-max 2").out);
  REQUIRE(h.rows.size() == 6);
  for (const auto& row : h.rows) CHECK(std::stod(row[1]) > std::stod(row[2]));
}

TEST_CASE("spectrum") {
  const Run r = run("spectrum --a 1 --nodes 40");
  REQUIRE(r.code == 0);
  const Csv c = parse_csv(r.out);
  REQUIRE(c.rows.size() == 40);
  CHECK(c.header == std::vector<std::string>{"index", "eigenvalue"});
  for (std::size_t i = 1; i < c.rows.size(); ++i) CHECK(std::stod(c.rows[i][1]) <= std::stod(c.rows[i - 1][1]));
  CHECK(std::stod(c.rows[0][1]) == doctest::Approx(0.0922620455).epsilon(2e-3));

  const Run z = run(zeros_flag() + "spectrum --a 1 --zero-system 200");
  REQUIRE(z.code == 0);
  const Csv zc = parse_csv(z.out);
  CHECK(std::abs(std::stod(zc.rows[0][1]) - 0.0922620455) < 1e-3);
}

TEST_CASE("explicit formula and chi pairing checks") {
  const Run w = run(zeros_flag() + "weil-check --t 1");
  REQUIRE(w.code == 0);
  const Csv wc = parse_csv(w.out);
  CHECK(wc.rows[0][wc.col("pass")] == "true");
  CHECK(std::abs(std::stod(wc.rows[0][wc.col("residual")])) < 1e-4);

  const Run x = run(zeros_flag() + "chi-check --a 1 --k 3");
  REQUIRE(x.code == 0);
  const Csv xc = parse_csv(x.out);
  CHECK(xc.rows[0][xc.col("pass")] == "true");
}

TEST_CASE("report") {
  const Run r = run(zeros_flag() + "report --suite moments");
  REQUIRE(r.code == 0);
  const auto recs = parse_jsonl(r.out);
  int criteria = 0;
  for (const auto& j : recs) {
    CHECK(j.contains("id"));
    CHECK(j["pass"] == true);
    if (j.contains("criterion"))
      ++criteria;
    else
      for (const char* key : {"target", "computed", "tol"}) CHECK(j.contains(key));
  }
  CHECK(criteria == 3);

  const Run id = run(zeros_flag() + "report --suite identities");
  REQUIRE(id.code == 0);
  std::vector<std::string> ids;
  for (const auto& j : parse_jsonl(id.out)) ids.push_back(j["id"]);
  for (const char* want : {"4.t=0.5", "4.t=1", "4.t=2", "4.t=3"})
    CHECK(std::find(ids.begin(), ids.end(), want) != ids.end());
  CHECK(run("report --suite nonsense").code == 1);
}
