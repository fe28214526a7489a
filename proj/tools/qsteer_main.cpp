// Copyright 2026 The qsteer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qsteer command-line front end.  Talks to the core exclusively through the
// C API in qsteer/qsteer.h; all physics lives behind that boundary.
//
// Output contract: CSV files with one header row, numbers rendered with nine
// significant digits, '\n' line endings.  Every run also writes a
// "<stem>.manifest" file that is itself a valid --config file reproducing the
// run, so results can be regenerated byte for byte.

#include "qsteer/qsteer.h"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Exit codes: 0 success, 2 usage/validation error, 3 runtime failure.
struct CliError {
  int code;
  std::string message;
};

void check(qs_status st) {
  if (st == QS_OK) return;
  const int code = (st == QS_ERR_INVALID_ARGUMENT) ? 2 : 3;
  throw CliError{code, qs_last_error()};
}

// ---------------------------------------------------------------------------
// Number formatting
// ---------------------------------------------------------------------------

// Nine significant digits, shortest general form.  Used for all CSV cells.
std::string fmt_csv(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

// Shortest exact round-trip form.  Used for manifest values so a rerun sees
// bit-identical inputs.
std::string fmt_exact(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

constexpr const char* kModeName[3] = {"m", "a", "c"};
constexpr const char* kClassName[3] = {"NotSteered", "OrdinaryTripartite", "CollectiveTripartite"};

// ---------------------------------------------------------------------------
// RAII wrappers around the C handles
// ---------------------------------------------------------------------------

struct ParamsDeleter {
  void operator()(qs_params* p) const { qs_params_destroy(p); }
};
struct NoiseDeleter {
  void operator()(qs_noise* n) const { qs_noise_destroy(n); }
};
using ParamsPtr = std::unique_ptr<qs_params, ParamsDeleter>;
using NoisePtr = std::unique_ptr<qs_noise, NoiseDeleter>;

ParamsPtr make_params(double alpha, double r) {
  qs_params* raw = nullptr;
  check(qs_params_from_alpha_r(alpha, r, 100.0, &raw));
  return ParamsPtr(raw);
}

NoisePtr make_noise(double n0, double n1) {
  qs_noise* raw = nullptr;
  check(qs_noise_create(n0, n1, &raw));
  return NoisePtr(raw);
}

// ---------------------------------------------------------------------------
// CSV and manifest writers
// ---------------------------------------------------------------------------

class CsvFile {
 public:
  explicit CsvFile(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw CliError{3, "cannot open output file: " + path};
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

void write_manifest(const std::string& manifest_path, const std::string& command,
                    const std::vector<std::string>& files, const KeyValues& kv) {
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw CliError{3, "cannot open manifest file: " + manifest_path};
  out << "# qsteer " << qs_version() << '\n';
  out << "# command: " << command << '\n';
  out << "# files:";
  for (const auto& f : files) out << ' ' << f;
  out << '\n';
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

std::string manifest_path_for_csv(const std::string& csv_path) {
  return std::filesystem::path(csv_path).replace_extension(".manifest").string();
}

// ---------------------------------------------------------------------------
// Config file support
// ---------------------------------------------------------------------------

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

KeyValues read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{2, "cannot read config file: " + path};
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw CliError{2, "config " + path + ":" + std::to_string(lineno) + ": expected key=value"};
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw CliError{2, "config " + path + ":" + std::to_string(lineno) + ": empty key"};
    }
    kv.emplace_back(key, value);
  }
  return kv;
}

// Options whose values are linked: giving any member of a group on the command
// line drops the group's config entries, so the command line always wins
// without creating a conflict.
const std::vector<std::vector<std::string>>& linked_groups() {
  static const std::vector<std::vector<std::string>> groups = {
      {"n", "n0"}, {"n", "n1"}, {"alpha", "alpha2"}, {"r", "r-alpha"}};
  return groups;
}

bool flag_on_cmdline(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  for (const auto& tok : args) {
    if (tok == flag || tok.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

std::vector<std::string> merge_config(std::vector<std::string> args, const std::string& subcommand,
                                      const std::set<std::string>& allowed_keys,
                                      const KeyValues& cfg) {
  for (const auto& [key, value] : cfg) {
    if (!allowed_keys.count(key)) {
      throw CliError{2, "unknown config key '" + key + "' for command '" + subcommand + "'"};
    }
    bool drop = flag_on_cmdline(args, key);
    for (const auto& group : linked_groups()) {
      if (std::find(group.begin(), group.end(), key) == group.end()) continue;
      for (const auto& member : group) {
        if (flag_on_cmdline(args, member)) drop = true;
      }
    }
    if (!drop) args.push_back("--" + key + "=" + value);
  }
  return args;
}

// ---------------------------------------------------------------------------
// Shared physical-parameter flags
// ---------------------------------------------------------------------------

struct ParamFlags {
  double alpha = 1.2;
  double alpha2 = 0.0;
  double r = 0.0;
  double r_alpha = 0.0;
  double n = 0.0;
  double n0 = 0.0;
  double n1 = 0.0;
  CLI::Option* alpha_o = nullptr;
  CLI::Option* alpha2_o = nullptr;
  CLI::Option* r_o = nullptr;
  CLI::Option* ralpha_o = nullptr;
  CLI::Option* n_o = nullptr;
  CLI::Option* n0_o = nullptr;
  CLI::Option* n1_o = nullptr;

  static bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

  double resolved_alpha() const { return given(alpha2_o) ? std::sqrt(alpha2) : alpha; }
  double resolved_alpha2() const { return given(alpha2_o) ? alpha2 : alpha * alpha; }
  bool r_given() const { return given(r_o) || given(ralpha_o); }
  double resolved_r() const { return given(ralpha_o) ? r_alpha * resolved_alpha2() : r; }
  double resolved_n0() const { return given(n_o) ? n : n0; }
  double resolved_n1() const { return given(n_o) ? n : n1; }
};

void add_param_flags(CLI::App* cmd, ParamFlags& pf, bool with_r) {
  pf.alpha_o = cmd->add_option("--alpha", pf.alpha, "temporal mode shape parameter alpha (>= 1)");
  pf.alpha2_o = cmd->add_option("--alpha2", pf.alpha2, "alpha squared (alternative to --alpha)");
  pf.alpha_o->excludes(pf.alpha2_o);
  pf.alpha2_o->excludes(pf.alpha_o);
  if (with_r) {
    pf.r_o = cmd->add_option("--r", pf.r, "squeezing parameter r = G tau");
    pf.ralpha_o = cmd->add_option("--r-alpha", pf.r_alpha, "normalized squeezing r / alpha^2");
    pf.r_o->excludes(pf.ralpha_o);
    pf.ralpha_o->excludes(pf.r_o);
  }
  pf.n_o = cmd->add_option("--n", pf.n, "thermal occupation, sets both n0 and n1");
  pf.n0_o = cmd->add_option("--n0", pf.n0, "mirror input occupation n0");
  pf.n1_o = cmd->add_option("--n1", pf.n1, "cavity and atomic input occupation n1");
  pf.n_o->excludes(pf.n0_o);
  pf.n_o->excludes(pf.n1_o);
  pf.n0_o->excludes(pf.n_o);
  pf.n1_o->excludes(pf.n_o);
}

// Manifest lines for the physical parameters: one member per linked group,
// occupations always as the explicit n0/n1 pair.
void append_param_kv(KeyValues& kv, const ParamFlags& pf, bool with_alpha, bool with_r,
                     bool with_n0, bool with_n1) {
  if (with_alpha) {
    if (ParamFlags::given(pf.alpha2_o)) {
      kv.emplace_back("alpha2", fmt_exact(pf.alpha2));
    } else {
      kv.emplace_back("alpha", fmt_exact(pf.alpha));
    }
  }
  if (with_r) {
    if (ParamFlags::given(pf.ralpha_o)) {
      kv.emplace_back("r-alpha", fmt_exact(pf.r_alpha));
    } else {
      kv.emplace_back("r", fmt_exact(pf.r));
    }
  }
  if (with_n0) kv.emplace_back("n0", fmt_exact(pf.resolved_n0()));
  if (with_n1) kv.emplace_back("n1", fmt_exact(pf.resolved_n1()));
}

// ---------------------------------------------------------------------------
// Point evaluation through the C API
// ---------------------------------------------------------------------------

struct PointReport {
  double r = 0.0;
  double r_alpha = 0.0;
  double e[9] = {};
  int cls[3] = {};
};

PointReport eval_report(double alpha, double r, double n0, double n1) {
  ParamsPtr prm = make_params(alpha, r);
  NoisePtr ns = make_noise(n0, n1);
  PointReport pr;
  check(qs_report(prm.get(), ns.get(), pr.e, pr.cls));
  check(qs_params_get(prm.get(), nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, &pr.r,
                      &pr.r_alpha));
  return pr;
}

std::vector<std::string> report_row(double alpha, double n0, double n1, const PointReport& pr) {
  std::vector<std::string> cells;
  cells.reserve(17);
  cells.push_back(fmt_csv(pr.r));
  cells.push_back(fmt_csv(pr.r_alpha));
  cells.push_back(fmt_csv(alpha));
  cells.push_back(fmt_csv(n0));
  cells.push_back(fmt_csv(n1));
  for (double e : pr.e) cells.push_back(fmt_csv(e));
  for (int c : pr.cls) cells.push_back(kClassName[c]);
  return cells;
}

const std::vector<std::string>& report_header() {
  static const std::vector<std::string> header = {
      "r",     "r_alpha", "alpha", "n0",    "n1",    "E_m_a",  "E_m_c",   "E_a_m",   "E_a_c",
      "E_c_a", "E_c_m",   "E_m_ac", "E_a_mc", "E_c_am", "class_m", "class_a", "class_c"};
  return header;
}

// Uniform grid with exact endpoints.
double grid_value(double lo, double hi, int points, int i) {
  if (i == points - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
}

// ---------------------------------------------------------------------------
// Subcommand option blocks
// ---------------------------------------------------------------------------

struct MomentsCmd {
  CLI::App* cmd = nullptr;
  ParamFlags pf;
  std::string out = "moments.csv";
};

struct ReportCmd {
  CLI::App* cmd = nullptr;
  ParamFlags pf;
  std::string out = "report.csv";
};

struct SweepCmd {
  CLI::App* cmd = nullptr;
  ParamFlags pf;
  std::string variable;
  double from = 0.0;
  double to = 0.0;
  int points = 601;
  std::string out = "sweep.csv";
};

struct ThresholdsCmd {
  CLI::App* cmd = nullptr;
  ParamFlags pf;
  std::string which = "tripartite";
  double from = 0.0;
  double to = 30.0;
  int points = 601;
  std::string out = "thresholds.csv";
};

struct RegionsCmd {
  CLI::App* cmd = nullptr;
  ParamFlags pf;
  std::string mode = "all";
  std::string cls = "CollectiveTripartite";
  double from = 0.0;
  double to = 30.0;
  int grid_points = 601;
  double r_tol = 1e-12;
  std::string out = "regions.csv";
};

struct FigureCmd {
  CLI::App* cmd = nullptr;
  std::string id;
  std::string out = ".";
};

struct OracleCmd {
  CLI::App* cmd = nullptr;
  ParamFlags pf;
  std::vector<double> kappa_ratios = {10.0, 30.0, 100.0};
  int steps_per_kappa = 50;
  std::uint64_t mc_samples = 0;
  std::uint64_t seed = 1;
  std::string out = "oracle.csv";
};

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

int run_moments(const MomentsCmd& c) {
  if (!c.pf.r_given()) throw CliError{2, "moments requires --r or --r-alpha"};
  const double alpha = c.pf.resolved_alpha();
  const double n0 = c.pf.resolved_n0();
  const double n1 = c.pf.resolved_n1();
  ParamsPtr prm = make_params(alpha, c.pf.resolved_r());
  NoisePtr ns = make_noise(n0, n1);

  double moments[6];
  check(qs_output_moments(prm.get(), ns.get(), moments));
  double r = 0.0, r_alpha = 0.0;
  check(qs_params_get(prm.get(), nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, &r,
                      &r_alpha));

  CsvFile csv(c.out);
  csv.row({"r", "r_alpha", "alpha", "n0", "n1", "var_X_a", "var_X_c", "var_X_m", "c_XmPa",
           "c_XmXc", "c_PaXc"});
  std::vector<std::string> cells = {fmt_csv(r), fmt_csv(r_alpha), fmt_csv(alpha), fmt_csv(n0),
                                    fmt_csv(n1)};
  for (double m : moments) cells.push_back(fmt_csv(m));
  csv.row(cells);

  KeyValues kv;
  append_param_kv(kv, c.pf, true, true, true, true);
  kv.emplace_back("out", c.out);
  write_manifest(manifest_path_for_csv(c.out), "moments", {c.out}, kv);
  return 0;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

int run_report(const ReportCmd& c) {
  if (!c.pf.r_given()) throw CliError{2, "report requires --r or --r-alpha"};
  const double alpha = c.pf.resolved_alpha();
  const double n0 = c.pf.resolved_n0();
  const double n1 = c.pf.resolved_n1();
  const PointReport pr = eval_report(alpha, c.pf.resolved_r(), n0, n1);

  CsvFile csv(c.out);
  csv.row(report_header());
  csv.row(report_row(alpha, n0, n1, pr));

  KeyValues kv;
  append_param_kv(kv, c.pf, true, true, true, true);
  kv.emplace_back("out", c.out);
  write_manifest(manifest_path_for_csv(c.out), "report", {c.out}, kv);
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int run_sweep(const SweepCmd& c) {
  static const std::set<std::string> kVariables = {"r", "r_alpha", "alpha", "alpha2",
                                                   "n", "n0",      "n1"};
  if (!kVariables.count(c.variable)) {
    throw CliError{2, "unknown sweep variable '" + c.variable +
                          "' (expected r, r_alpha, alpha, alpha2, n, n0 or n1)"};
  }
  if (!(c.from <= c.to)) throw CliError{2, "sweep requires from <= to"};
  if (c.points < 2) throw CliError{2, "sweep requires points >= 2"};

  const bool sweeps_r = (c.variable == "r" || c.variable == "r_alpha");
  const bool sweeps_alpha = (c.variable == "alpha" || c.variable == "alpha2");
  if (sweeps_r && c.pf.r_given()) {
    throw CliError{2, "sweep over " + c.variable + " conflicts with --r/--r-alpha"};
  }
  if (!sweeps_r && !c.pf.r_given()) {
    throw CliError{2, "sweep over " + c.variable + " requires --r or --r-alpha"};
  }
  if (sweeps_alpha && (ParamFlags::given(c.pf.alpha_o) || ParamFlags::given(c.pf.alpha2_o))) {
    throw CliError{2, "sweep over " + c.variable + " conflicts with --alpha/--alpha2"};
  }
  if (c.variable == "n" &&
      (ParamFlags::given(c.pf.n_o) || ParamFlags::given(c.pf.n0_o) ||
       ParamFlags::given(c.pf.n1_o))) {
    throw CliError{2, "sweep over n conflicts with --n/--n0/--n1"};
  }
  if (c.variable == "n0" && (ParamFlags::given(c.pf.n_o) || ParamFlags::given(c.pf.n0_o))) {
    throw CliError{2, "sweep over n0 conflicts with --n/--n0"};
  }
  if (c.variable == "n1" && (ParamFlags::given(c.pf.n_o) || ParamFlags::given(c.pf.n1_o))) {
    throw CliError{2, "sweep over n1 conflicts with --n/--n1"};
  }

  CsvFile csv(c.out);
  csv.row(report_header());
  for (int i = 0; i < c.points; ++i) {
    const double v = grid_value(c.from, c.to, c.points, i);
    double alpha = c.pf.resolved_alpha();
    double n0 = c.pf.resolved_n0();
    double n1 = c.pf.resolved_n1();
    double r = 0.0;
    if (c.variable == "alpha") {
      alpha = v;
    } else if (c.variable == "alpha2") {
      alpha = std::sqrt(v);
    } else if (c.variable == "n") {
      n0 = v;
      n1 = v;
    } else if (c.variable == "n0") {
      n0 = v;
    } else if (c.variable == "n1") {
      n1 = v;
    }
    if (c.variable == "r") {
      r = v;
    } else if (c.variable == "r_alpha") {
      r = v * alpha * alpha;
    } else {
      r = ParamFlags::given(c.pf.ralpha_o) ? c.pf.r_alpha * alpha * alpha : c.pf.r;
    }
    const PointReport pr = eval_report(alpha, r, n0, n1);
    csv.row(report_row(alpha, n0, n1, pr));
  }

  KeyValues kv;
  kv.emplace_back("variable", c.variable);
  kv.emplace_back("from", fmt_exact(c.from));
  kv.emplace_back("to", fmt_exact(c.to));
  kv.emplace_back("points", std::to_string(c.points));
  append_param_kv(kv, c.pf, !sweeps_alpha, !sweeps_r, c.variable != "n" && c.variable != "n0",
                  c.variable != "n" && c.variable != "n1");
  kv.emplace_back("out", c.out);
  write_manifest(manifest_path_for_csv(c.out), "sweep", {c.out}, kv);
  return 0;
}

// ---------------------------------------------------------------------------
// thresholds
// ---------------------------------------------------------------------------

int run_thresholds(const ThresholdsCmd& c) {
  if (c.which != "tripartite" && c.which != "bipartite") {
    throw CliError{2, "unknown --which '" + c.which + "' (expected tripartite or bipartite)"};
  }
  if (!(c.from <= c.to)) throw CliError{2, "thresholds requires from <= to"};
  if (c.points < 2) throw CliError{2, "thresholds requires points >= 2"};

  const double alpha = c.pf.resolved_alpha();
  const double beta2 = c.pf.resolved_alpha2() - 1.0;
  const bool tri = (c.which == "tripartite");
  // The mirror is steerable by one party at a time: (m|a) exists for
  // beta^2 <= 1 and (m|c) takes over for beta^2 > 1.
  const int mirror_steerer = (beta2 <= 1.0) ? 1 : 2;

  CsvFile csv(c.out);
  if (tri) {
    csv.row({"r", "n_th_m_ac", "n_th_a_mc", "n_th_c_am"});
  } else if (mirror_steerer == 1) {
    csv.row({"r", "n_th_a_m", "n_th_c_m", "n_th_m_a"});
  } else {
    csv.row({"r", "n_th_a_m", "n_th_c_m", "n_th_m_c"});
  }

  for (int i = 0; i < c.points; ++i) {
    const double r = grid_value(c.from, c.to, c.points, i);
    ParamsPtr prm = make_params(alpha, r);
    std::vector<std::string> cells = {fmt_csv(r)};
    if (tri) {
      for (int target = 0; target < 3; ++target) {
        double n_th = 0.0;
        check(qs_tripartite_threshold(prm.get(), target, &n_th));
        cells.push_back(fmt_csv(n_th));
      }
    } else {
      const int pairs[3][2] = {{1, 0}, {2, 0}, {0, mirror_steerer}};
      for (const auto& pair : pairs) {
        int has = 0;
        double n_th = 0.0;
        check(qs_bipartite_threshold(prm.get(), pair[0], pair[1], &has, &n_th, nullptr, nullptr));
        cells.push_back(has ? fmt_csv(n_th) : "nan");
      }
    }
    csv.row(cells);
  }

  KeyValues kv;
  append_param_kv(kv, c.pf, true, false, false, false);
  kv.emplace_back("which", c.which);
  kv.emplace_back("from", fmt_exact(c.from));
  kv.emplace_back("to", fmt_exact(c.to));
  kv.emplace_back("points", std::to_string(c.points));
  kv.emplace_back("out", c.out);
  write_manifest(manifest_path_for_csv(c.out), "thresholds", {c.out}, kv);
  return 0;
}

// ---------------------------------------------------------------------------
// regions
// ---------------------------------------------------------------------------

int run_regions(const RegionsCmd& c) {
  static const std::map<std::string, int> kModes = {{"m", 0}, {"a", 1}, {"c", 2}};
  static const std::map<std::string, int> kClasses = {
      {"NotSteered", 0}, {"OrdinaryTripartite", 1}, {"CollectiveTripartite", 2}};
  std::vector<int> modes;
  if (c.mode == "all") {
    modes = {0, 1, 2};
  } else {
    const auto it = kModes.find(c.mode);
    if (it == kModes.end()) {
      throw CliError{2, "unknown --mode '" + c.mode + "' (expected m, a, c or all)"};
    }
    modes = {it->second};
  }
  const auto cit = kClasses.find(c.cls);
  if (cit == kClasses.end()) {
    throw CliError{2, "unknown --class '" + c.cls +
                          "' (expected NotSteered, OrdinaryTripartite or CollectiveTripartite)"};
  }

  const double alpha = c.pf.resolved_alpha();
  NoisePtr ns = make_noise(c.pf.resolved_n0(), c.pf.resolved_n1());

  CsvFile csv(c.out);
  csv.row({"mode", "class", "r_lo", "r_hi", "residual_lo", "residual_hi", "lo_is_crossing",
           "hi_is_crossing"});
  for (int mode : modes) {
    qs_region_interval intervals[256];
    std::size_t count = 0;
    check(qs_find_regions(alpha, ns.get(), mode, cit->second, c.from, c.to, c.grid_points, c.r_tol,
                          intervals, 256, &count));
    for (std::size_t i = 0; i < count; ++i) {
      const qs_region_interval& iv = intervals[i];
      csv.row({kModeName[mode], c.cls, fmt_csv(iv.r_lo), fmt_csv(iv.r_hi),
               fmt_csv(iv.residual_lo), fmt_csv(iv.residual_hi),
               iv.lo_is_crossing ? "1" : "0", iv.hi_is_crossing ? "1" : "0"});
    }
  }

  KeyValues kv;
  append_param_kv(kv, c.pf, true, false, true, true);
  kv.emplace_back("mode", c.mode);
  kv.emplace_back("class", c.cls);
  kv.emplace_back("from", fmt_exact(c.from));
  kv.emplace_back("to", fmt_exact(c.to));
  kv.emplace_back("grid-points", std::to_string(c.grid_points));
  kv.emplace_back("r-tol", fmt_exact(c.r_tol));
  kv.emplace_back("out", c.out);
  write_manifest(manifest_path_for_csv(c.out), "regions", {c.out}, kv);
  return 0;
}

// ---------------------------------------------------------------------------
// figure
// ---------------------------------------------------------------------------

struct FigureLine {
  // Per-target slice of a full report: E_t_j, E_t_k, E_t_jk, class_t.
  static const char* header(int target) {
    static const char* kHeaders[3] = {"r,E_m_a,E_m_c,E_m_ac,class_m",
                                      "r,E_a_m,E_a_c,E_a_mc,class_a",
                                      "r,E_c_a,E_c_m,E_c_am,class_c"};
    return kHeaders[target];
  }

  static std::vector<std::string> cells(int target, double r, const PointReport& pr) {
    const int bip[3][2] = {{0, 1}, {2, 3}, {4, 5}};
    return {fmt_csv(r), fmt_csv(pr.e[bip[target][0]]), fmt_csv(pr.e[bip[target][1]]),
            fmt_csv(pr.e[6 + target]), kClassName[pr.cls[target]]};
  }
};

void split_header_row(CsvFile& csv, const std::string& header) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = header.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(header.substr(start));
      break;
    }
    cells.push_back(header.substr(start, comma - start));
    start = comma + 1;
  }
  csv.row(cells);
}

// One file per steered mode with the E curves entering its classification.
std::vector<std::string> figure_mode_lines(const std::filesystem::path& dir,
                                           const std::string& prefix, double alpha, double n0,
                                           double n1, const std::vector<int>& targets) {
  std::vector<std::string> files;
  std::vector<std::unique_ptr<CsvFile>> csvs;
  for (int target : targets) {
    const std::string path = (dir / (prefix + "_" + kModeName[target] + ".csv")).string();
    files.push_back(path);
    csvs.push_back(std::make_unique<CsvFile>(path));
    split_header_row(*csvs.back(), FigureLine::header(target));
  }
  const int points = 601;
  for (int i = 0; i < points; ++i) {
    const double r = grid_value(0.0, 30.0, points, i);
    const PointReport pr = eval_report(alpha, r, n0, n1);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      csvs[t]->row(FigureLine::cells(targets[t], r, pr));
    }
  }
  return files;
}

std::string figure_collective_grid(const std::filesystem::path& dir, const std::string& name,
                                   bool vary_alpha2) {
  const std::string path = (dir / (name + ".csv")).string();
  CsvFile csv(path);
  const int n_points = 201;
  if (!vary_alpha2) {
    // E_m|ac over the (r, n) plane at alpha = 1.2.
    csv.row({"r", "n", "E_m_ac"});
    const int r_points = 601;
    for (int i = 0; i < r_points; ++i) {
      const double r = grid_value(0.0, 30.0, r_points, i);
      ParamsPtr prm = make_params(1.2, r);
      for (int j = 0; j < n_points; ++j) {
        const double n = grid_value(0.0, 10.0, n_points, j);
        NoisePtr ns = make_noise(n, n);
        double e[9];
        check(qs_report(prm.get(), ns.get(), e, nullptr));
        csv.row({fmt_csv(r), fmt_csv(n), fmt_csv(e[6])});
      }
    }
  } else {
    // E_m|ac over the (alpha^2, n) plane at r = 15.
    csv.row({"alpha2", "n", "E_m_ac"});
    const int a_points = 200;
    for (int i = 0; i < a_points; ++i) {
      const double alpha2 = grid_value(1.05, 20.0, a_points, i);
      ParamsPtr prm = make_params(std::sqrt(alpha2), 15.0);
      for (int j = 0; j < n_points; ++j) {
        const double n = grid_value(0.0, 10.0, n_points, j);
        NoisePtr ns = make_noise(n, n);
        double e[9];
        check(qs_report(prm.get(), ns.get(), e, nullptr));
        csv.row({fmt_csv(alpha2), fmt_csv(n), fmt_csv(e[6])});
      }
    }
  }
  return path;
}

std::string figure_threshold_file(const std::filesystem::path& dir, const std::string& name,
                                  double alpha, bool tripartite) {
  ThresholdsCmd tc;
  tc.pf.alpha = alpha;
  tc.which = tripartite ? "tripartite" : "bipartite";
  tc.out = (dir / (name + ".csv")).string();
  run_thresholds(tc);
  // Drop the per-file manifest; the figure writes a single one.
  std::filesystem::remove(manifest_path_for_csv(tc.out));
  return tc.out;
}

int run_figure(const FigureCmd& c) {
  const std::filesystem::path dir(c.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw CliError{3, "cannot create output directory: " + c.out};

  std::vector<std::string> files;
  if (c.id == "fig2") {
    files.push_back(figure_collective_grid(dir, "fig2", false));
  } else if (c.id == "fig3") {
    files.push_back(figure_collective_grid(dir, "fig3", true));
  } else if (c.id == "fig4") {
    files = figure_mode_lines(dir, "fig4", 1.2, 0.0, 0.0, {0, 1, 2});
  } else if (c.id == "fig5") {
    files.push_back(figure_threshold_file(dir, "fig5_alpha1p2_tri", 1.2, true));
    files.push_back(figure_threshold_file(dir, "fig5_alpha1p2_bip", 1.2, false));
    files.push_back(figure_threshold_file(dir, "fig5_alpha2_tri", 2.0, true));
    files.push_back(figure_threshold_file(dir, "fig5_alpha2_bip", 2.0, false));
  } else if (c.id == "fig6") {
    files = figure_mode_lines(dir, "fig6", 1.2, 2.0, 2.0, {0, 1, 2});
  } else if (c.id == "fig7") {
    files = figure_mode_lines(dir, "fig7", 1.2, 4.0, 0.0, {0, 1, 2});
  } else if (c.id == "fig8") {
    files = figure_mode_lines(dir, "fig8", 4.0, 4.0, 0.0, {0});
  } else if (c.id == "fig9") {
    files = figure_mode_lines(dir, "fig9", 1.2, 0.0, 4.0, {0, 1, 2});
  } else {
    throw CliError{2, "unknown figure id '" + c.id + "' (expected fig2..fig9)"};
  }

  KeyValues kv;
  kv.emplace_back("id", c.id);
  kv.emplace_back("out", c.out);
  write_manifest((dir / (c.id + ".manifest")).string(), "figure", files, kv);
  return 0;
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

int run_oracle(const OracleCmd& c) {
  if (!c.pf.r_given()) throw CliError{2, "oracle requires --r or --r-alpha"};
  if (c.kappa_ratios.empty()) throw CliError{2, "oracle requires at least one --kappa-ratio"};
  if (c.steps_per_kappa < 10) throw CliError{2, "oracle requires --steps-per-kappa >= 10"};

  const double alpha = c.pf.resolved_alpha();
  const double n0 = c.pf.resolved_n0();
  const double n1 = c.pf.resolved_n1();
  ParamsPtr prm = make_params(alpha, c.pf.resolved_r());
  NoisePtr ns = make_noise(n0, n1);

  double analytic_cov[36];
  check(qs_output_covariance(prm.get(), ns.get(), analytic_cov));
  int cls_analytic[3];
  check(qs_report(prm.get(), ns.get(), nullptr, cls_analytic));

  CsvFile csv(c.out);
  std::vector<std::string> header = {"kappa_over_g", "status", "max_abs_dev", "max_rel_var_dev",
                                     "class_agree"};
  if (c.mc_samples > 0) header.push_back("mc_max_sigma");
  csv.row(header);

  int ok_rows = 0;
  for (double ratio : c.kappa_ratios) {
    qs_oracle_config cfg;
    qs_oracle_config_init(&cfg);
    cfg.kappa_over_g = ratio;
    cfg.steps_per_kappa = c.steps_per_kappa;

    std::vector<std::string> cells = {fmt_csv(ratio)};
    try {
      double oracle_cov[36];
      check(qs_oracle_covariance(prm.get(), ns.get(), &cfg, oracle_cov));

      double max_abs_dev = 0.0;
      for (int i = 0; i < 36; ++i) {
        max_abs_dev = std::max(max_abs_dev, std::abs(oracle_cov[i] - analytic_cov[i]));
      }
      double max_rel_var_dev = 0.0;
      for (int d = 0; d < 6; ++d) {
        const int i = 7 * d;
        max_rel_var_dev =
            std::max(max_rel_var_dev, std::abs(oracle_cov[i] - analytic_cov[i]) / analytic_cov[i]);
      }
      int cls_oracle[3];
      check(qs_report_from_covariance(oracle_cov, nullptr, cls_oracle));
      const bool agree = cls_oracle[0] == cls_analytic[0] && cls_oracle[1] == cls_analytic[1] &&
                         cls_oracle[2] == cls_analytic[2];

      cells.push_back("ok");
      cells.push_back(fmt_csv(max_abs_dev));
      cells.push_back(fmt_csv(max_rel_var_dev));
      cells.push_back(agree ? "1" : "0");
      if (c.mc_samples > 0) {
        double mc_cov[36];
        double mc_se[36];
        check(qs_oracle_monte_carlo(prm.get(), ns.get(), &cfg, static_cast<int64_t>(c.mc_samples),
                                    c.seed, mc_cov, mc_se));
        double max_sigma = 0.0;
        for (int i = 0; i < 36; ++i) {
          if (mc_se[i] > 0.0) {
            max_sigma = std::max(max_sigma, std::abs(mc_cov[i] - oracle_cov[i]) / mc_se[i]);
          }
        }
        cells.push_back(fmt_csv(max_sigma));
      }
      ++ok_rows;
    } catch (const CliError& e) {
      std::cerr << "oracle: kappa_over_g=" << fmt_csv(ratio) << ": " << e.message << "\n";
      cells = {fmt_csv(ratio), "error", "nan", "nan", "0"};
      if (c.mc_samples > 0) cells.push_back("nan");
    }
    csv.row(cells);
  }
  if (ok_rows == 0) throw CliError{3, "all oracle comparisons failed"};

  KeyValues kv;
  append_param_kv(kv, c.pf, true, true, true, true);
  std::string ratios;
  for (std::size_t i = 0; i < c.kappa_ratios.size(); ++i) {
    if (i) ratios += ',';
    ratios += fmt_exact(c.kappa_ratios[i]);
  }
  kv.emplace_back("kappa-ratio", ratios);
  kv.emplace_back("steps-per-kappa", std::to_string(c.steps_per_kappa));
  kv.emplace_back("mc-samples", fmt_u64(c.mc_samples));
  kv.emplace_back("seed", fmt_u64(c.seed));
  kv.emplace_back("out", c.out);
  write_manifest(manifest_path_for_csv(c.out), "oracle", {c.out}, kv);
  return 0;
}

// ---------------------------------------------------------------------------
// Argument wiring
// ---------------------------------------------------------------------------

struct Cli {
  CLI::App app{"Collective quantum steering calculator for an optomechanical chain", "qsteer"};
  MomentsCmd moments;
  ReportCmd report;
  SweepCmd sweep;
  ThresholdsCmd thresholds;
  RegionsCmd regions;
  FigureCmd figure;
  OracleCmd oracle;
  std::map<std::string, std::set<std::string>> allowed_config_keys;
  std::map<std::string, std::string> config_paths;

  Cli() {
    app.require_subcommand(1);
    app.set_version_flag("--version", qs_version());

    auto register_config = [this](CLI::App* cmd, std::set<std::string> keys) {
      cmd->add_option("--config", config_paths[cmd->get_name()],
                      "key=value file supplying defaults for absent flags");
      allowed_config_keys[cmd->get_name()] = std::move(keys);
    };

    moments.cmd = app.add_subcommand("moments", "Output-mode second moments at one point");
    add_param_flags(moments.cmd, moments.pf, true);
    moments.cmd->add_option("--out", moments.out, "output CSV path");
    register_config(moments.cmd, {"alpha", "alpha2", "r", "r-alpha", "n", "n0", "n1", "out"});

    report.cmd = app.add_subcommand("report", "Steering parameters and classes at one point");
    add_param_flags(report.cmd, report.pf, true);
    report.cmd->add_option("--out", report.out, "output CSV path");
    register_config(report.cmd, {"alpha", "alpha2", "r", "r-alpha", "n", "n0", "n1", "out"});

    sweep.cmd = app.add_subcommand("sweep", "Steering report along a one-parameter grid");
    sweep.cmd->add_option("--variable", sweep.variable, "swept parameter")->required();
    sweep.cmd->add_option("--from", sweep.from, "grid start")->required();
    sweep.cmd->add_option("--to", sweep.to, "grid end")->required();
    sweep.cmd->add_option("--points", sweep.points, "grid size (>= 2)");
    add_param_flags(sweep.cmd, sweep.pf, true);
    sweep.cmd->add_option("--out", sweep.out, "output CSV path");
    register_config(sweep.cmd, {"variable", "from", "to", "points", "alpha", "alpha2", "r",
                                "r-alpha", "n", "n0", "n1", "out"});

    thresholds.cmd =
        app.add_subcommand("thresholds", "Critical occupation curves n_th(r)");
    add_param_flags(thresholds.cmd, thresholds.pf, false);
    thresholds.cmd->add_option("--which", thresholds.which, "tripartite or bipartite");
    thresholds.cmd->add_option("--from", thresholds.from, "r grid start");
    thresholds.cmd->add_option("--to", thresholds.to, "r grid end");
    thresholds.cmd->add_option("--points", thresholds.points, "r grid size (>= 2)");
    thresholds.cmd->add_option("--out", thresholds.out, "output CSV path");
    register_config(thresholds.cmd,
                    {"alpha", "alpha2", "which", "from", "to", "points", "out"});

    regions.cmd = app.add_subcommand("regions", "Steering-class intervals in r");
    add_param_flags(regions.cmd, regions.pf, false);
    regions.cmd->add_option("--mode", regions.mode, "steered mode: m, a, c or all");
    regions.cmd->add_option("--class", regions.cls, "steering class to locate");
    regions.cmd->add_option("--from", regions.from, "r range start");
    regions.cmd->add_option("--to", regions.to, "r range end");
    regions.cmd->add_option("--grid-points", regions.grid_points, "scan grid size (>= 2)");
    regions.cmd->add_option("--r-tol", regions.r_tol, "boundary bisection tolerance");
    regions.cmd->add_option("--out", regions.out, "output CSV path");
    register_config(regions.cmd, {"alpha", "alpha2", "n", "n0", "n1", "mode", "class", "from",
                                  "to", "grid-points", "r-tol", "out"});

    figure.cmd = app.add_subcommand("figure", "Preset data sets for the standard plots");
    figure.cmd->add_option("--id", figure.id, "preset name: fig2..fig9")->required();
    figure.cmd->add_option("--out", figure.out, "output directory");
    register_config(figure.cmd, {"id", "out"});

    oracle.cmd =
        app.add_subcommand("oracle", "Compare closed forms against the dynamical solver");
    add_param_flags(oracle.cmd, oracle.pf, true);
    oracle.cmd->add_option("--kappa-ratio", oracle.kappa_ratios,
                           "kappa/g ratios to test (comma separated)")
        ->delimiter(',');
    oracle.cmd->add_option("--steps-per-kappa", oracle.steps_per_kappa,
                           "integrator steps per 1/kappa (>= 10)");
    oracle.cmd->add_option("--mc-samples", oracle.mc_samples,
                           "Monte Carlo trajectories (0 disables)");
    oracle.cmd->add_option("--seed", oracle.seed, "Monte Carlo seed");
    oracle.cmd->add_option("--out", oracle.out, "output CSV path");
    register_config(oracle.cmd, {"alpha", "alpha2", "r", "r-alpha", "n", "n0", "n1",
                                 "kappa-ratio", "steps-per-kappa", "mc-samples", "seed", "out"});
  }
};

std::string find_subcommand(const std::vector<std::string>& args) {
  for (const auto& tok : args) {
    if (!tok.empty() && tok[0] != '-') return tok;
  }
  return "";
}

std::string find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return "";
}

int run(std::vector<std::string> args) {
  Cli cli;

  const std::string sub = find_subcommand(args);
  const std::string config_path = find_config_path(args);
  if (!config_path.empty()) {
    if (cli.allowed_config_keys.find(sub) == cli.allowed_config_keys.end()) {
      throw CliError{2, "--config requires a known subcommand"};
    }
    args = merge_config(std::move(args), sub, cli.allowed_config_keys[sub],
                        read_config(config_path));
  }

  try {
    std::reverse(args.begin(), args.end());
    cli.app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int rc = cli.app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (cli.moments.cmd->parsed()) return run_moments(cli.moments);
  if (cli.report.cmd->parsed()) return run_report(cli.report);
  if (cli.sweep.cmd->parsed()) return run_sweep(cli.sweep);
  if (cli.thresholds.cmd->parsed()) return run_thresholds(cli.thresholds);
  if (cli.regions.cmd->parsed()) return run_regions(cli.regions);
  if (cli.figure.cmd->parsed()) return run_figure(cli.figure);
  if (cli.oracle.cmd->parsed()) return run_oracle(cli.oracle);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(std::move(args));
  } catch (const CliError& e) {
    std::cerr << "qsteer: error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "qsteer: error: " << e.what() << "\n";
    return 3;
  }
}
