// Batch front end: flat key-value run configuration, spectral sweeps,
// transient runs and the verification suite, with CSV and JSON writers.
// All physical inputs are in units of gamma_r; numbers are serialized with
// 17 significant digits so outputs diff and round-trip exactly.
#pragma once

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "srchi/lindblad.hpp"
#include "srchi/model.hpp"
#include "srchi/stationary.hpp"
#include "srchi/transient.hpp"

namespace srchi {

enum class RunMode { sweep, transient, verify };
enum class OutputFormat { csv, json };

struct DetuningGrid {
  double min = -20.0;
  double max = 20.0;
  int count = 2001;
  bool logarithmic = false;
};

struct OracleSettings {
  int max_n = 5;
  // verification-grade amplitude set; small enough that fifth-order
  // leakage into the cubic fit stays below the chi3 tolerance
  std::vector<double> amplitudes = {2.5e-3, 1.25e-3, 6.25e-4};
  double tol_chi1 = 1e-6;
  double tol_chi3 = 1e-3;
  int plugback_samples = 200;
  double plugback_tol = 1e-10;
  unsigned seed = 42;
};

struct RunConfig {
  RunMode mode = RunMode::sweep;
  int n_atoms = 5;
  DampingRates rates{1.0, 0.0, 0.1};
  DetuningGrid grid;
  double detuning = 5.0;  // single working point (transient mode)
  double field_amplitude = 1.0;
  TimeGrid time_grid;
  OracleSettings oracle;
  OdeOptions ode;
  OutputFormat format = OutputFormat::csv;
  std::string out = "-";
  int jobs = 1;

  SystemDrive drive_at(double detuning) const {
    return SystemDrive{n_atoms, detuning, cplx(field_amplitude, 0.0)};
  }

  void validate() const {
    rates.require_valid();
    if (n_atoms < 1)
      throw InvalidParameterError("n_atoms must be >= 1");
    if (jobs < 1) throw InvalidParameterError("jobs must be >= 1");
    if (!(ode.rtol > 0.0) || !(ode.atol > 0.0))
      throw InvalidParameterError("ode tolerances must be positive");
    switch (mode) {
      case RunMode::sweep:
        if (grid.count < 2)
          throw InvalidParameterError("detuning grid needs >= 2 points");
        if (!(grid.min < grid.max))
          throw InvalidParameterError("detuning grid needs min < max");
        if (grid.logarithmic && !(grid.min > 0.0))
          throw InvalidParameterError("log detuning grid needs min > 0");
        if (n_atoms < 2)
          throw InvalidParameterError("sweep mode needs n_atoms >= 2");
        break;
      case RunMode::transient:
        if (!(time_grid.t_end > 0.0))
          throw InvalidParameterError("t_end must be positive");
        if (time_grid.count < 2)
          throw InvalidParameterError("time grid needs >= 2 points");
        if (field_amplitude == 0.0)
          throw InvalidParameterError("transient mode needs a nonzero drive");
        if (n_atoms < 2)
          throw InvalidParameterError("transient mode needs n_atoms >= 2");
        break;
      case RunMode::verify:
        if (n_atoms > oracle.max_n || n_atoms > LindbladGenerator::max_atoms)
          throw SizeLimitError("verify mode: n_atoms exceeds the oracle limit");
        if (n_atoms < 2)
          throw InvalidParameterError("verify mode needs n_atoms >= 2");
        if (rates.gamma_d + rates.gamma_n <= 0.0)
          throw InvalidParameterError(
              "verify mode needs gamma_d + gamma_n > 0 (chi3 is indefinite)");
        if (oracle.amplitudes.size() < 2)
          throw InvalidParameterError("oracle amplitude set needs >= 2 values");
        for (double a : oracle.amplitudes)
          if (!(a > 0.0))
            throw InvalidParameterError("oracle amplitudes must be positive");
        if (!(oracle.tol_chi1 > 0.0) || !(oracle.tol_chi3 > 0.0) ||
            !(oracle.plugback_tol > 0.0))
          throw InvalidParameterError("tolerances must be positive");
        if (oracle.plugback_samples < 1)
          throw InvalidParameterError("plugback_samples must be >= 1");
        break;
    }
  }
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw InvalidParameterError("bad numeric value for " + key + ": " + v);
  }
  if (pos != v.size())
    throw InvalidParameterError("bad numeric value for " + key + ": " + v);
  return x;
}

inline long parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long x = 0;
  try {
    x = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw InvalidParameterError("bad integer value for " + key + ": " + v);
  }
  if (pos != v.size())
    throw InvalidParameterError("bad integer value for " + key + ": " + v);
  return x;
}

inline std::vector<double> parse_list(const std::string& key,
                                      const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw InvalidParameterError(key + " list is empty");
  return out;
}

inline std::string join_list(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += fmt_double(xs[i]);
  }
  return s;
}

}  // namespace detail

inline const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::sweep: return "sweep";
    case RunMode::transient: return "transient";
    case RunMode::verify: return "verify";
  }
  return "?";
}

inline const char* to_string(OutputFormat f) {
  return f == OutputFormat::csv ? "csv" : "json";
}

/// Apply one "key = value" assignment to the configuration.
inline void apply_assignment(RunConfig& cfg, const std::string& key,
                             const std::string& value) {
  using namespace detail;
  if (key == "mode") {
    if (value == "sweep")
      cfg.mode = RunMode::sweep;
    else if (value == "transient")
      cfg.mode = RunMode::transient;
    else if (value == "verify")
      cfg.mode = RunMode::verify;
    else
      throw InvalidParameterError("unknown mode: " + value);
  } else if (key == "n_atoms") {
    cfg.n_atoms = static_cast<int>(parse_int(key, value));
  } else if (key == "gamma_r") {
    cfg.rates.gamma_r = parse_double(key, value);
  } else if (key == "gamma_d") {
    cfg.rates.gamma_d = parse_double(key, value);
  } else if (key == "gamma_n") {
    cfg.rates.gamma_n = parse_double(key, value);
  } else if (key == "detuning_min") {
    cfg.grid.min = parse_double(key, value);
  } else if (key == "detuning_max") {
    cfg.grid.max = parse_double(key, value);
  } else if (key == "detuning_count") {
    cfg.grid.count = static_cast<int>(parse_int(key, value));
  } else if (key == "detuning_scale") {
    if (value == "linear")
      cfg.grid.logarithmic = false;
    else if (value == "log")
      cfg.grid.logarithmic = true;
    else
      throw InvalidParameterError("detuning_scale must be linear or log");
  } else if (key == "detuning") {
    cfg.detuning = parse_double(key, value);
  } else if (key == "field_amplitude") {
    cfg.field_amplitude = parse_double(key, value);
  } else if (key == "t_end") {
    cfg.time_grid.t_end = parse_double(key, value);
  } else if (key == "t_count") {
    cfg.time_grid.count = static_cast<int>(parse_int(key, value));
  } else if (key == "t_scale") {
    if (value == "linear")
      cfg.time_grid.logarithmic = false;
    else if (value == "log")
      cfg.time_grid.logarithmic = true;
    else
      throw InvalidParameterError("t_scale must be linear or log");
  } else if (key == "t_start") {
    cfg.time_grid.t_start = parse_double(key, value);
  } else if (key == "ode_rtol") {
    cfg.ode.rtol = parse_double(key, value);
  } else if (key == "ode_atol") {
    cfg.ode.atol = parse_double(key, value);
  } else if (key == "oracle_max_n") {
    cfg.oracle.max_n = static_cast<int>(parse_int(key, value));
  } else if (key == "oracle_amplitudes") {
    cfg.oracle.amplitudes = parse_list(key, value);
  } else if (key == "oracle_tol_chi1") {
    cfg.oracle.tol_chi1 = parse_double(key, value);
  } else if (key == "oracle_tol_chi3") {
    cfg.oracle.tol_chi3 = parse_double(key, value);
  } else if (key == "plugback_samples") {
    cfg.oracle.plugback_samples = static_cast<int>(parse_int(key, value));
  } else if (key == "plugback_tol") {
    cfg.oracle.plugback_tol = parse_double(key, value);
  } else if (key == "seed") {
    cfg.oracle.seed = static_cast<unsigned>(parse_int(key, value));
  } else if (key == "format") {
    if (value == "csv")
      cfg.format = OutputFormat::csv;
    else if (value == "json")
      cfg.format = OutputFormat::json;
    else
      throw InvalidParameterError("format must be csv or json");
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "jobs") {
    cfg.jobs = static_cast<int>(parse_int(key, value));
  } else {
    throw InvalidParameterError("unknown configuration key: " + key);
  }
}

/// Apply a command-line "key=value" override.
inline void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw InvalidParameterError("override must look like key=value: " +
                                assignment);
  apply_assignment(cfg, detail::trim(assignment.substr(0, eq)),
                   detail::trim(assignment.substr(eq + 1)));
}

/// Parse a flat key = value configuration file. '#' starts a comment.
inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameterError("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidParameterError(path + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    apply_assignment(cfg, detail::trim(line.substr(0, eq)),
                     detail::trim(line.substr(eq + 1)));
  }
  return cfg;
}

/// Fully resolved configuration as ordered key/value strings; embedded in
/// every output so a run carries its provenance.
inline std::vector<std::pair<std::string, std::string>> config_entries(
    const RunConfig& c) {
  using detail::fmt_double;
  using detail::join_list;
  return {
      {"mode", to_string(c.mode)},
      {"n_atoms", std::to_string(c.n_atoms)},
      {"gamma_r", fmt_double(c.rates.gamma_r)},
      {"gamma_d", fmt_double(c.rates.gamma_d)},
      {"gamma_n", fmt_double(c.rates.gamma_n)},
      {"detuning_min", fmt_double(c.grid.min)},
      {"detuning_max", fmt_double(c.grid.max)},
      {"detuning_count", std::to_string(c.grid.count)},
      {"detuning_scale", c.grid.logarithmic ? "log" : "linear"},
      {"detuning", fmt_double(c.detuning)},
      {"field_amplitude", fmt_double(c.field_amplitude)},
      {"t_end", fmt_double(c.time_grid.t_end)},
      {"t_count", std::to_string(c.time_grid.count)},
      {"t_scale", c.time_grid.logarithmic ? "log" : "linear"},
      {"t_start", fmt_double(c.time_grid.t_start)},
      {"ode_rtol", fmt_double(c.ode.rtol)},
      {"ode_atol", fmt_double(c.ode.atol)},
      {"oracle_max_n", std::to_string(c.oracle.max_n)},
      {"oracle_amplitudes", join_list(c.oracle.amplitudes)},
      {"oracle_tol_chi1", fmt_double(c.oracle.tol_chi1)},
      {"oracle_tol_chi3", fmt_double(c.oracle.tol_chi3)},
      {"plugback_samples", std::to_string(c.oracle.plugback_samples)},
      {"plugback_tol", fmt_double(c.oracle.plugback_tol)},
      {"seed", std::to_string(c.oracle.seed)},
      {"format", to_string(c.format)},
      {"out", c.out},
      {"jobs", std::to_string(c.jobs)},
  };
}

// --- sweep ------------------------------------------------------------------

struct SweepRow {
  double detuning = 0.0;
  bool ok = false;
  SpectralPoint point;
  std::string error;
};

struct SweepResult {
  RunConfig config;
  std::vector<SweepRow> rows;
};

inline const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "detuning",        "re_chi1",        "im_chi1",
      "abs_chi1",        "re_chi3",        "im_chi3",
      "abs_chi3",        "re_chi3_approx", "im_chi3_approx",
      "abs_chi3_approx", "re_chi3_gd0",    "im_chi3_gd0",
      "abs_chi3_gd0",    "enhancement"};
  return cols;
}

inline std::vector<double> detuning_points(const DetuningGrid& g) {
  std::vector<double> ds(g.count);
  for (int i = 0; i < g.count; ++i) {
    const double r = static_cast<double>(i) / (g.count - 1);
    ds[i] = g.logarithmic ? g.min * std::pow(g.max / g.min, r)
                          : g.min + (g.max - g.min) * r;
  }
  return ds;
}

inline SweepResult run_sweep(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.mode != RunMode::sweep)
    throw InvalidParameterError("run_sweep needs mode = sweep");
  const std::vector<double> detunings = detuning_points(cfg.grid);

  SweepResult result;
  result.config = cfg;
  result.rows.resize(detunings.size());

  auto compute = [&](std::size_t i) {
    SweepRow row;
    row.detuning = detunings[i];
    try {
      row.point = spectral_point(cfg.drive_at(detunings[i]), cfg.rates);
      row.ok = true;
    } catch (const IndefiniteLimitError& e) {
      row.error = std::string("IndefiniteLimit: ") + e.what();
    } catch (const PoleError& e) {
      row.error = std::string("Pole: ") + e.what();
    }
    return row;
  };

  if (cfg.jobs <= 1) {
    for (std::size_t i = 0; i < detunings.size(); ++i)
      result.rows[i] = compute(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int nw = std::min<int>(cfg.jobs, int(detunings.size()));
    workers.reserve(nw);
    for (int w = 0; w < nw; ++w)
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < detunings.size();
             i = next.fetch_add(1))
          result.rows[i] = compute(i);
      });
    for (auto& w : workers) w.join();
  }
  return result;
}

// --- transient ----------------------------------------------------------------

struct TransientResult {
  RunConfig config;
  Trajectory trajectory;
};

inline const std::vector<std::string>& transient_columns() {
  static const std::vector<std::string> cols = {
      "t",        "abs_chi3", "re_chi3", "im_chi3",
      "abs_chi1", "re_chi1",  "im_chi1"};
  return cols;
}

inline TransientResult run_transient(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.mode != RunMode::transient)
    throw InvalidParameterError("run_transient needs mode = transient");
  TransientResult result;
  result.config = cfg;
  result.trajectory =
      integrate(cfg.drive_at(cfg.detuning), cfg.rates, cfg.time_grid, cfg.ode);
  return result;
}

// --- verify -------------------------------------------------------------------

struct VerifyCheck {
  std::string name;
  std::string detail;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct VerifyReport {
  RunConfig config;
  std::vector<VerifyCheck> checks;
  bool all_pass = true;

  void add(std::string name, std::string detail, double measured,
           double threshold) {
    VerifyCheck c{std::move(name), std::move(detail), measured, threshold,
                  measured < threshold};
    all_pass = all_pass && c.pass;
    checks.push_back(std::move(c));
  }
};

/// Plug-back and oracle-equivalence suites, reported check by check.
inline VerifyReport run_verify(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.mode != RunMode::verify)
    throw InvalidParameterError("run_verify needs mode = verify");

  VerifyReport report;
  report.config = cfg;

  // Plug-back stationarity over random parameter sets.
  {
    std::mt19937 rng(cfg.oracle.seed);
    std::uniform_int_distribution<int> atoms(2, 8);
    std::uniform_real_distribution<double> local(0.0, 0.2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < cfg.oracle.plugback_samples; ++k) {
      const int n = atoms(rng);
      DampingRates g{cfg.rates.gamma_r, local(rng) * cfg.rates.gamma_r,
                     local(rng) * cfg.rates.gamma_r};
      if (g.gamma_d + g.gamma_n == 0.0) g.gamma_n = 0.05 * g.gamma_r;
      const double delta =
          (2.0 * unit(rng) - 1.0) * 10.0 * n * cfg.rates.gamma_r;
      const double mag = 0.5 + 1.5 * unit(rng);
      const double ph = 6.283185307179586 * unit(rng);
      const SystemDrive d{n, delta, std::polar(mag, ph)};
      const double residual =
          verify_stationarity(d, g, stationary_state(d, g));
      worst = std::max(worst, residual);
      std::ostringstream detail;
      detail << "N=" << n << " gd=" << g.gamma_d << " gn=" << g.gamma_n
             << " delta=" << delta;
      report.add("plugback", detail.str(), residual,
                 cfg.oracle.plugback_tol);
    }
    report.add("plugback-max", "worst over all samples", worst,
               cfg.oracle.plugback_tol);
  }

  // Weak-field oracle extraction against the closed forms.
  {
    const double gr = cfg.rates.gamma_r;
    for (double scale : {0.0, 1.0, -1.0, 5.0, -5.0, 20.0, -20.0}) {
      const double delta = scale * gr;
      const SystemDrive d = cfg.drive_at(delta);
      std::ostringstream where;
      where << "N=" << cfg.n_atoms << " delta=" << delta;
      try {
        const ExtractionReport r = extract_susceptibilities(
            d, cfg.rates, cfg.oracle.amplitudes, cfg.oracle.tol_chi3);
        const cplx c1 = chi1(d, cfg.rates);
        const cplx c3 = chi3(d, cfg.rates);
        report.add("oracle-chi1", where.str(),
                   std::abs(r.chi1 - c1) / std::abs(c1),
                   cfg.oracle.tol_chi1);
        report.add("oracle-chi3", where.str(),
                   std::abs(r.chi3 - c3) / std::abs(c3),
                   cfg.oracle.tol_chi3);
        report.add("oracle-stability", where.str(), r.stability,
                   10.0 * cfg.oracle.tol_chi3);
      } catch (const ModelError& e) {
        report.add(std::string("oracle-error"), where.str() + " " + e.what(),
                   1.0, 0.0);
      }
    }
  }
  return report;
}

// --- writers ------------------------------------------------------------------

namespace detail {

inline void write_config_comment(const RunConfig& cfg, std::ostream& os) {
  for (const auto& [k, v] : config_entries(cfg))
    os << "# " << k << " = " << v << "\n";
}

inline nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : config_entries(cfg)) j[k] = v;
  return j;
}

}  // namespace detail

inline void write_csv(const SweepResult& r, std::ostream& os) {
  using detail::fmt_double;
  detail::write_config_comment(r.config, os);
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const SweepRow& row : r.rows) {
    if (!row.ok) {
      os << "# error detuning=" << fmt_double(row.detuning) << " "
         << row.error << "\n";
      continue;
    }
    const SpectralPoint& p = row.point;
    const cplx vals[4] = {p.chi1, p.chi3, p.chi3_approx, p.chi3_gd0};
    os << fmt_double(row.detuning);
    for (const cplx& v : vals)
      os << "," << fmt_double(v.real()) << "," << fmt_double(v.imag()) << ","
         << fmt_double(std::abs(v));
    os << "," << fmt_double(p.enhancement) << "\n";
  }
}

inline void write_json(const SweepResult& r, std::ostream& os) {
  nlohmann::ordered_json j;
  j["mode"] = "sweep";
  j["config"] = detail::config_json(r.config);
  j["columns"] = sweep_columns();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const SweepRow& row : r.rows) {
    nlohmann::ordered_json o;
    o["detuning"] = row.detuning;
    if (!row.ok) {
      o["error"] = row.error;
    } else {
      const SpectralPoint& p = row.point;
      auto put = [&o](const std::string& stem, cplx v) {
        o["re_" + stem] = v.real();
        o["im_" + stem] = v.imag();
        o["abs_" + stem] = std::abs(v);
      };
      put("chi1", p.chi1);
      put("chi3", p.chi3);
      put("chi3_approx", p.chi3_approx);
      put("chi3_gd0", p.chi3_gd0);
      o["enhancement"] = p.enhancement;
    }
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  os << j.dump(2) << "\n";
}

inline void write_csv(const TransientResult& r, std::ostream& os) {
  using detail::fmt_double;
  detail::write_config_comment(r.config, os);
  const auto& cols = transient_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    os << (i ? "," : "") << cols[i];
  os << "\n";
  const Trajectory& tr = r.trajectory;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    os << fmt_double(tr.times[i]) << "," << fmt_double(std::abs(tr.chi3_t[i]))
       << "," << fmt_double(tr.chi3_t[i].real()) << ","
       << fmt_double(tr.chi3_t[i].imag()) << ","
       << fmt_double(std::abs(tr.chi1_t[i])) << ","
       << fmt_double(tr.chi1_t[i].real()) << ","
       << fmt_double(tr.chi1_t[i].imag()) << "\n";
  }
}

inline void write_json(const TransientResult& r, std::ostream& os) {
  nlohmann::ordered_json j;
  j["mode"] = "transient";
  j["config"] = detail::config_json(r.config);
  j["columns"] = transient_columns();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  const Trajectory& tr = r.trajectory;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    nlohmann::ordered_json o;
    o["t"] = tr.times[i];
    o["abs_chi3"] = std::abs(tr.chi3_t[i]);
    o["re_chi3"] = tr.chi3_t[i].real();
    o["im_chi3"] = tr.chi3_t[i].imag();
    o["abs_chi1"] = std::abs(tr.chi1_t[i]);
    o["re_chi1"] = tr.chi1_t[i].real();
    o["im_chi1"] = tr.chi1_t[i].imag();
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  os << j.dump(2) << "\n";
}

inline void write_csv(const VerifyReport& r, std::ostream& os) {
  using detail::fmt_double;
  detail::write_config_comment(r.config, os);
  os << "check,detail,measured,threshold,status\n";
  for (const VerifyCheck& c : r.checks)
    os << c.name << "," << c.detail << "," << fmt_double(c.measured) << ","
       << fmt_double(c.threshold) << "," << (c.pass ? "pass" : "fail")
       << "\n";
}

inline void write_json(const VerifyReport& r, std::ostream& os) {
  nlohmann::ordered_json j;
  j["mode"] = "verify";
  j["config"] = detail::config_json(r.config);
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const VerifyCheck& c : r.checks) {
    nlohmann::ordered_json o;
    o["check"] = c.name;
    o["detail"] = c.detail;
    o["measured"] = c.measured;
    o["threshold"] = c.threshold;
    o["pass"] = c.pass;
    checks.push_back(std::move(o));
  }
  j["checks"] = std::move(checks);
  j["all_pass"] = r.all_pass;
  os << j.dump(2) << "\n";
}

template <class Result>
void write_output(const Result& r) {
  const RunConfig& cfg = r.config;
  auto emit = [&](std::ostream& os) {
    if (cfg.format == OutputFormat::csv)
      write_csv(r, os);
    else
      write_json(r, os);
  };
  if (cfg.out == "-" || cfg.out.empty()) {
    emit(std::cout);
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out)
      throw InvalidParameterError("cannot open output file: " + cfg.out);
    emit(out);
  }
}

}  // namespace srchi
