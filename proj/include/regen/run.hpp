// Copyright 2026 The regen-capacity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration and the drivers behind each command of the
// regen-capacity tool. Every driver returns a Table; sweeps evaluate their
// SNR points on worker threads and assemble rows in grid order.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "regen/capacity.hpp"
#include "regen/experiments.hpp"
#include "regen/ideal_regen.hpp"
#include "regen/report.hpp"
#include "regen/sine_channel.hpp"

namespace regen {

enum class Command { kIdealSweep, kSineSweep, kAnalytic, kOptimize, kFigure };
enum class ConstellationKind { kBinary, kRectangular, kRing };
enum class ChannelKind { kIdeal, kSine };

struct RunConfig {
  Command command = Command::kIdealSweep;
  int R = 10;
  double N = 1.0;
  int n = 2;
  ConstellationKind constellation = ConstellationKind::kRectangular;
  int M = 0;  // symbols per dimension (ring: total); 0 optimises the spacing
  std::optional<double> alpha;
  std::optional<double> beta;
  double q = 1.0;
  ChannelKind channel = ChannelKind::kIdeal;  // optimize command only
  double snr_db_min = -10.0;
  double snr_db_max = 40.0;
  int snr_points = 51;
  int grid_points = 32;
  std::uint64_t seed = 1;
  std::string out = "-";
  OutputFormat format = OutputFormat::kCsv;
  int figure = 0;
  int threads = 0;  // 0: hardware concurrency
  double tol = 1e-6;
  double scan_tol = 1e-4;
  std::optional<int> G;
  std::optional<double> L;
  std::int64_t paths = 1000000;

  /// Stability index of the configured sine map.
  double sine_q() const { return alpha && beta ? *alpha * *beta : q; }

  SearchSettings search() const {
    SearchSettings s;
    s.grid_points = grid_points;
    s.ba.tol = tol;
    s.scan_tol = std::max(scan_tol, tol);
    return s;
  }

  IdealChannelSpec line(int r) const { return IdealChannelSpec{r, N, n}; }
};

/// Raw key/value settings, keyed by long flag name without dashes.
using Settings = std::map<std::string, std::string>;

inline const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = {
      "command", "R",          "N",          "n",     "constellation", "M",
      "alpha",   "beta",       "q",          "channel", "snr-db-min",  "snr-db-max",
      "snr-points", "grid-points", "seed",   "out",   "format",        "figure",
      "threads", "tol",        "scan-tol",   "G",     "L",             "paths"};
  return keys;
}

/// Parses `key = value` lines; blank lines and lines starting with '#' are
/// skipped.
inline Settings parse_config_text(const std::string& text) {
  Settings s;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string v) {
    const auto a = v.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string{};
    const auto b = v.find_last_not_of(" \t\r");
    return v.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    const auto& keys = setting_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(key + ": unknown setting (config line " + std::to_string(lineno) + ")");
    }
    s[key] = value;
  }
  return s;
}

inline Settings load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace detail {

inline double parse_real(const Settings& s, const std::string& key, double fallback) {
  const auto it = s.find(key);
  if (it == s.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size() || !std::isfinite(v)) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + it->second + "' is not a finite number");
  }
}

inline std::int64_t parse_int(const Settings& s, const std::string& key, std::int64_t fallback) {
  const auto it = s.find(key);
  if (it == s.end()) return fallback;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + it->second + "' is not an integer");
  }
}

inline int parse_small_int(const Settings& s, const std::string& key, int fallback) {
  const std::int64_t v = parse_int(s, key, fallback);
  if (v < -1000000000 || v > 1000000000) throw ConfigError(key + ": out of range");
  return static_cast<int>(v);
}

}  // namespace detail

/// Typed, validated configuration. Every rejection names the field.
inline RunConfig make_config(const Settings& s) {
  RunConfig c;
  const auto get = [&](const std::string& k) -> std::optional<std::string> {
    const auto it = s.find(k);
    if (it == s.end()) return std::nullopt;
    return it->second;
  };

  const std::string cmd = get("command").value_or("");
  if (cmd == "ideal-sweep") {
    c.command = Command::kIdealSweep;
  } else if (cmd == "sine-sweep") {
    c.command = Command::kSineSweep;
  } else if (cmd == "analytic") {
    c.command = Command::kAnalytic;
  } else if (cmd == "optimize") {
    c.command = Command::kOptimize;
  } else if (cmd == "figure") {
    c.command = Command::kFigure;
  } else {
    throw ConfigError("command: expected ideal-sweep, sine-sweep, analytic, optimize or figure");
  }

  c.R = detail::parse_small_int(s, "R", c.R);
  if (c.R < 1) throw ConfigError("R: must be >= 1");
  c.N = detail::parse_real(s, "N", c.N);
  if (!(c.N > 0.0)) throw ConfigError("N: must be positive");
  c.n = detail::parse_small_int(s, "n", c.n);
  if (c.n != 1 && c.n != 2) throw ConfigError("n: must be 1 or 2");

  const std::string kind = get("constellation").value_or("rect");
  if (kind == "rect") {
    c.constellation = ConstellationKind::kRectangular;
  } else if (kind == "ring") {
    c.constellation = ConstellationKind::kRing;
  } else if (kind == "binary") {
    c.constellation = ConstellationKind::kBinary;
  } else {
    throw ConfigError("constellation: expected rect, ring or binary");
  }
  c.M = detail::parse_small_int(s, "M", c.M);
  if (c.M < 0) throw ConfigError("M: must be >= 0");
  if (c.constellation == ConstellationKind::kRectangular && c.M != 0 &&
      (c.M < 2 || c.M % 2 != 0)) {
    throw ConfigError("M: rectangular lattices need an even M >= 2 (or 0 to optimise)");
  }
  if (c.constellation == ConstellationKind::kRing && c.M < 2) {
    throw ConfigError("M: ring constellations need M >= 2");
  }
  if (c.constellation == ConstellationKind::kBinary && c.M != 0 && c.M != 2) {
    throw ConfigError("M: binary constellation has M = 2");
  }

  if (get("alpha")) {
    c.alpha = detail::parse_real(s, "alpha", 0.0);
    if (!(*c.alpha >= 0.0)) throw ConfigError("alpha: must be >= 0");
  }
  if (get("beta")) {
    c.beta = detail::parse_real(s, "beta", 1.0);
    if (!(*c.beta > 0.0)) throw ConfigError("beta: must be positive");
  }
  if (c.alpha && !c.beta) throw ConfigError("alpha: needs beta (or give q instead)");
  c.q = detail::parse_real(s, "q", c.q);
  if (get("q") && c.alpha) throw ConfigError("q: give either q or alpha with beta");
  if (c.alpha && c.beta) c.q = *c.alpha * *c.beta;
  if (!(c.q > 0.0)) throw ConfigError("q: stability index must be positive");
  if (c.q > 1.0 + 1e-12) throw ConfigError("q: unstable map, alpha * beta must be <= 1");

  const std::string ch = get("channel").value_or("ideal");
  if (ch == "ideal") {
    c.channel = ChannelKind::kIdeal;
  } else if (ch == "sine") {
    c.channel = ChannelKind::kSine;
  } else {
    throw ConfigError("channel: expected ideal or sine");
  }

  c.snr_db_min = detail::parse_real(s, "snr-db-min", c.snr_db_min);
  c.snr_db_max = detail::parse_real(s, "snr-db-max", c.snr_db_max);
  c.snr_points = detail::parse_small_int(s, "snr-points", c.snr_points);
  if (c.snr_points < 1) throw ConfigError("snr-points: must be >= 1");
  if (c.snr_points == 1 && c.snr_db_max != c.snr_db_min && !get("snr-db-max")) {
    c.snr_db_max = c.snr_db_min;
  }
  if (c.snr_points > 1 && !(c.snr_db_max > c.snr_db_min)) {
    throw ConfigError("snr-db-max: must exceed snr-db-min for an ascending grid");
  }
  if (c.snr_points == 1 && c.snr_db_max != c.snr_db_min) {
    throw ConfigError("snr-points: a single point needs snr-db-min = snr-db-max");
  }
  if (c.snr_db_min < -100.0 || c.snr_db_max > 100.0) {
    throw ConfigError("snr-db-min: SNR grid must lie within [-100, 100] dB");
  }

  c.grid_points = detail::parse_small_int(s, "grid-points", c.grid_points);
  if (c.grid_points < 2) throw ConfigError("grid-points: must be >= 2");
  const std::int64_t seed = detail::parse_int(s, "seed", 1);
  if (seed < 0) throw ConfigError("seed: must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  c.out = get("out").value_or("-");
  if (c.out.empty()) throw ConfigError("out: empty path");
  const std::string fmt = get("format").value_or("csv");
  if (fmt == "csv") {
    c.format = OutputFormat::kCsv;
  } else if (fmt == "json") {
    c.format = OutputFormat::kJson;
  } else {
    throw ConfigError("format: expected csv or json");
  }
  c.figure = detail::parse_small_int(s, "figure", 0);
  if (c.command == Command::kFigure && (c.figure < 1 || c.figure > 4)) {
    throw ConfigError("figure: expected 1, 2, 3 or 4");
  }
  c.threads = detail::parse_small_int(s, "threads", 0);
  if (c.threads < 0) throw ConfigError("threads: must be >= 0");
  c.tol = detail::parse_real(s, "tol", c.tol);
  if (!(c.tol > 0.0)) throw ConfigError("tol: must be positive");
  c.scan_tol = detail::parse_real(s, "scan-tol", c.scan_tol);
  if (!(c.scan_tol > 0.0)) throw ConfigError("scan-tol: must be positive");
  if (get("G")) {
    c.G = detail::parse_small_int(s, "G", 0);
    if (*c.G < 16) throw ConfigError("G: density grid needs >= 16 points");
  }
  if (get("L")) {
    c.L = detail::parse_real(s, "L", 0.0);
    if (!(*c.L > 0.0)) throw ConfigError("L: half-width must be positive");
  }
  c.paths = detail::parse_int(s, "paths", c.paths);
  if (c.paths < 1) throw ConfigError("paths: must be >= 1");
  return c;
}

/// SNR grid in dB, ascending.
inline std::vector<double> snr_grid_db(const RunConfig& c) {
  std::vector<double> g(static_cast<std::size_t>(c.snr_points));
  for (int i = 0; i < c.snr_points; ++i) {
    g[i] = c.snr_points == 1
               ? c.snr_db_min
               : c.snr_db_min + (c.snr_db_max - c.snr_db_min) * i / (c.snr_points - 1);
  }
  return g;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Runs fn(i) for i in [0, count) on `threads` workers (0: hardware).
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Sweep records.

struct SweepRecord {
  double snr_db = 0.0;
  double snr_linear = 0.0;
  std::optional<double> capacity_bits;
  double linear_capacity_bits = 0.0;
  std::optional<double> gain;
  std::optional<double> analytic_low;
  std::optional<double> analytic_high;
  std::optional<double> analytic_gain;
  int R = 0;
  int M = 0;
  std::optional<double> q;
  std::string constellation;
  std::optional<double> parameter;  // optimised spacing or pitch
  std::optional<double> upper_bound_bits;
  std::string status = "ok";
};

inline const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "snr_db",  "snr_linear", "capacity_bits", "linear_capacity_bits", "gain",
      "analytic_low", "analytic_high", "analytic_gain", "R", "M", "q", "constellation",
      "parameter", "upper_bound_bits", "status"};
  return cols;
}

inline Table sweep_table(const std::vector<SweepRecord>& recs) {
  Table t(sweep_columns());
  for (const auto& r : recs) {
    t.add_row({num(r.snr_db), num(r.snr_linear), num(r.capacity_bits),
               num(r.linear_capacity_bits), num(r.gain), num(r.analytic_low),
               num(r.analytic_high), num(r.analytic_gain), integer(r.R), integer(r.M),
               num(r.q), r.constellation, num(r.parameter), num(r.upper_bound_bits),
               r.status});
  }
  return t;
}

inline std::size_t failed_points(const Table& t) {
  if (t.columns().empty() || t.columns().back() != "status") return 0;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.text(i, "status") != "ok") ++bad;
  }
  return bad;
}

namespace detail {

inline SweepRecord base_record(double db, int r, int n) {
  SweepRecord rec;
  rec.snr_db = db;
  rec.snr_linear = db_to_linear(db);
  rec.linear_capacity_bits = linear_capacity(rec.snr_linear, n);
  rec.R = r;
  return rec;
}

inline void set_capacity(SweepRecord& rec, double c) {
  rec.capacity_bits = c;
  if (rec.linear_capacity_bits >= 1e-6) rec.gain = c / rec.linear_capacity_bits;
}

template <class Body>
void guarded(SweepRecord& rec, Body&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    rec.capacity_bits.reset();
    rec.gain.reset();
    rec.status = std::string("error: ") + e.what();
  }
}

inline const char* kind_name(ConstellationKind k) {
  switch (k) {
    case ConstellationKind::kBinary: return "binary";
    case ConstellationKind::kRing: return "ring";
    default: return "rect";
  }
}

}  // namespace detail

/// One ideal-regenerator point.
inline SweepRecord ideal_point(const RunConfig& c, int r, ConstellationKind kind, int m,
                               double db) {
  const auto spec = c.line(r);
  SweepRecord rec = detail::base_record(db, r, c.n);
  rec.constellation = detail::kind_name(kind);
  rec.M = m;
  const double rho = rec.snr_linear;
  const double s = rho * c.N;
  detail::guarded(rec, [&] {
    switch (kind) {
      case ConstellationKind::kBinary: {
        rec.M = 2;
        const auto lattice = make_rectangular(2, 2.0 * std::sqrt(s));
        const auto w = chain_matrix(segment_matrix(lattice, spec), r);
        detail::set_capacity(rec, c.n * mi_discrete(uniform_distribution(2), w));
        rec.parameter = 2.0 * std::sqrt(s);
        rec.analytic_low = low_snr_capacity(rho, r, c.n);
        rec.analytic_gain = regen_gain(spec);
        break;
      }
      case ConstellationKind::kRectangular: {
        if (m == 0) {
          const auto oc = ideal_optimized_capacity(rho, spec, c.search());
          detail::set_capacity(rec, oc.capacity_bits);
          rec.M = oc.M;
          rec.parameter = oc.spacing;
        } else {
          const auto lc = ideal_fixed_capacity(rho, spec, m, c.search().ba);
          detail::set_capacity(rec, lc.capacity_bits);
          rec.parameter = lc.spacing;
        }
        const auto g = optimal_cell(spec);
        rec.analytic_low = low_snr_capacity(rho, r, c.n);
        rec.analytic_high = high_snr_capacity(
            make_rectangular(lattice_size_for_power(s, g.d_opt), g.d_opt), spec, s);
        rec.analytic_gain = g.gain_bits;
        break;
      }
      case ConstellationKind::kRing: {
        detail::set_capacity(rec, ideal_ring_capacity(rho, spec, m));
        rec.parameter = std::sqrt(c.n * s);
        break;
      }
    }
  });
  return rec;
}

/// One sine-map point; with beta configured the pitch is fixed, otherwise
/// it is optimised. The ideal chain with the same R supplies the bound.
inline SweepRecord sine_point(const RunConfig& c, int r, double q, double db,
                              bool fixed_beta) {
  const auto spec = c.line(r);
  SweepRecord rec = detail::base_record(db, r, c.n);
  rec.constellation = "sine";
  rec.q = q;
  const double rho = rec.snr_linear;
  detail::guarded(rec, [&] {
    rec.analytic_gain = sine_asymptotic_gain(spec, q);
    if (fixed_beta) {
      const double pitch = 2.0 * std::numbers::pi / *c.beta;
      const auto lc = sine_lattice_capacity(rho, q, spec, pitch, c.search());
      detail::set_capacity(rec, lc.capacity_bits);
      rec.M = lc.M;
      rec.parameter = pitch;
    } else {
      const auto oc = sine_optimized_capacity(rho, q, spec, c.search());
      detail::set_capacity(rec, oc.capacity_bits);
      rec.M = oc.M;
      rec.parameter = oc.spacing;
    }
    rec.upper_bound_bits = ideal_optimized_capacity(rho, spec, c.search()).capacity_bits;
  });
  return rec;
}

template <class PointFn>
std::vector<SweepRecord> sweep(const RunConfig& c, PointFn&& point) {
  const auto dbs = snr_grid_db(c);
  std::vector<SweepRecord> recs(dbs.size());
  parallel_for(dbs.size(), c.threads, [&](std::size_t i) { recs[i] = point(dbs[i]); });
  return recs;
}

inline Table run_ideal_sweep(const RunConfig& c) {
  return sweep_table(
      sweep(c, [&](double db) { return ideal_point(c, c.R, c.constellation, c.M, db); }));
}

inline Table run_sine_sweep(const RunConfig& c) {
  const bool fixed = c.beta.has_value();
  const double q = c.sine_q();
  return sweep_table(sweep(c, [&](double db) { return sine_point(c, c.R, q, db, fixed); }));
}

/// Closed-form quantities for R = 1 .. cfg.R.
inline Table run_analytic(const RunConfig& c) {
  std::vector<double> qs = {1.0, 0.5};
  if (std::find(qs.begin(), qs.end(), c.sine_q()) == qs.end()) qs.push_back(c.sine_q());
  std::vector<std::string> cols = {"R", "delta", "d_opt", "snr_opt", "snr_opt_db", "gain_bits"};
  for (double q : qs) cols.push_back("sine_gain_q" + format_number(q));
  Table t(cols);
  for (int r = 1; r <= c.R; ++r) {
    const auto spec = c.line(r);
    const auto g = optimal_cell(spec);
    std::vector<Cell> row = {integer(r), num(g.delta), num(g.d_opt), num(g.snr_opt),
                             num(10.0 * std::log10(g.snr_opt)), num(g.gain_bits)};
    for (double q : qs) row.push_back(num(sine_asymptotic_gain(spec, q)));
    t.add_row(std::move(row));
  }
  return t;
}

/// Search traces of the spacing (ideal) or pitch (sine) optimisation, one
/// block of rows per SNR point.
inline Table run_optimize(const RunConfig& c) {
  const auto dbs = snr_grid_db(c);
  std::vector<OptimizationResult> res(dbs.size());
  std::vector<std::string> errors(dbs.size());
  const auto spec = c.line(c.R);
  const double q = c.sine_q();
  parallel_for(dbs.size(), c.threads, [&](std::size_t i) {
    const double rho = db_to_linear(dbs[i]);
    try {
      res[i] = c.channel == ChannelKind::kIdeal
                   ? ideal_optimized_capacity(rho, spec, c.search()).search
                   : sine_optimized_capacity(rho, q, spec, c.search()).search;
    } catch (const std::exception& e) {
      errors[i] = std::string("error: ") + e.what();
    }
  });
  Table t({"snr_db", "snr_linear", "parameter", "capacity_bits", "best", "status"});
  for (std::size_t i = 0; i < dbs.size(); ++i) {
    const double rho = db_to_linear(dbs[i]);
    if (!errors[i].empty()) {
      t.add_row({num(dbs[i]), num(rho), Cell{}, Cell{}, integer(0), errors[i]});
      continue;
    }
    for (const auto& [x, v] : res[i].trace) {
      const bool best = x == res[i].best_parameter && v == res[i].best_capacity;
      t.add_row({num(dbs[i]), num(rho), num(x), num(v), integer(best ? 1 : 0), "ok"});
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Figure reproductions.

/// Transfer functions of the ideal regenerator and three sine maps, with the
/// output density of a symbol after R stages from the density kernel and
/// from seeded Monte-Carlo paths.
inline Table figure_transfer(const RunConfig& c) {
  const auto map_b3_q1 = SineMap::from_q(1.0, 3.0);
  const auto map_b3_q05 = SineMap::from_q(0.5, 3.0);
  const auto map_b2_q1 = SineMap::from_q(1.0, 2.0);
  const auto spec = SineChannelSpec::equal_split(map_b3_q1, c.R, c.N, c.n);
  const double x0 = std::numbers::pi / 3.0;
  const Constellation1D symbol({x0});
  QuadratureSpec grid = default_density_grid(spec, symbol, c.G.value_or(2048));
  if (c.L) {
    grid.lower = x0 - *c.L;
    grid.upper = x0 + *c.L;
  }
  if (c.G) grid.points = *c.G;
  const auto dens = propagate_density(spec, symbol, grid);
  const auto samples = monte_carlo_paths(spec, x0, static_cast<std::size_t>(c.paths), c.seed);
  std::vector<double> hist(static_cast<std::size_t>(grid.points), 0.0);
  const double h = (grid.upper - grid.lower) / grid.points;
  for (double y : samples) {
    const double u = (y - grid.lower) / h;
    if (u >= 0.0 && u < grid.points) hist[static_cast<std::size_t>(u)] += 1.0;
  }
  const auto alphabet = sine_alphabet(map_b3_q1, 2 * static_cast<int>(std::ceil(
                                                         std::max(std::abs(grid.lower),
                                                                  std::abs(grid.upper)) /
                                                         map_b3_q1.pitch())) + 2);
  Table t({"x", "ideal_tf", "sine_beta3_q1", "sine_beta3_q0.5", "sine_beta2_q1",
           "kernel_density", "mc_density"});
  for (std::size_t i = 0; i < dens.axis.size(); ++i) {
    const double x = dens.axis[i];
    t.add_row({num(x), num(alphabet[nearest_symbol(alphabet, x)]), num(transfer(map_b3_q1, x)),
               num(transfer(map_b3_q05, x)), num(transfer(map_b2_q1, x)),
               num(dens.densities[0][i]),
               num(hist[i] / (static_cast<double>(samples.size()) * h))});
  }
  return t;
}

/// Ideal-regenerator capacity for several R: optimised rectangular lattice
/// and binary signalling, with the closed forms alongside.
inline Table figure_ideal(const RunConfig& c) {
  std::vector<SweepRecord> all;
  for (int r : {5, 10, 20, 40}) {
    for (auto kind : {ConstellationKind::kRectangular, ConstellationKind::kBinary}) {
      auto recs = sweep(c, [&](double db) { return ideal_point(c, r, kind, 0, db); });
      all.insert(all.end(), recs.begin(), recs.end());
    }
  }
  return sweep_table(all);
}

/// Rectangular M^2 lattices against M^2-point rings at the configured R,
/// with the SNR at which the better of each pair changes.
inline Table figure_constellations(const RunConfig& c) {
  std::vector<SweepRecord> all;
  std::vector<std::optional<double>> crossover;
  for (int m : {2, 4, 8}) {
    auto rect = sweep(c, [&](double db) {
      return ideal_point(c, c.R, ConstellationKind::kRectangular, m, db);
    });
    auto ring = sweep(c, [&](double db) {
      return ideal_point(c, c.R, ConstellationKind::kRing, m * m, db);
    });
    std::optional<double> cross;
    for (std::size_t i = 1; i < rect.size() && !cross; ++i) {
      const auto& a0 = rect[i - 1];
      const auto& a1 = rect[i];
      const auto& b0 = ring[i - 1];
      const auto& b1 = ring[i];
      if (!a0.capacity_bits || !a1.capacity_bits || !b0.capacity_bits || !b1.capacity_bits) {
        continue;
      }
      const double d0 = *a0.capacity_bits - *b0.capacity_bits;
      const double d1 = *a1.capacity_bits - *b1.capacity_bits;
      if ((d0 < 0.0) != (d1 < 0.0) && d0 != d1) {
        cross = a0.snr_db + (a1.snr_db - a0.snr_db) * d0 / (d0 - d1);
      }
    }
    for (auto* set : {&rect, &ring}) {
      for (auto& rec : *set) {
        all.push_back(rec);
        crossover.push_back(cross);
      }
    }
  }
  Table base = sweep_table(all);
  auto cols = base.columns();
  cols.push_back("crossover_db");
  Table t(cols);
  for (std::size_t i = 0; i < base.size(); ++i) {
    auto row = base.rows()[i];
    row.push_back(num(crossover[i]));
    t.add_row(std::move(row));
  }
  return t;
}

/// Sine chains with q in {1, 0.5} and R in {10, 20}, pitch and input
/// optimised, each with the ideal-regenerator bound.
inline Table figure_sine(const RunConfig& c) {
  std::vector<SweepRecord> all;
  for (int r : {10, 20}) {
    for (double q : {1.0, 0.5}) {
      auto recs = sweep(c, [&](double db) { return sine_point(c, r, q, db, false); });
      all.insert(all.end(), recs.begin(), recs.end());
    }
  }
  return sweep_table(all);
}

inline Table run_figure(const RunConfig& c) {
  switch (c.figure) {
    case 1: return figure_transfer(c);
    case 2: return figure_ideal(c);
    case 3: return figure_constellations(c);
    case 4: return figure_sine(c);
    default: throw ConfigError("figure: expected 1, 2, 3 or 4");
  }
}

inline Table run(const RunConfig& c) {
  switch (c.command) {
    case Command::kIdealSweep: return run_ideal_sweep(c);
    case Command::kSineSweep: return run_sine_sweep(c);
    case Command::kAnalytic: return run_analytic(c);
    case Command::kOptimize: return run_optimize(c);
    case Command::kFigure: return run_figure(c);
  }
  throw ConfigError("command: unsupported");
}

}  // namespace regen
