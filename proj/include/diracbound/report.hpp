// Copyright 2026 The diracbound Authors
// SPDX-License-Identifier: Apache-2.0

/// \file report.hpp
/// Run configuration, table emission (CSV / JSON) and the subcommand
/// drivers behind the `diracbound` command-line tool.

#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "diracbound/diracbound.hpp"

#ifndef DIRACBOUND_VERSION
#define DIRACBOUND_VERSION "0.0.0"
#endif

namespace diracbound {

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitInvalidConfig = 2;

inline constexpr const char* kOutputDirEnv = "DIRACBOUND_OUTPUT_DIR";

// ---------------------------------------------------------------------------
// Configuration

struct PotentialConfig {
  std::string family = "gaussian";
  double alpha = 1.0;
  double gamma = 1.0;
  double depth = 1.0;
  double half_width = 1.0;

  PotentialSpec build() const {
    try {
      if (family == "gaussian") return gaussian_pair(alpha, gamma);
      if (family == "square") return square_well(depth, half_width);
      if (family == "delta") return delta_pair(gamma);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("potential: ") + e.what());
    }
    throw ConfigError("potential.family: unknown family '" + family + "' (gaussian|square|delta)");
  }

  nlohmann::json to_json() const {
    if (family == "gaussian") return {{"family", family}, {"alpha", alpha}, {"gamma", gamma}};
    if (family == "square") return {{"family", family}, {"depth", depth}, {"half_width", half_width}};
    return {{"family", family}, {"gamma", gamma}};
  }
};

/// Shortest round-trip representation; NaN and infinities spelled NaN, inf, -inf.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

/// Either a single value or start:stop:step (stop inclusive up to rounding).
struct LambdaRange {
  double start = 1.0;
  double stop = 1.0;
  double step = 0.0;

  static LambdaRange parse(const std::string& text, const std::string& field) {
    auto number = [&](const std::string& s) {
      double v = 0.0;
      const char* b = s.data();
      const char* e = s.data() + s.size();
      auto [p, ec] = std::from_chars(b, e, v);
      if (ec != std::errc() || p != e) throw ConfigError(field + ": cannot parse number '" + s + "'");
      return v;
    };
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    LambdaRange r;
    if (parts.size() == 1) {
      r.start = r.stop = number(parts[0]);
    } else if (parts.size() == 3) {
      r.start = number(parts[0]);
      r.stop = number(parts[1]);
      r.step = number(parts[2]);
      if (!(r.step > 0.0)) throw ConfigError(field + ": range step must be positive");
      if (r.stop < r.start) throw ConfigError(field + ": empty range (stop < start)");
    } else {
      throw ConfigError(field + ": expected a number or start:stop:step, got '" + text + "'");
    }
    if (!(r.start >= 0.0)) throw ConfigError(field + ": lambda must be >= 0");
    return r;
  }

  std::vector<double> values() const {
    if (step == 0.0) return {start};
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", start + static_cast<double>(i) * step);
      out.push_back(std::strtod(buf, nullptr));
    }
    return out;
  }

  std::string text() const {
    std::string s = format_number(start);
    if (step != 0.0) s += ":" + format_number(stop) + ":" + format_number(step);
    return s;
  }
};

struct RunConfig {
  std::string command;
  PotentialConfig potential;
  double m = 0.1;
  LambdaRange lambda;
  double q = 0.0;
  std::vector<double> fk_q{0.0};  ///< transverse momenta tabulated by `functionals`
  std::string method = "pt4";     ///< energy: pt4 | pt2-2d
  std::string kind = "rel";       ///< pade: rel | nr21 | nr22
  std::vector<double> region_alphas{0.5, 1.0, 2.0};
  int gamma_steps = 41;
  double m_max = 1.0;
  int m_steps = 0;
  SolverConfig solver;
  FunctionalOptions functional_options;
  std::string format;        ///< csv | json; empty picks json for functionals/shoot, csv otherwise
  std::string output;       ///< empty: stdout
  std::string wavefunction; ///< shoot: optional CSV of (x, psi1, psi2, rho)
  unsigned jobs = 1;

  void validate() const {
    static const std::vector<std::string> commands{"functionals", "energy", "pade", "region", "shoot", "scan", "fit"};
    if (std::find(commands.begin(), commands.end(), command) == commands.end())
      throw ConfigError("command: unknown subcommand '" + command + "'");
    if (command != "region") (void)potential.build();
    if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("model.m: must be > 0");
    if (!std::isfinite(q)) throw ConfigError("model.q: must be finite");
    if (method != "pt4" && method != "pt2-2d") throw ConfigError("energy.method: expected pt4 or pt2-2d");
    if (kind != "rel" && kind != "nr21" && kind != "nr22") throw ConfigError("pade.kind: expected rel, nr21 or nr22");
    if (region_alphas.empty()) throw ConfigError("region.alphas: must not be empty");
    for (double a : region_alphas)
      if (!(a > 0.0)) throw ConfigError("region.alphas: every alpha must be > 0");
    if (gamma_steps < 2) throw ConfigError("region.gamma_steps: must be >= 2");
    if (!(m_max > 0.0)) throw ConfigError("region.m_max: must be > 0");
    if (m_steps < 0) throw ConfigError("region.m_steps: must be >= 0");
    if (!format.empty() && format != "csv" && format != "json")
      throw ConfigError("output.format: expected csv or json");
    if (jobs == 0) throw ConfigError("jobs: must be >= 1");
    try {
      if (command == "shoot" || command == "scan" || command == "fit") solver.validate(potential.build());
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    if ((command == "shoot" || command == "scan" || command == "fit") && potential.family == "delta")
      throw ConfigError("potential.family: the shooting solver needs a smooth potential (not delta)");
    if (!output.empty()) {
      auto dir = resolved_output_path().parent_path();
      if (!dir.empty() && !std::filesystem::is_directory(dir))
        throw ConfigError("output.path: directory '" + dir.string() + "' does not exist");
    }
  }

  std::string effective_format() const {
    if (!format.empty()) return format;
    return command == "functionals" || command == "shoot" ? "json" : "csv";
  }

  /// Relative output paths are taken against $DIRACBOUND_OUTPUT_DIR when set.
  std::filesystem::path resolved_output_path() const {
    std::filesystem::path p(output);
    if (p.is_relative()) {
      if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) return std::filesystem::path(dir) / p;
    }
    return p;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["potential"] = potential.to_json();
    j["model"] = {{"m", m}, {"lambda", lambda.text()}, {"q", q}, {"fk_q", fk_q}};
    j["energy"] = {{"method", method}};
    j["pade"] = {{"kind", kind}};
    j["region"] = {{"alphas", region_alphas}, {"gamma_steps", gamma_steps}, {"m_max", m_max}, {"m_steps", m_steps}};
    j["solver"] = {{"half_length", solver.half_length},
                   {"rel_tol", solver.rel_tol},
                   {"abs_tol", solver.abs_tol},
                   {"scan_points", solver.scan_points},
                   {"energy_margin", solver.energy_margin},
                   {"bisection_tol", solver.bisection_tol},
                   {"grid_step", solver.grid_step},
                   {"fit_window", {solver.fit_window.x_min, solver.fit_window.x_max}}};
    j["quadrature"] = {{"tol_1d", functional_options.tol_1d},
                       {"tol_nested", functional_options.tol_nested},
                       {"tol_inner", functional_options.tol_inner}};
    j["output"] = {{"format", effective_format()}, {"path", output}, {"wavefunction", wavefunction}};
    j["jobs"] = jobs;
    return j;
  }
};

namespace detail {

template <class T>
void read_field(const nlohmann::json& obj, const char* key, T& dst, const std::string& path) {
  if (!obj.contains(key)) return;
  try {
    dst = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

inline const nlohmann::json* section(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return nullptr;
  if (!j.at(key).is_object()) throw ConfigError(std::string(key) + ": expected a table");
  return &j.at(key);
}

}  // namespace detail

/// Overlay the settings of a nested key-value document onto `cfg`.
inline void apply_config(const nlohmann::json& j, RunConfig& cfg) {
  using detail::read_field;
  if (!j.is_object()) throw ConfigError("config: top level must be a table");
  read_field(j, "command", cfg.command, "config");
  if (auto* p = detail::section(j, "potential")) {
    int families = p->contains("family") ? 1 : 0;
    if (families == 0) throw ConfigError("potential.family: missing (exactly one family is required)");
    read_field(*p, "family", cfg.potential.family, "potential");
    read_field(*p, "alpha", cfg.potential.alpha, "potential");
    read_field(*p, "gamma", cfg.potential.gamma, "potential");
    read_field(*p, "depth", cfg.potential.depth, "potential");
    read_field(*p, "half_width", cfg.potential.half_width, "potential");
  }
  if (auto* p = detail::section(j, "model")) {
    read_field(*p, "m", cfg.m, "model");
    read_field(*p, "q", cfg.q, "model");
    read_field(*p, "fk_q", cfg.fk_q, "model");
    if (p->contains("lambda")) {
      const auto& l = p->at("lambda");
      if (l.is_number()) cfg.lambda = LambdaRange::parse(l.dump(), "model.lambda");
      else if (l.is_string()) cfg.lambda = LambdaRange::parse(l.get<std::string>(), "model.lambda");
      else throw ConfigError("model.lambda: expected a number or \"start:stop:step\"");
    }
  }
  if (auto* p = detail::section(j, "energy")) read_field(*p, "method", cfg.method, "energy");
  if (auto* p = detail::section(j, "pade")) read_field(*p, "kind", cfg.kind, "pade");
  if (auto* p = detail::section(j, "region")) {
    read_field(*p, "alphas", cfg.region_alphas, "region");
    read_field(*p, "gamma_steps", cfg.gamma_steps, "region");
    read_field(*p, "m_max", cfg.m_max, "region");
    read_field(*p, "m_steps", cfg.m_steps, "region");
  }
  if (auto* p = detail::section(j, "solver")) {
    read_field(*p, "half_length", cfg.solver.half_length, "solver");
    read_field(*p, "rel_tol", cfg.solver.rel_tol, "solver");
    read_field(*p, "abs_tol", cfg.solver.abs_tol, "solver");
    read_field(*p, "scan_points", cfg.solver.scan_points, "solver");
    read_field(*p, "energy_margin", cfg.solver.energy_margin, "solver");
    read_field(*p, "bisection_tol", cfg.solver.bisection_tol, "solver");
    read_field(*p, "grid_step", cfg.solver.grid_step, "solver");
    if (p->contains("fit_window")) {
      std::vector<double> w;
      read_field(*p, "fit_window", w, "solver");
      if (w.size() != 2) throw ConfigError("solver.fit_window: expected [x_min, x_max]");
      cfg.solver.fit_window = {w[0], w[1]};
    }
  }
  if (auto* p = detail::section(j, "quadrature")) {
    read_field(*p, "tol_1d", cfg.functional_options.tol_1d, "quadrature");
    read_field(*p, "tol_nested", cfg.functional_options.tol_nested, "quadrature");
    read_field(*p, "tol_inner", cfg.functional_options.tol_inner, "quadrature");
  }
  if (auto* p = detail::section(j, "output")) {
    read_field(*p, "format", cfg.format, "output");
    read_field(*p, "path", cfg.output, "output");
    read_field(*p, "wavefunction", cfg.wavefunction, "output");
  }
  read_field(j, "jobs", cfg.jobs, "config");
}

inline nlohmann::json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: parse error in '" + path.string() + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline double or_nan(const std::optional<double>& v) { return v ? *v : nan_value(); }

/// RFC 4180 quoting: fields with comma, quote, CR or LF are quoted and quotes doubled.
inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Metadata {
  nlohmann::json config;
  nlohmann::json extra;  ///< tolerances achieved, conventions, model details
  std::string timestamp;
};

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_csv(std::ostream& os, const Table& t, const Metadata& meta) {
  os << "# diracbound " << DIRACBOUND_VERSION << "\n";
  os << "# config: " << meta.config.dump() << "\n";
  if (!meta.extra.is_null()) os << "# metadata: " << meta.extra.dump() << "\n";
  os << "# timestamp: " << meta.timestamp << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (auto* d = std::get_if<double>(&row[i])) os << format_number(*d);
      else os << csv_escape(std::get<std::string>(row[i]));
    }
    os << "\n";
  }
}

inline nlohmann::json json_number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline nlohmann::json metadata_json(const Metadata& meta) {
  nlohmann::json j{{"tool", "diracbound"}, {"version", DIRACBOUND_VERSION}, {"config", meta.config},
                   {"timestamp", meta.timestamp}};
  if (!meta.extra.is_null()) j["details"] = meta.extra;
  return j;
}

inline nlohmann::json table_json(const Table& t, const Metadata& meta) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (auto* d = std::get_if<double>(&row[i])) r[t.columns[i]] = json_number(*d);
      else r[t.columns[i]] = std::get<std::string>(row[i]);
    }
    rows.push_back(std::move(r));
  }
  return {{"metadata", metadata_json(meta)}, {"columns", t.columns}, {"rows", rows}};
}

// ---------------------------------------------------------------------------
// Subcommands

struct RunOutcome {
  int exit_code = kExitOk;
  std::size_t failures = 0;
};

namespace detail {

inline nlohmann::json conventions(const RunConfig& cfg) {
  nlohmann::json c{{"units", "hbar = c = 1"},
                   {"psi2", "reported as real chi with psi2 = -i chi"},
                   {"nonrelativistic_kinetic_term", "-psi''/(2m)"},
                   {"pade_nr21", "energy m - B with B the [2,1] binding approximant"}};
  if (cfg.potential.family == "square") c["square_well_U"] = "U = V (gamma = 0 analog)";
  return c;
}

inline nlohmann::json functional_json(const FunctionalSet& fs) {
  return {{"f1", fs.f1},   {"f21", fs.f21}, {"f22", fs.f22}, {"f31", fs.f31}, {"f32", fs.f32}, {"u1", fs.u1},
          {"errors",
           {{"f1", fs.errors.f1},
            {"f21", fs.errors.f21},
            {"f22", fs.errors.f22},
            {"f31", fs.errors.f31},
            {"f32", fs.errors.f32},
            {"u1", fs.errors.u1}}}};
}

inline nlohmann::json pade_json(const PadeModel& p) {
  nlohmann::json j{{"kind", to_string(p.kind())},
                   {"numerator_l2", p.numerator()},
                   {"denominator", {p.denominator()[0], p.denominator()[1], p.denominator()[2]}},
                   {"poles", p.poles()}};
  if (auto a = p.asymptote()) j["asymptote"] = *a;
  else j["asymptote"] = nullptr;
  return j;
}

}  // namespace detail

/// Result of one subcommand before it is written out.
struct Report {
  std::optional<Table> table;
  nlohmann::json document;  ///< used when there is no table (functionals, shoot)
  nlohmann::json details;
  std::size_t failures = 0;
  std::size_t points = 0;
  std::optional<Table> wavefunction;
};

inline Report build_report(const RunConfig& cfg) {
  Report rep;
  rep.details["conventions"] = detail::conventions(cfg);
  const auto lambdas = cfg.lambda.values();

  if (cfg.command == "region") {
    Table t;
    const bool grid = cfg.m_steps > 0;
    t.columns = grid ? std::vector<std::string>{"alpha", "gamma", "m", "pole_free"}
                     : std::vector<std::string>{"alpha", "gamma", "m_boundary"};
    for (double alpha : cfg.region_alphas) {
      for (int i = 0; i < cfg.gamma_steps; ++i) {
        const double gamma = -1.0 + 2.0 * i / (cfg.gamma_steps - 1);
        if (!grid) {
          t.rows.push_back({alpha, gamma, gaussian_region_boundary(alpha, gamma)});
          continue;
        }
        for (int k = 1; k <= cfg.m_steps; ++k) {
          const double m = cfg.m_max * k / cfg.m_steps;
          t.rows.push_back({alpha, gamma, m, gaussian_region(alpha, gamma, m) ? 1.0 : 0.0});
        }
      }
    }
    rep.points = t.rows.size();
    rep.table = std::move(t);
    return rep;
  }

  const PotentialSpec spec = cfg.potential.build();
  std::optional<FunctionalSet> fs;
  if (cfg.command != "shoot") {
    fs = compute_functionals(spec, cfg.functional_options);
    rep.details["functionals"] = detail::functional_json(*fs);
  }

  if (cfg.command == "functionals") {
    FkCache cache(*fs, cfg.m);
    nlohmann::json fk = nlohmann::json::array();
    for (double q : cfg.fk_q) {
      const double k = std::hypot(q, cfg.m);
      fk.push_back({{"q", q}, {"k", k}, {"value", cache.get(k)}});
    }
    rep.document = detail::functional_json(*fs);
    rep.document["m"] = cfg.m;
    rep.document["fk"] = fk;
    rep.points = 1;
    return rep;
  }

  if (cfg.command == "energy") {
    const auto series = energy_series_1d(*fs, cfg.m);
    rep.details["series"] = {{"c2", series.c2},         {"c3", series.c3},         {"c4_nr", series.c4_nr},
                             {"c4_rel", series.c4_rel}, {"delta_e", series.delta_e}, {"eta4", series.eta4},
                             {"kappa4", series.kappa4}};
    Table t;
    t.columns = {"lambda", "q", "E", "c2", "c3", "c4_nr", "c4_rel"};
    for (double l : lambdas) {
      if (cfg.method == "pt4") {
        t.rows.push_back({l, 0.0, eval_pt4(series, l), series.c2, series.c3, series.c4_nr, series.c4_rel});
      } else {
        const double k = std::hypot(cfg.q, cfg.m);
        const double fk = fs->fk(cfg.m, k);
        t.rows.push_back({l, cfg.q, energy_2d_pt2(*fs, cfg.m, cfg.q, l), -fk * fk / (2.0 * k), nan_value(),
                          nan_value(), nan_value()});
      }
    }
    rep.points = t.rows.size();
    rep.table = std::move(t);
    return rep;
  }

  if (cfg.command == "pade") {
    const PadeKind kind = cfg.kind == "rel"    ? PadeKind::relativistic_22
                          : cfg.kind == "nr22" ? PadeKind::nonrelativistic_22
                                               : PadeKind::nonrelativistic_21;
    const auto model = make_pade(kind, *fs, cfg.m);
    rep.details["pade"] = detail::pade_json(model);
    rep.details["pole_free"] = pole_free_condition(*fs, relativistic_correction(*fs, cfg.m), cfg.m);
    Table t;
    t.columns = {"lambda", "E", "Gamma"};
    for (double l : lambdas) t.rows.push_back({l, model.energy(l), or_nan(decay_constant_model(model, cfg.m, l))});
    rep.points = t.rows.size();
    rep.table = std::move(t);
    return rep;
  }

  if (cfg.command == "shoot") {
    const double l = lambdas.front();
    auto sol = solve_dirac_ground(spec, cfg.m, l, cfg.solver);
    rep.document = {{"m", cfg.m},
                    {"lambda", l},
                    {"E", sol.energy},
                    {"gamma_fit", json_number(sol.gamma_fit)},
                    {"amplitude_fit", json_number(sol.amplitude_fit)},
                    {"gamma_expected", sol.decay_constant()},
                    {"fit_window", {sol.fit_window.x_min, sol.fit_window.x_max}},
                    {"residual", sol.residual},
                    {"nodes", sol.nodes},
                    {"half_length", sol.half_length},
                    {"singular_points", sol.singular_points},
                    {"singular_slope", sol.singular_slope}};
    if (!cfg.wavefunction.empty()) {
      Table w;
      w.columns = {"x", "psi1", "psi2", "rho"};
      for (std::size_t i = 0; i < sol.grid.size(); ++i)
        w.rows.push_back({sol.grid[i], sol.psi1[i], sol.psi2[i], sol.rho[i]});
      rep.wavefunction = std::move(w);
    }
    rep.points = 1;
    return rep;
  }

  if (cfg.command == "scan") {
    const auto rel = pade_relativistic(*fs, cfg.m);
    const auto nr22 = pade_nonrelativistic(*fs, cfg.m, NrPadeOrder::p22);
    const auto nr21 = pade_nonrelativistic(*fs, cfg.m, NrPadeOrder::p21);
    rep.details["pade"] = {detail::pade_json(rel), detail::pade_json(nr22), detail::pade_json(nr21)};
    Table t;
    t.columns = {"lambda",           "m_minus_E_shoot",      "m_minus_E_pade", "m_minus_E_pade_nr22",
                 "m_minus_E_pade_nr21", "m_minus_E_nr", "status"};
    t.rows = parallel_map(lambdas.size(), cfg.jobs, [&](std::size_t i) {
      const double l = lambdas[i];
      std::string status;
      double shoot = nan_value(), nr = nan_value();
      try {
        shoot = cfg.m - solve_dirac_ground(spec, cfg.m, l, cfg.solver).energy;
      } catch (const Error& e) {
        status = std::string("shoot: ") + e.what();
      }
      try {
        nr = solve_schrodinger_ground(spec, cfg.m, l, cfg.solver).binding;
      } catch (const Error& e) {
        status += (status.empty() ? "" : "; ") + std::string("nr: ") + e.what();
      }
      return std::vector<Cell>{l, shoot, rel.binding(l), nr22.binding(l), nr21.binding(l), nr, status};
    });
    for (const auto& r : t.rows)
      if (!std::get<std::string>(r.back()).empty()) ++rep.failures;
    rep.points = t.rows.size();
    rep.table = std::move(t);
    return rep;
  }

  // fit
  const auto rel = pade_relativistic(*fs, cfg.m);
  rep.details["pade"] = detail::pade_json(rel);
  auto rows = scan_gamma(spec, cfg.m, lambdas, cfg.solver, &rel, cfg.jobs);
  Table t;
  t.columns = {"lambda", "E", "gamma_fit", "gamma_expected", "gamma_model", "status"};
  for (const auto& r : rows) {
    const double e = or_nan(r.energy);
    const double expected = r.energy ? std::sqrt((cfg.m - e) * (cfg.m + e)) : nan_value();
    t.rows.push_back({r.lambda, e, or_nan(r.gamma_fit), expected, or_nan(r.gamma_model), r.error});
    if (!r.error.empty()) ++rep.failures;
  }
  rep.points = t.rows.size();
  rep.table = std::move(t);
  return rep;
}

inline void write_report(std::ostream& os, const Report& rep, const RunConfig& cfg, const Metadata& meta) {
  if (rep.table) {
    if (cfg.effective_format() == "csv") write_csv(os, *rep.table, meta);
    else os << table_json(*rep.table, meta).dump(2) << "\n";
    return;
  }
  if (cfg.effective_format() == "json") {
    os << nlohmann::json{{"metadata", metadata_json(meta)}, {"result", rep.document}}.dump(2) << "\n";
    return;
  }
  // Single-record CSV for document-style results: flatten scalar fields.
  Table t;
  std::vector<Cell> row;
  for (const auto& [key, value] : rep.document.items()) {
    if (value.is_number()) {
      t.columns.push_back(key);
      row.push_back(value.get<double>());
    } else if (value.is_null()) {
      t.columns.push_back(key);
      row.push_back(nan_value());
    }
  }
  t.rows.push_back(std::move(row));
  write_csv(os, t, meta);
}

/// Run one configured subcommand, writing to cfg.output (or `out`).
inline RunOutcome run(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                      std::string timestamp = utc_timestamp()) {
  RunOutcome outcome;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << "\n";
    outcome.exit_code = kExitInvalidConfig;
    return outcome;
  }
  Report rep;
  try {
    rep = build_report(cfg);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << "\n";
    outcome.exit_code = kExitInvalidConfig;
    return outcome;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    outcome.exit_code = kExitPartial;
    outcome.failures = 1;
    return outcome;
  }

  Metadata meta{cfg.to_json(), rep.details, std::move(timestamp)};
  if (cfg.output.empty()) {
    write_report(out, rep, cfg, meta);
  } else {
    std::ofstream f(cfg.resolved_output_path());
    if (!f) {
      err << "invalid config: output.path: cannot write '" << cfg.resolved_output_path().string() << "'\n";
      outcome.exit_code = kExitInvalidConfig;
      return outcome;
    }
    write_report(f, rep, cfg, meta);
  }
  if (rep.wavefunction) {
    std::filesystem::path p(cfg.wavefunction);
    if (p.is_relative())
      if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) p = std::filesystem::path(dir) / p;
    std::ofstream f(p);
    if (!f) {
      err << "invalid config: output.wavefunction: cannot write '" << p.string() << "'\n";
      outcome.exit_code = kExitInvalidConfig;
      return outcome;
    }
    write_csv(f, *rep.wavefunction, meta);
  }
  outcome.failures = rep.failures;
  if (rep.failures > 0) {
    err << rep.failures << " of " << rep.points << " points failed (recorded in the status column)\n";
    outcome.exit_code = kExitPartial;
  }
  return outcome;
}

}  // namespace diracbound
