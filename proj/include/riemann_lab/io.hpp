#pragma once

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "llf_solver.hpp"
#include "riemann_classifier.hpp"

namespace riemann_lab::io {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  Params params;
  State left{3.0, 3.0};
  std::optional<State> right;

  // simulate
  Grid grid;
  double cfl = 0.45;
  double t_end = 5.0;
  Scheme scheme = Scheme::GlobalLF;
  std::optional<Renorm> renorm;
  int snapshot_period = 1000;

  // regions
  Window window{0.0, 15.0, -10.0, 10.0};
  int nx = 300;
  int ny = 400;

  // gspt
  std::vector<double> eps_list{1e-2, 3e-3, 1e-3};
};

inline void validate(const RunConfig& c) {
  auto finite_state = [](const State& s, const char* path) {
    if (!std::isfinite(s.rho) || !std::isfinite(s.u) || s.rho < 0.0)
      throw ConfigError(std::string(path) + ": needs finite rho >= 0 and finite u");
  };
  validate(c.params);
  finite_state(c.left, "left");
  if (c.right) finite_state(*c.right, "right");
  validate(c.grid);
  if (!(c.cfl > 0.0 && c.cfl <= 0.5)) throw ConfigError("cfl: must lie in (0, 1/2]");
  if (!(c.t_end > 0.0)) throw ConfigError("t_end: must be positive");
  if (c.snapshot_period < 1) throw ConfigError("snapshot_period: must be >= 1");
  if (c.renorm && (c.renorm->period < 1 || !(c.renorm->tol >= 0.0)))
    throw ConfigError("renorm: needs period >= 1 and tol >= 0");
  if (!(c.window.rho_hi > c.window.rho_lo && c.window.u_hi > c.window.u_lo))
    throw ConfigError("window: needs rho_lo < rho_hi and u_lo < u_hi");
  if (c.nx < 1 || c.ny < 1) throw ConfigError("resolution: nx and ny must be >= 1");
  for (double e : c.eps_list)
    if (!(e > 0.0 && e <= 0.1)) throw ConfigError("eps_list: entries must lie in (0, 0.1]");
}

inline json state_json(const State& s) { return json::array({s.rho, s.u}); }

inline State state_from(const json& j, const char* path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(std::string(path) + ": expected [rho, u]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const RunConfig& c) {
  json j;
  j["params"] = {{"rho_bar", c.params.rho_bar}, {"a", c.params.a}};
  j["left"] = state_json(c.left);
  j["right"] = c.right ? state_json(*c.right) : json(nullptr);
  j["grid"] = {{"x_lo", c.grid.x_lo}, {"x_hi", c.grid.x_hi}, {"n_cells", c.grid.n_cells}};
  j["cfl"] = c.cfl;
  j["t_end"] = c.t_end;
  j["scheme"] = to_string(c.scheme);
  j["renorm"] = c.renorm ? json{{"period", c.renorm->period}, {"tol", c.renorm->tol}} : json(nullptr);
  j["snapshot_period"] = c.snapshot_period;
  j["window"] = {{"rho_lo", c.window.rho_lo},
                 {"rho_hi", c.window.rho_hi},
                 {"u_lo", c.window.u_lo},
                 {"u_hi", c.window.u_hi}};
  j["resolution"] = {{"nx", c.nx}, {"ny", c.ny}};
  j["eps_list"] = c.eps_list;
  return j;
}

inline Scheme scheme_from(const std::string& s) {
  if (s == "global_lf") return Scheme::GlobalLF;
  if (s == "rusanov") return Scheme::Rusanov;
  throw ConfigError("scheme: expected global_lf or rusanov, got '" + s + "'");
}

/// Missing keys keep their defaults; present keys must have the right shape.
inline RunConfig from_json(const json& j) {
  RunConfig c;
  try {
    if (j.contains("params")) {
      c.params.rho_bar = j["params"].value("rho_bar", c.params.rho_bar);
      c.params.a = j["params"].value("a", c.params.a);
    }
    if (j.contains("left")) c.left = state_from(j["left"], "left");
    if (j.contains("right") && !j["right"].is_null()) c.right = state_from(j["right"], "right");
    if (j.contains("grid")) {
      c.grid.x_lo = j["grid"].value("x_lo", c.grid.x_lo);
      c.grid.x_hi = j["grid"].value("x_hi", c.grid.x_hi);
      c.grid.n_cells = j["grid"].value("n_cells", c.grid.n_cells);
    }
    c.cfl = j.value("cfl", c.cfl);
    c.t_end = j.value("t_end", c.t_end);
    if (j.contains("scheme")) c.scheme = scheme_from(j["scheme"].get<std::string>());
    if (j.contains("renorm") && !j["renorm"].is_null())
      c.renorm = Renorm{j["renorm"].value("period", 100), j["renorm"].value("tol", 1e-7)};
    c.snapshot_period = j.value("snapshot_period", c.snapshot_period);
    if (j.contains("window")) {
      const json& w = j["window"];
      c.window = {w.value("rho_lo", c.window.rho_lo), w.value("rho_hi", c.window.rho_hi),
                  w.value("u_lo", c.window.u_lo), w.value("u_hi", c.window.u_hi)};
    }
    if (j.contains("resolution")) {
      c.nx = j["resolution"].value("nx", c.nx);
      c.ny = j["resolution"].value("ny", c.ny);
    }
    if (j.contains("eps_list")) c.eps_list = j["eps_list"].get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

/// Canonical text: keys sorted, numbers in shortest round-trip form.
inline std::string canonical(const RunConfig& c) { return to_json(c).dump(); }

/// FNV-1a over the canonical text and the subcommand name.
inline std::string config_hash(const RunConfig& c, const std::string& command) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : command + "\n" + canonical(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

inline std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// CSV with a leading '# config_hash=' comment line, header row and LF endings.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& hash,
            const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << "# config_hash=" << hash << '\n';
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace riemann_lab::io
