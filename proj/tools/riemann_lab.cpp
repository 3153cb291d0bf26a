// riemann_lab: command-line front end.
//
// Exit codes: 0 success, 1 internal error, 2 usage error, 3 file I/O error, and
// 10 and up for library errors (see ErrorKind; README lists them).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "riemann_lab/gspt_blowup.hpp"
#include "riemann_lab/io.hpp"
#include "riemann_lab/llf_solver.hpp"
#include "riemann_lab/riemann_classifier.hpp"

namespace fs = std::filesystem;
using namespace riemann_lab;
using io::json;
using io::num;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned worker_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RIEMANN_LAB_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw ConfigError("RIEMANN_LAB_THREADS must be a positive integer");
    return static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return hw;
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Flag values; each is applied on top of the config file only when given.
struct Flags {
  std::string config;
  std::string out;
  bool json_out = false;
  double a = 0, rho_bar = 0, cfl = 0, t_end = 0, x_lo = 0, x_hi = 0, renorm_tol = 0;
  int cells = 0, nx = 0, ny = 0, snapshot_period = 0, renorm_period = 0;
  std::vector<double> left, right, window, eps;
  std::string scheme;
  std::map<std::string, std::vector<CLI::Option*>> opts;  ///< one entry per subcommand

  bool given(const std::string& k) const {
    auto it = opts.find(k);
    if (it == opts.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(), [](auto* o) { return o->count() > 0; });
  }
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("-c,--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("-o,--out", f.out, "output directory");
  f.opts["a"].push_back(sub->add_option("--a", f.a, "mobility exponent (nonzero)"));
  f.opts["rho_bar"].push_back(sub->add_option("--rho-bar", f.rho_bar, "critical density"));
  f.opts["left"].push_back(sub->add_option("--left", f.left, "left state rho,u")->expected(2)->delimiter(','));
  f.opts["right"].push_back(sub->add_option("--right", f.right, "right state rho,u")->expected(2)->delimiter(','));
}

void add_simulation(CLI::App* sub, Flags& f) {
  f.opts["cells"].push_back(sub->add_option("--cells", f.cells, "number of cells"));
  f.opts["x_lo"].push_back(sub->add_option("--x-lo", f.x_lo, "left end of the domain"));
  f.opts["x_hi"].push_back(sub->add_option("--x-hi", f.x_hi, "right end of the domain"));
  f.opts["cfl"].push_back(sub->add_option("--cfl", f.cfl, "CFL number in (0, 1/2]"));
  f.opts["t_end"].push_back(sub->add_option("--t-end", f.t_end, "final time"));
  f.opts["scheme"].push_back(sub->add_option("--scheme", f.scheme, "global_lf or rusanov"));
  f.opts["snapshot_period"].push_back(sub->add_option("--snapshot-period", f.snapshot_period, "steps between snapshots"));
  f.opts["renorm_period"].push_back(sub->add_option("--renorm-period", f.renorm_period, "renormalize every N steps"));
  f.opts["renorm_tol"].push_back(sub->add_option("--renorm-tol", f.renorm_tol, "renormalization tolerance"));
}

void add_window(CLI::App* sub, Flags& f) {
  f.opts["window"].push_back(sub->add_option("--window", f.window, "rho_lo,rho_hi,u_lo,u_hi")->expected(4)->delimiter(','));
  f.opts["nx"].push_back(sub->add_option("--nx", f.nx, "raster columns (rho)"));
  f.opts["ny"].push_back(sub->add_option("--ny", f.ny, "raster rows (u)"));
}

template <class T>
void apply(const Flags& f, const char* key, T& dst, const T& src) {
  if (f.given(key)) dst = src;
}

io::RunConfig resolve(const Flags& f) {
  io::RunConfig c = f.config.empty() ? io::RunConfig{} : io::load_config(f.config);
  apply(f, "a", c.params.a, f.a);
  apply(f, "rho_bar", c.params.rho_bar, f.rho_bar);
  if (f.given("left")) c.left = {f.left[0], f.left[1]};
  if (f.given("right")) c.right = State{f.right[0], f.right[1]};
  apply(f, "cells", c.grid.n_cells, f.cells);
  apply(f, "x_lo", c.grid.x_lo, f.x_lo);
  apply(f, "x_hi", c.grid.x_hi, f.x_hi);
  apply(f, "cfl", c.cfl, f.cfl);
  apply(f, "t_end", c.t_end, f.t_end);
  if (f.given("scheme")) c.scheme = io::scheme_from(f.scheme);
  apply(f, "snapshot_period", c.snapshot_period, f.snapshot_period);
  if (f.given("renorm_period") || f.given("renorm_tol")) {
    Renorm r = c.renorm.value_or(Renorm{});
    if (f.given("renorm_period")) r.period = f.renorm_period;
    if (f.given("renorm_tol")) r.tol = f.renorm_tol;
    c.renorm = r;
  }
  if (f.given("window"))
    c.window = {f.window[0], f.window[1], f.window[2], f.window[3]};
  apply(f, "nx", c.nx, f.nx);
  apply(f, "ny", c.ny, f.ny);
  if (f.given("eps")) c.eps_list = f.eps;
  io::validate(c);
  return c;
}

State require_right(const io::RunConfig& c) {
  if (!c.right) throw ConfigError("right: this command needs a right state");
  return *c.right;
}

// Output directory plus the bookkeeping every command shares.
struct Bundle {
  std::string command;
  io::RunConfig config;
  std::string hash;
  fs::path dir;
  bool enabled;
  json meta;
  json findings = json::array();
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  Bundle(std::string cmd, const io::RunConfig& c, const std::string& out)
      : command(std::move(cmd)), config(c), hash(io::config_hash(c, command)), dir(out),
        enabled(!out.empty()) {
    meta["command"] = command;
    meta["version"] = io::kVersion;
    meta["config_hash"] = hash;
    meta["started"] = utc_now();
    meta["files"] = json::array();
    if (!enabled) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoFailure("cannot create " + dir.string() + ": " + ec.message());
    json cj = io::to_json(c);
    cj["config_hash"] = hash;
    write_json("config.json", cj);
  }

  fs::path file(const std::string& name) {
    meta["files"].push_back(name);
    return dir / name;
  }

  io::CsvWriter csv(const std::string& name, const std::vector<std::string>& header) {
    try {
      return io::CsvWriter(file(name), hash, header);
    } catch (const std::runtime_error& e) {
      throw IoFailure(e.what());
    }
  }

  void write_json(const std::string& name, const json& j) {
    try {
      io::write_json(file(name), j);
    } catch (const std::runtime_error& e) {
      throw IoFailure(e.what());
    }
  }

  void write_text(const std::string& name, const std::string& text) {
    try {
      io::write_text(file(name), text);
    } catch (const std::runtime_error& e) {
      throw IoFailure(e.what());
    }
  }

  void finding(const Error& e) {
    findings.push_back({{"kind", error_name(e.kind())}, {"exit_code", static_cast<int>(e.kind())},
                        {"message", e.what()}});
  }

  int finish() {
    meta["finished"] = utc_now();
    meta["elapsed_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    meta["findings"] = findings;
    if (enabled) write_json("meta.json", meta);
    return findings.empty() ? 0 : findings.front()["exit_code"].get<int>();
  }
};

json state_j(const State& s) { return {{"rho", s.rho}, {"u", s.u}}; }

json wave_j(const Wave& w) {
  json j{{"type", wave_name(w)}, {"xi_lo", left_speed(w)}, {"xi_hi", right_speed(w)}};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (!std::is_same_v<T, VacuumSegment>) {
          j["left"] = state_j(x.left);
          j["right"] = state_j(x.right);
        }
        if constexpr (std::is_same_v<T, DeltaShock>) {
          j["weight_rate"] = x.weight_rate;
          j["u_delta"] = x.u_delta;
        }
      },
      w);
  return j;
}

// ---------------------------------------------------------------------------

int cmd_classify(const Flags& f) {
  io::RunConfig c = resolve(f);
  State r = require_right(c);
  Bundle b("classify", c, f.out);
  CaseId id = classify_case(c.left, c.params);
  RiemannAnalysis an = analyze_riemann(c.left, r, c.params);

  json res{{"case", id.index}, {"region", an.label.str()}, {"note", an.note}};
  res["waves"] = json::array();
  res["intermediate_states"] = json::array();
  if (an.solution) {
    for (const Wave& w : an.solution->waves) res["waves"].push_back(wave_j(w));
    for (const State& s : an.solution->intermediate_states) res["intermediate_states"].push_back(state_j(s));
  }
  res["solved"] = an.solution.has_value();
  b.meta["result"] = res;

  if (f.json_out) {
    std::cout << res.dump(2) << "\n";
  } else {
    std::cout << "case " << id.index << "\nregion " << an.label.str() << "\n";
    if (!an.solution) std::cout << "no wave sequence: " << an.note << "\n";
    for (const auto& w : res["waves"])
      std::cout << "  " << w["type"].get<std::string>() << "  xi in [" << num(w["xi_lo"])
                << ", " << num(w["xi_hi"]) << "]\n";
    for (const auto& s : res["intermediate_states"])
      std::cout << "  state (" << num(s["rho"]) << ", " << num(s["u"]) << ")\n";
  }
  if (b.enabled && an.solution) {
    auto csv = b.csv("waves.csv", {"index", "type", "xi_lo", "xi_hi", "rho_left", "u_left",
                                   "rho_right", "u_right"});
    int k = 0;
    for (const auto& w : res["waves"]) {
      auto st = [&](const char* side, const char* q) {
        return w.contains(side) ? num(w[side][q]) : std::string("nan");
      };
      csv.row({std::to_string(k++), w["type"].get<std::string>(), num(w["xi_lo"]), num(w["xi_hi"]),
               st("left", "rho"), st("left", "u"), st("right", "rho"), st("right", "u")});
    }
  }
  return b.finish();
}

// Overlay curves through the left state, clipped to the window.
void write_curves(Bundle& b, const io::RunConfig& c) {
  auto csv = b.csv("curves.csv", {"curve", "rho", "u"});
  const Window& w = c.window;
  const State& l = c.left;
  const int n = 600;
  auto emit = [&](const char* name, auto&& u_of) {
    for (int i = 0; i <= n; ++i) {
      double rho = w.rho_lo + (w.rho_hi - w.rho_lo) * i / n;
      if (!(rho > 0.0)) continue;
      try {
        double u = u_of(rho);
        if (std::isfinite(u) && u >= w.u_lo && u <= w.u_hi) csv.row({name, num(rho), num(u)});
      } catch (const Error&) {
      }
    }
  };
  emit("u_left", [&](double) { return l.u; });
  if (critical_side(l.rho, c.params) == 0) {
    for (int i = 0; i <= n; ++i) {
      double u = w.u_lo + (w.u_hi - w.u_lo) * i / n;
      csv.row({"C0_vertical", num(l.rho), num(u)});
    }
    return;
  }
  ContactBranches cb = contact0_branches(l, c.params);
  emit("C0_main", [&](double rho) { return cb.main(rho); });
  emit("C0_mirror", [&](double rho) { return cb.mirror(rho); });
  emit("C0_limit", [&](double rho) { return cb.limit(rho); });
  emit("asymptote", [&](double) { return cb.asymptote; });
}

int label_code(const RegionLabel& lab) { return static_cast<int>(lab.kind); }

int cmd_regions(const Flags& f) {
  io::RunConfig c = resolve(f);
  Bundle b("regions", c, f.out);
  classify_case(c.left, c.params);
  unsigned threads = worker_threads();
  RegionGrid g = rasterize_regions(c.left, c.params, c.window, c.nx, c.ny, threads);

  std::map<std::string, long> counts;
  for (const auto& lab : g.labels) ++counts[lab.str()];
  json legend = json::object();
  for (int k = 0; k <= static_cast<int>(RegionKind::Degenerate); ++k)
    legend[std::to_string(k)] = to_string(static_cast<RegionKind>(k));
  b.meta["label_counts"] = counts;
  b.meta["code_legend"] = legend;
  b.meta["threads"] = threads;
  b.meta["case"] = classify_case(c.left, c.params).index;

  if (!f.out.empty()) {
    auto csv = b.csv("regions.csv", {"rho", "u", "label", "code"});
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        csv.row({num(g.rho_center(i)), num(g.u_center(j)), g.at(i, j).str(),
                 std::to_string(label_code(g.at(i, j)))});
    write_curves(b, c);
    b.write_text("plot.gp",
                 "set datafile separator ','\n"
                 "set xlabel 'rho'\nset ylabel 'u'\n"
                 "set key outside\n"
                 "set palette maxcolors 11\nset cbrange [-0.5:10.5]\n"
                 "plot 'regions.csv' skip 2 using 1:2:4 with image notitle, \\\n"
                 "  for [c in 'u_left C0_main C0_mirror C0_limit asymptote C0_vertical'] \\\n"
                 "  'curves.csv' skip 2 using 2:(strcol(1) eq c ? $3 : NaN) with lines lw 2 title c\n");
  }
  for (const auto& [k, v] : counts) std::cout << k << " " << v << "\n";
  return b.finish();
}

int cmd_simulate(const Flags& f) {
  io::RunConfig c = resolve(f);
  State r = require_right(c);
  Bundle b("simulate", c, f.out);
  RunOptions opt;
  opt.t_end = c.t_end;
  opt.cfl = c.cfl;
  opt.scheme = c.scheme;
  opt.renorm = c.renorm;
  opt.snapshot_period = c.snapshot_period;
  b.meta["renorm"] = c.renorm ? json{{"period", c.renorm->period}, {"tol", c.renorm->tol}} : json("off");

  Trajectory tr = run(c.grid, c.left, r, c.params, opt);
  const FvField& last = tr.snapshots.back();
  b.meta["steps"] = tr.reports.size();
  b.meta["snapshots"] = tr.snapshots.size();
  b.meta["max_rho"] = *std::max_element(last.rho.begin(), last.rho.end());

  if (b.enabled) {
    auto csv = b.csv("snapshots.csv", {"t", "x", "xi", "rho", "u"});
    for (const FvField& s : tr.snapshots) {
      if (!(s.t > 0.0)) continue;
      for (const auto& pt : selfsimilar_extract(s, c.params))
        csv.row({num(s.t), num(pt.xi * s.t), num(pt.xi), num(pt.rho), pt.u ? num(*pt.u) : "nan"});
    }
  }

  RiemannAnalysis an = analyze_riemann(c.left, r, c.params);
  b.meta["region"] = an.label.str();
  if (an.solution && b.enabled) {
    auto csv = b.csv("reference.csv", {"xi", "rho", "u", "delta"});
    for (int i = 0; i < last.grid.n_cells; ++i) {
      double xi = last.grid.center(i) / last.t;
      PointValue v = evaluate_selfsimilar(*an.solution, xi);
      csv.row({num(xi), num(v.state.rho), v.vacuum ? "nan" : num(v.state.u), v.delta ? "1" : "0"});
    }
  }
  try {
    DeltaDiagnostics d = delta_diagnostics(tr);
    json dj{{"peak_xi", d.peak_xi}, {"linear_fit_slope", d.linear_fit_slope}};
    try {
      DeltaShock ds = make_delta_shock(c.left, r, c.params);
      dj["reference_speed"] = ds.speed;
      dj["reference_weight_rate"] = ds.weight_rate;
    } catch (const Error& e) {
      dj["reference"] = e.what();
    }
    b.meta["delta"] = dj;
    if (b.enabled) {
      auto csv = b.csv("delta.csv", {"t", "mass_excess"});
      for (std::size_t i = 0; i < d.times.size(); ++i) csv.row({num(d.times[i]), num(d.mass_excess[i])});
    }
    std::cout << "delta peak xi " << num(d.peak_xi) << ", mass slope " << num(d.linear_fit_slope) << "\n";
  } catch (const NoSingularityDetected&) {
    b.meta["delta"] = nullptr;
  }
  if (b.enabled)
    b.write_text("plot.gp",
                 "set datafile separator ','\n"
                 "set xlabel 'x/t'\nset ylabel 'rho'\n"
                 "stats 'snapshots.csv' skip 2 using 1 nooutput\n"
                 "tmax = STATS_max\n"
                 "plot 'snapshots.csv' skip 2 using 3:($1 == tmax ? $4 : NaN) with lines title 'numerical', \\\n"
                 "  'reference.csv' skip 2 using 1:2 with lines dt 2 title 'exact'\n");
  std::cout << "region " << an.label.str() << ", " << tr.reports.size() << " steps to t = "
            << num(last.t) << "\n";
  return b.finish();
}

int cmd_gspt(const Flags& f) {
  io::RunConfig c = resolve(f);
  State r = require_right(c);
  Bundle b("gspt", c, f.out);
  const Params& p = c.params;

  json spectra = json::array();
  std::optional<io::CsvWriter> scsv;
  if (b.enabled) scsv.emplace(b.csv("spectra.csv", {"point", "direction", "eigenvalue", "expected"}));
  for (FixedPoint fp : {FixedPoint::NegA_plus1, FixedPoint::NegA_minus1, FixedPoint::PosA_plus1,
                        FixedPoint::PosA_minus1}) {
    try {
      SpectrumReport rep = fixed_point_spectrum(fp, p);
      spectra.push_back({{"point", to_string(fp)}, {"max_error", rep.max_error}});
      if (scsv)
        for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i)
          scsv->row({to_string(fp), rep.directions[i], num(rep.eigenvalues[i]), num(rep.expected[i])});
    } catch (const Error& e) {
      b.finding(e);
    }
  }
  scsv.reset();
  b.meta["spectra"] = spectra;

  try {
    DeltaShock ds = make_delta_shock(c.left, r, p);
    b.meta["delta_speed"] = ds.speed;
    std::optional<io::CsvWriter> icsv;
    if (b.enabled) icsv.emplace(b.csv("invariant.csv", {"side", "rho", "u", "normal_rate", "on_curve"}));
    json inv = json::array();
    for (auto [side, anchor] : {std::pair{Side::Left, c.left}, std::pair{Side::Right, r}}) {
      InvariantRegionReport rep = check_invariant_region(side, anchor, ds.speed, p);
      inv.push_back({{"side", to_string(side)}, {"violations", rep.violations},
                     {"tangent", rep.tangent}, {"worst", rep.worst}});
      if (icsv)
        for (const auto& s : rep.samples)
          icsv->row({to_string(side), num(s.at.rho), num(s.at.u), num(s.normal_rate), s.on_curve ? "1" : "0"});
      try {
        require_invariant(rep);
      } catch (const Error& e) {
        b.finding(e);
      }
    }
    b.meta["invariant_regions"] = inv;

    try {
      auto fam = viscous_profile_family(c.left, r, p, c.eps_list);
      json pj = json::array();
      std::optional<io::CsvWriter> pcsv;
      if (b.enabled) pcsv.emplace(b.csv("profiles.csv", {"eps", "xi", "rho", "u"}));
      for (const auto& pr : fam) {
        pj.push_back({{"eps", pr.eps}, {"max_rho", pr.diag.max_rho}, {"peak_xi", pr.diag.peak_xi},
                      {"mass_excess", pr.diag.mass_excess}, {"boundary_error", pr.diag.boundary_error},
                      {"inner_sign_max", pr.diag.inner_sign_max}, {"iterations", pr.diag.iterations}});
        if (pcsv)
          for (std::size_t i = 0; i < pr.xi.size(); ++i)
            pcsv->row({num(pr.eps), num(pr.xi[i]), num(pr.rho[i]), num(pr.at(i).u)});
      }
      b.meta["profiles"] = pj;
    } catch (const Error& e) {
      b.finding(e);
    }
  } catch (const Error& e) {
    b.finding(e);
  }

  try {
    SphereOrbit orb = heteroclinic_on_sphere(p);
    b.meta["orbit"] = {{"from", orb.points.front()[1]}, {"to", orb.points.back()[1]},
                       {"max_sphere_defect", orb.max_sphere_defect}, {"monotone", orb.monotone}};
    if (b.enabled) {
      auto csv = b.csv("orbit.csv", {"tau", "rho_bar0", "u_bar0", "eps_bar"});
      for (std::size_t i = 0; i < orb.tau.size(); ++i)
        csv.row({num(orb.tau[i]), num(orb.points[i][0]), num(orb.points[i][1]), num(orb.points[i][2])});
    }
  } catch (const Error& e) {
    b.finding(e);
  }

  if (b.enabled)
    b.write_text("plot.gp",
                 "set datafile separator ','\n"
                 "set multiplot layout 1,2\n"
                 "set xlabel 'xi'\nset ylabel 'rho'\nset logscale y\n"
                 "plot for [e in '" + [&] {
                   std::string s;
                   for (double e : c.eps_list) s += (s.empty() ? "" : " ") + num(e);
                   return s;
                 }() + "'] 'profiles.csv' skip 2 using 2:($1 == real(e) ? $3 : NaN) with lines title 'eps='.e\n"
                 "unset logscale y\n"
                 "set xlabel 'rho_bar0'\nset ylabel 'u_bar0'\n"
                 "plot 'orbit.csv' skip 2 using 2:3 with lines title 'orbit'\n"
                 "unset multiplot\n");
  int rc = b.finish();
  std::cout << b.meta.dump(2) << "\n";
  return rc;
}

int cmd_sweep(const Flags& f) {
  io::RunConfig c = resolve(f);
  Bundle b("sweep", c, f.out);
  struct Item {
    double a, rho, u;
    int case_id = 0;
    std::map<std::string, long> counts;
    std::string error;
  };
  std::vector<Item> items;
  for (double a : {-1.5, -1.0, -0.5, 0.5})
    for (double u : {-4.0, 4.0})
      for (double rho : {3.0, 5.0, 8.0}) items.push_back({a, rho, u, 0, {}, {}});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < items.size();) {
      Item& it = items[k];
      Params p{c.params.rho_bar, it.a};
      State l{it.rho, it.u};
      try {
        it.case_id = classify_case(l, p).index;
        RegionGrid g = rasterize_regions(l, p, c.window, c.nx, c.ny, 1);
        for (const auto& lab : g.labels) ++it.counts[lab.str()];
      } catch (const Error& e) {
        it.error = e.what();
      }
    }
  };
  unsigned threads = std::min<unsigned>(worker_threads(), static_cast<unsigned>(items.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  b.meta["threads"] = threads;

  std::optional<io::CsvWriter> csv;
  if (b.enabled) csv.emplace(b.csv("sweep.csv", {"case", "a", "rho_left", "u_left", "label", "cells"}));
  for (const Item& it : items) {
    std::cout << "case " << it.case_id << " a=" << num(it.a) << " L=(" << num(it.rho) << ","
              << num(it.u) << "):";
    if (!it.error.empty()) std::cout << " error " << it.error;
    for (const auto& [k, v] : it.counts) {
      std::cout << " " << k << "=" << v;
      if (csv) csv->row({std::to_string(it.case_id), num(it.a), num(it.rho), num(it.u), k, std::to_string(v)});
    }
    std::cout << "\n";
  }
  return b.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemann problems for a two-component model with density-dependent mobility"};
  app.require_subcommand(1);
  Flags f;

  auto* classify = app.add_subcommand("classify", "case, region and wave sequence for one pair");
  add_common(classify, f);
  classify->add_flag("--json", f.json_out, "print machine-readable JSON");

  auto* regions = app.add_subcommand("regions", "raster of region labels around a left state");
  add_common(regions, f);
  add_window(regions, f);

  auto* simulate = app.add_subcommand("simulate", "finite-volume run from Riemann data");
  add_common(simulate, f);
  add_simulation(simulate, f);

  auto* gspt = app.add_subcommand("gspt", "spectra, invariant regions, orbit and viscous profiles");
  add_common(gspt, f);
  f.opts["eps"].push_back(gspt->add_option("--eps", f.eps, "viscosity list")->delimiter(','));

  auto* sweep = app.add_subcommand("sweep", "region counts over the 24-case parameter menu");
  add_common(sweep, f);
  add_window(sweep, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (classify->parsed()) return cmd_classify(f);
    if (regions->parsed()) return cmd_regions(f);
    if (simulate->parsed()) return cmd_simulate(f);
    if (gspt->parsed()) return cmd_gspt(f);
    if (sweep->parsed()) return cmd_sweep(f);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const IoFailure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
