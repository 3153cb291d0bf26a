#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "core_model.hpp"

namespace riemann_lab {

struct Grid {
  double x_lo = -100.0;
  double x_hi = 100.0;
  int n_cells = 2000;

  double dx() const { return (x_hi - x_lo) / n_cells; }
  double center(int i) const { return x_lo + (i + 0.5) * dx(); }
};

inline void validate(const Grid& g) {
  if (g.n_cells < 3) throw ConfigError("grid needs at least 3 cells");
  if (!(g.x_hi > g.x_lo) || !std::isfinite(g.x_lo) || !std::isfinite(g.x_hi))
    throw ConfigError("grid needs x_lo < x_hi");
}

struct FvField {
  Grid grid;
  std::vector<double> rho;
  std::vector<double> m;
  double t = 0.0;
};

enum class Scheme { GlobalLF, Rusanov };

inline const char* to_string(Scheme s) { return s == Scheme::GlobalLF ? "global_lf" : "rusanov"; }

struct StepReport {
  double dt;
  double cfl_used;
  double max_abs_eig;
  Vec2 flux_left;   ///< flux entering through x_lo
  Vec2 flux_right;  ///< flux leaving through x_hi
};

inline double vacuum_floor(const Params& p) { return 1e-12 * p.rho_bar; }

inline FvField init_riemann(const Grid& g, const State& l, const State& r) {
  validate(g);
  FvField f{g, std::vector<double>(g.n_cells), std::vector<double>(g.n_cells), 0.0};
  for (int i = 0; i < g.n_cells; ++i) {
    const State& s = g.center(i) < 0.0 ? l : r;
    f.rho[i] = s.rho;
    f.m[i] = s.rho * s.u;
  }
  return f;
}

/// Physical flux of a cell; cells below the vacuum floor carry none.
inline Vec2 cell_flux(double rho, double m, const Params& p) {
  if (rho < vacuum_floor(p)) return {0.0, 0.0};
  return flux(State{rho, m / rho}, p);
}

inline double cell_speed(double rho, double m, const Params& p) {
  if (rho < vacuum_floor(p)) return 0.0;
  auto ev = eigenvalues(State{rho, m / rho}, p);
  return std::max(std::abs(ev.lambda_a), std::abs(ev.lambda_0));
}

inline double max_wave_speed(const FvField& f, const Params& p) {
  double lam = 0.0;
  for (std::size_t i = 0; i < f.rho.size(); ++i) lam = std::max(lam, cell_speed(f.rho[i], f.m[i], p));
  return lam;
}

/// One explicit step. Outflow ghost cells copy the boundary cells.
inline std::pair<FvField, StepReport> step(const FvField& f, const Params& p, double cfl,
                                           Scheme scheme, double dt_max = INFINITY) {
  if (!(cfl > 0.0 && cfl <= 0.5)) throw ConfigError("cfl must lie in (0, 1/2]");
  const int n = f.grid.n_cells;
  const double dx = f.grid.dx();
  double lam = max_wave_speed(f, p);
  if (!(lam > 0.0)) throw StagnantFieldError("all characteristic speeds vanish");
  double dt = std::min(cfl * dx / lam, dt_max);

  std::vector<Vec2> G(n + 2);
  std::vector<double> R(n + 2), M(n + 2);
  for (int i = 0; i < n; ++i) {
    R[i + 1] = f.rho[i];
    M[i + 1] = f.m[i];
    G[i + 1] = cell_flux(f.rho[i], f.m[i], p);
  }
  R[0] = R[1];
  M[0] = M[1];
  G[0] = G[1];
  R[n + 1] = R[n];
  M[n + 1] = M[n];
  G[n + 1] = G[n];

  FvField out{f.grid, std::vector<double>(n), std::vector<double>(n), f.t + dt};
  const double k = dt / dx;
  if (scheme == Scheme::GlobalLF) {
    for (int i = 1; i <= n; ++i) {
      out.rho[i - 1] = 0.5 * (R[i - 1] + R[i + 1]) - 0.5 * k * (G[i + 1][0] - G[i - 1][0]);
      out.m[i - 1] = 0.5 * (M[i - 1] + M[i + 1]) - 0.5 * k * (G[i + 1][1] - G[i - 1][1]);
    }
  } else {
    std::vector<double> speed(n + 2);
    for (int i = 0; i < n + 2; ++i) speed[i] = cell_speed(R[i], M[i], p);
    // interface j sits between padded cells j and j+1
    std::vector<Vec2> F(n + 1);
    for (int j = 0; j <= n; ++j) {
      double ll = std::max(speed[j], speed[j + 1]);
      F[j] = {0.5 * (G[j][0] + G[j + 1][0]) - 0.5 * ll * (R[j + 1] - R[j]),
              0.5 * (G[j][1] + G[j + 1][1]) - 0.5 * ll * (M[j + 1] - M[j])};
    }
    for (int i = 0; i < n; ++i) {
      out.rho[i] = R[i + 1] - k * (F[i + 1][0] - F[i][0]);
      out.m[i] = M[i + 1] - k * (F[i + 1][1] - F[i][1]);
    }
  }

  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(out.rho[i]) || !std::isfinite(out.m[i]) ||
        out.rho[i] < -vacuum_floor(p))
      throw BlowupDetected("non-finite or negative state at x = " +
                           std::to_string(f.grid.center(i)) + ", t = " + std::to_string(out.t));
  }
  return {std::move(out), StepReport{dt, lam * dt / dx, lam, G[1], G[n]}};
}

/// Every `period` steps, cells within `tol` of their neighbour average are replaced by it.
struct Renorm {
  int period = 100;
  double tol = 1e-7;
};

inline void apply_renorm(FvField& f, double tol) {
  const std::size_t n = f.rho.size();
  auto smooth = [&](std::vector<double>& v) {
    std::vector<double> src = v;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      double avg = 0.5 * (src[i - 1] + src[i + 1]);
      if (std::abs(src[i] - avg) < tol) v[i] = avg;
    }
  };
  smooth(f.rho);
  smooth(f.m);
}

struct RunOptions {
  double t_end = 5.0;
  double cfl = 0.45;
  Scheme scheme = Scheme::GlobalLF;
  std::optional<Renorm> renorm;
  int snapshot_period = 1000;  ///< steps between stored snapshots
  long max_steps = 5'000'000;
  double min_dt_fraction = 1e-10;  ///< of t_end; near-vacuum speeds for a < -1 shrink dt
};

struct Trajectory {
  std::vector<FvField> snapshots;  ///< first is the initial field, last is at t_end
  std::vector<StepReport> reports;
};

inline Trajectory run(const Grid& g, const State& l, const State& r, const Params& p,
                      const RunOptions& opt) {
  if (!(opt.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (opt.snapshot_period < 1) throw ConfigError("snapshot_period must be >= 1");
  Trajectory tr;
  FvField f = init_riemann(g, l, r);
  tr.snapshots.push_back(f);
  long n = 0;
  while (f.t < opt.t_end) {
    if (++n > opt.max_steps) throw StepSizeUnderflow("step budget exhausted");
    auto [next, rep] = step(f, p, opt.cfl, opt.scheme, opt.t_end - f.t);
    if (rep.dt < opt.min_dt_fraction * opt.t_end && next.t < opt.t_end) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "dt = %.3g at t = %.6g after %ld steps", rep.dt, f.t, n);
      throw StepSizeUnderflow(buf);
    }
    f = std::move(next);
    tr.reports.push_back(rep);
    if (opt.renorm && n % opt.renorm->period == 0) apply_renorm(f, opt.renorm->tol);
    if (n % opt.snapshot_period == 0 && f.t < opt.t_end) tr.snapshots.push_back(f);
    if (opt.t_end - f.t <= 1e-14 * opt.t_end) f.t = opt.t_end;
  }
  tr.snapshots.push_back(f);
  return tr;
}

inline double total(const std::vector<double>& v, double dx) {
  long double s = 0.0L;
  for (double x : v) s += x;
  return static_cast<double>(s) * dx;
}

struct SelfSimilarSample {
  double xi;
  double rho;
  std::optional<double> u;  ///< absent below the vacuum floor
};

inline std::vector<SelfSimilarSample> selfsimilar_extract(const FvField& f, const Params& p) {
  if (!(f.t > 0.0)) throw NotSelfSimilarYetError("field at t = 0 has no similarity profile");
  std::vector<SelfSimilarSample> out;
  out.reserve(f.rho.size());
  for (int i = 0; i < f.grid.n_cells; ++i) {
    SelfSimilarSample s{f.grid.center(i) / f.t, f.rho[i], std::nullopt};
    if (f.rho[i] >= vacuum_floor(p)) s.u = f.m[i] / f.rho[i];
    out.push_back(s);
  }
  return out;
}

struct DeltaDiagnostics {
  double peak_xi;
  std::vector<double> times;
  std::vector<double> mass_excess;
  double linear_fit_slope;
};

inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

/// Excess mass around the density peak, measured against the densities at the window
/// edges (left edge value to the left of the peak, right edge value to the right).
/// The window half-width is window_xi * t.
inline DeltaDiagnostics delta_diagnostics(const Trajectory& tr, double window_xi = 1.0) {
  std::vector<const FvField*> snaps;
  for (const auto& f : tr.snapshots)
    if (f.t > 0.0) snaps.push_back(&f);
  if (snaps.size() < 3) throw ConfigError("delta_diagnostics needs at least 3 snapshots after t = 0");

  DeltaDiagnostics d{};
  for (const FvField* f : snaps) {
    const Grid& g = f->grid;
    const int n = g.n_cells;
    int pk = static_cast<int>(std::max_element(f->rho.begin(), f->rho.end()) - f->rho.begin());
    double half = window_xi * f->t;
    int lo = std::max(0, static_cast<int>(std::floor((g.center(pk) - half - g.x_lo) / g.dx())));
    int hi = std::min(n - 1, static_cast<int>(std::ceil((g.center(pk) + half - g.x_lo) / g.dx())));
    double bl = f->rho[lo], br = f->rho[hi];
    if (f == snaps.back()) {
      if (!(f->rho[pk] > 1.5 * std::max(bl, br)))
        throw NoSingularityDetected("no density spike above the surrounding plateaus");
      d.peak_xi = g.center(pk) / f->t;
    }
    long double ex = 0.0L;
    for (int i = lo; i <= hi; ++i) ex += f->rho[i] - (i < pk ? bl : i > pk ? br : 0.5 * (bl + br));
    d.times.push_back(f->t);
    d.mass_excess.push_back(static_cast<double>(ex) * g.dx());
  }
  std::size_t h = d.times.size() / 2;
  std::vector<double> tx(d.times.begin() + h, d.times.end());
  std::vector<double> ty(d.mass_excess.begin() + h, d.mass_excess.end());
  if (tx.size() < 2) {
    tx = d.times;
    ty = d.mass_excess;
  }
  d.linear_fit_slope = least_squares_slope(tx, ty);
  return d;
}

}  // namespace riemann_lab
