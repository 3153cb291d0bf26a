#include <gtest/gtest.h>

#include <random>

#include "riemann_lab/delta_shock.hpp"
#include "riemann_lab/llf_solver.hpp"

using namespace riemann_lab;

TEST(Llf, InitialSplitAndMass) {
  Grid g{-10.0, 10.0, 200};
  State l{3, 2}, r{7, -1};
  auto f = init_riemann(g, l, r);
  EXPECT_EQ(f.rho[99], 3.0);
  EXPECT_EQ(f.rho[100], 7.0);
  EXPECT_EQ(f.m[100], -7.0);
  EXPECT_NEAR(total(f.rho, g.dx()), 100.0, 1e-12);
  EXPECT_THROW(init_riemann(Grid{0.0, 1.0, 2}, l, r), ConfigError);
  EXPECT_THROW(init_riemann(Grid{1.0, 0.0, 10}, l, r), ConfigError);
}

TEST(Llf, MaxWaveSpeed) {
  Params p{5.0, -1.5};
  auto f = init_riemann(Grid{-1, 1, 10}, State{5, 4}, State{5, 4});
  EXPECT_DOUBLE_EQ(max_wave_speed(f, p), 6.0);
}

TEST(Llf, ConstantFieldIsStationary) {
  Params p{5.0, -0.5};
  auto f = init_riemann(Grid{-1, 1, 50}, State{2, 1.5}, State{2, 1.5});
  for (Scheme s : {Scheme::GlobalLF, Scheme::Rusanov}) {
    auto [g, rep] = step(f, p, 0.4, s);
    EXPECT_NEAR(rep.cfl_used, 0.4, 1e-14);
    for (int i = 0; i < 50; ++i) {
      EXPECT_DOUBLE_EQ(g.rho[i], 2.0);
      EXPECT_DOUBLE_EQ(g.m[i], 3.0);
    }
  }
}

TEST(Llf, StepErrors) {
  Params p{5.0, -1.5};
  auto f = init_riemann(Grid{-1, 1, 20}, State{3, 1}, State{4, -1});
  EXPECT_THROW(step(f, p, 0.6, Scheme::GlobalLF), ConfigError);
  EXPECT_THROW(step(f, p, 0.0, Scheme::GlobalLF), ConfigError);
  auto still = init_riemann(Grid{-1, 1, 20}, State{3, 0}, State{4, 0});
  EXPECT_THROW(step(still, p, 0.4, Scheme::GlobalLF), StagnantFieldError);
  EXPECT_THROW(selfsimilar_extract(f, p), NotSelfSimilarYetError);
}

TEST(Llf, ConservationUpToBoundaryFluxes) {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> dr(0.5, 10.0), du(-5.0, 5.0);
  for (Scheme s : {Scheme::GlobalLF, Scheme::Rusanov}) {
    Params p{5.0, s == Scheme::GlobalLF ? -1.5 : 0.5};
    auto f = init_riemann(Grid{-5, 5, 300}, State{dr(rng), du(rng)}, State{dr(rng), du(rng)});
    for (int n = 0; n < 100; ++n) {
      auto [g, rep] = step(f, p, 0.45, s);
      double d_rho = total(g.rho, g.grid.dx()) - total(f.rho, f.grid.dx());
      double d_m = total(g.m, g.grid.dx()) - total(f.m, f.grid.dx());
      double scale = 1.0 + total(f.rho, f.grid.dx()) + std::abs(total(f.m, f.grid.dx()));
      EXPECT_NEAR(d_rho, rep.dt * (rep.flux_left[0] - rep.flux_right[0]), 1e-13 * scale);
      EXPECT_NEAR(d_m, rep.dt * (rep.flux_left[1] - rep.flux_right[1]), 1e-13 * scale);
      f = std::move(g);
    }
  }
}

TEST(Llf, ReflectionSymmetry) {
  // (rho, m)(x) -> (rho, -m)(-x) maps solutions to solutions
  Params p{5.0, -1.5};
  Grid g{-10, 10, 400};
  State l{3, 3}, r{9, -9};
  RunOptions o;
  o.t_end = 0.5;
  for (Scheme s : {Scheme::GlobalLF, Scheme::Rusanov}) {
    o.scheme = s;
    auto a = run(g, l, r, p, o).snapshots.back();
    auto b = run(g, State{r.rho, -r.u}, State{l.rho, -l.u}, p, o).snapshots.back();
    ASSERT_EQ(a.t, b.t);
    for (int i = 0; i < g.n_cells; ++i) {
      EXPECT_NEAR(a.rho[i], b.rho[g.n_cells - 1 - i], 1e-11);
      EXPECT_NEAR(a.m[i], -b.m[g.n_cells - 1 - i], 1e-11);
    }
  }
}

TEST(Llf, RunHitsEndTimeAndKeepsSnapshots) {
  Params p{5.0, -1.5};
  RunOptions o;
  o.t_end = 0.3;
  o.snapshot_period = 5;
  auto tr = run(Grid{-5, 5, 100}, State{3, 1}, State{4, -1}, p, o);
  EXPECT_EQ(tr.snapshots.front().t, 0.0);
  EXPECT_EQ(tr.snapshots.back().t, 0.3);
  EXPECT_GE(tr.snapshots.size(), 2 + tr.reports.size() / 5 - 1);
  for (const auto& r : tr.reports) EXPECT_LE(r.cfl_used, 0.45 + 1e-14);
  o.t_end = -1;
  EXPECT_THROW(run(Grid{-5, 5, 100}, State{3, 1}, State{4, -1}, p, o), ConfigError);
}

TEST(Llf, RenormAveragesSmallWiggles) {
  FvField f{Grid{0, 1, 5}, {1, 1 + 1e-9, 1, 1 + 1e-3, 1}, {0, 0, 0, 0, 0}, 0.0};
  apply_renorm(f, 1e-7);
  EXPECT_EQ(f.rho[1], 1.0);
  EXPECT_EQ(f.rho[3], 1.0 + 1e-3);
  EXPECT_EQ(f.rho[0], 1.0);
}

TEST(Llf, SelfSimilarExtractHonoursVacuumFloor) {
  Params p{5.0, 0.5};
  FvField f{Grid{-1, 1, 4}, {1, 1e-14, 2, 3}, {1, 1e-14, 2, 3}, 2.0};
  auto s = selfsimilar_extract(f, p);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_DOUBLE_EQ(s[0].xi, -0.375);
  EXPECT_TRUE(s[0].u.has_value());
  EXPECT_FALSE(s[1].u.has_value());
}

TEST(Llf, DeltaMassGrowsAtTheWeightRate) {
  Params p{5.0, -1.5};
  State l{3, 3}, r{9, -9};
  RunOptions o;
  o.t_end = 4.0;
  o.snapshot_period = 200;
  auto tr = run(Grid{-60, 60, 1500}, l, r, p, o);
  auto dd = delta_diagnostics(tr);
  auto ds = make_delta_shock(l, r, p);
  EXPECT_NEAR(dd.peak_xi, ds.speed, 0.1);
  EXPECT_NEAR(dd.linear_fit_slope / ds.weight_rate, 1.0, 0.05);
}

TEST(Llf, NoSpikeForExpansiveData) {
  Params p{5.0, -1.5};
  RunOptions o;
  o.t_end = 1.0;
  o.snapshot_period = 20;
  auto tr = run(Grid{-20, 20, 400}, State{3, -2}, State{3, 2}, p, o);
  EXPECT_THROW(delta_diagnostics(tr), NoSingularityDetected);
}

TEST(Llf, CollapsingStepIsReported) {
  // near-vacuum cells carry speeds like rho^a for a < -1
  Params p{5.0, -1.5};
  RunOptions o;
  o.t_end = 1.0;
  o.scheme = Scheme::Rusanov;
  o.min_dt_fraction = 1e-4;
  EXPECT_THROW(run(Grid{-10, 10, 400}, State{3, 3}, State{6, -2}, p, o), StepSizeUnderflow);
}
