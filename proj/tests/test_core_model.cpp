#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "riemann_lab/core_model.hpp"

using namespace riemann_lab;

namespace {

using cd = std::complex<double>;

// Conserved flux written from scratch in (rho, m), for complex-step differentiation.
std::array<cd, 2> flux_c(cd rho, cd m, const Params& p) {
  cd u = m / rho;
  cd f1 = m * (1.0 - std::pow(rho / p.rho_bar, p.a));
  return {f1, u * f1};
}

Mat2 jacobian_oracle(const State& s, const Params& p) {
  const double h = 1e-30;
  Mat2 J{};
  double rho = s.rho, m = s.rho * s.u;
  auto d0 = flux_c(cd(rho, h), cd(m, 0.0), p);
  auto d1 = flux_c(cd(rho, 0.0), cd(m, h), p);
  for (int i = 0; i < 2; ++i) {
    J[i][0] = d0[i].imag() / h;
    J[i][1] = d1[i].imag() / h;
  }
  return J;
}

}  // namespace

TEST(CoreModel, JacobianMatchesComplexStep) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dr(0.1, 12.0), du(-8.0, 8.0);
  for (double a : {-2.5, -1.5, -1.0, -0.5, 0.5, 2.0}) {
    Params p{5.0, a};
    for (int k = 0; k < 200; ++k) {
      State s{dr(rng), du(rng)};
      Mat2 J = jacobian(s, p), O = jacobian_oracle(s, p);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          EXPECT_NEAR(J[i][j], O[i][j], 1e-11 * (1.0 + std::abs(O[i][j])));
    }
  }
}

TEST(CoreModel, EigenvaluesAreTraceAndDeterminant) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dr(0.1, 12.0), du(-8.0, 8.0);
  for (double a : {-1.7, -0.3, 0.8}) {
    Params p{4.0, a};
    for (int k = 0; k < 200; ++k) {
      State s{dr(rng), du(rng)};
      Mat2 J = jacobian(s, p);
      auto ev = eigenvalues(s, p);
      double tr = J[0][0] + J[1][1], det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
      double scale = 1.0 + tr * tr;
      EXPECT_NEAR(ev.lambda_a + ev.lambda_0, tr, 1e-12 * scale);
      EXPECT_NEAR(ev.lambda_a * ev.lambda_0, det, 1e-11 * scale);
    }
  }
}

TEST(CoreModel, EigenvectorsAndLinearDegeneracy) {
  Params p{5.0, -1.5};
  for (State s : {State{3, 2}, State{7, -4}, State{0.5, 1}}) {
    auto es = eigenstructure(s, p);
    EXPECT_NEAR(es.gnl_0, 0.0, 1e-12 * (1.0 + std::abs(es.lambda_0)));
    // r_0 in (rho, u) maps to J (rho, m) coordinates: d(rho,m) = (dr, u dr + rho du)
    Mat2 J = jacobian(s, p);
    Vec2 v{es.r_0[0], s.u * es.r_0[0] + s.rho * es.r_0[1]};
    for (int i = 0; i < 2; ++i)
      EXPECT_NEAR(J[i][0] * v[0] + J[i][1] * v[1], es.lambda_0 * v[i], 1e-10 * (1 + std::abs(v[i])));
  }
}

TEST(CoreModel, FluxIsOddInVelocityForMass) {
  Params p{5.0, -0.7};
  for (State s : {State{1, 2}, State{6, 0.3}, State{4.9, 9}}) {
    auto f = flux(s, p), g = flux(State{s.rho, -s.u}, p);
    EXPECT_DOUBLE_EQ(f[0], -g[0]);
    EXPECT_DOUBLE_EQ(f[1], g[1]);
  }
}

TEST(CoreModel, CriticalDensityValues) {
  Params p{5.0, -1.5};
  EXPECT_DOUBLE_EQ(lambda_a(State{5, 4}, p), 6.0);
  EXPECT_DOUBLE_EQ(lambda_0(State{5, 4}, p), 0.0);
  auto rep = classify_degeneracy(State{5, 4}, p);
  EXPECT_FALSE(rep.strictly_hyperbolic);
  EXPECT_TRUE(rep.has(Locus::lambda0_zero));
}

TEST(CoreModel, DegeneracyLoci) {
  Params p{5.0, 0.5};
  double rz = lambda_a_zero_density(p);
  EXPECT_NEAR(lambda_a(State{rz, 3.0}, p), 0.0, 1e-12);
  EXPECT_TRUE(classify_degeneracy(State{rz, 3.0}, p).has(Locus::lambdaa_zero));
  EXPECT_TRUE(classify_degeneracy(State{0.0, 3.0}, p).has(Locus::equal_eigenvalues));
  EXPECT_TRUE(classify_degeneracy(State{2.0, 0.0}, p).has(Locus::full_degeneracy));
  EXPECT_TRUE(classify_degeneracy(State{2.0, 1.0}, p).strictly_hyperbolic);
  // a <= -1 has no lambda_a zero
  EXPECT_FALSE(classify_degeneracy(State{2.0, 1.0}, Params{5.0, -1.5}).has(Locus::lambdaa_zero));
}

TEST(CoreModel, VacuumBehaviour) {
  EXPECT_THROW(eigenvalues(State{0.0, 1.0}, Params{5.0, -0.5}), DegenerateFluxError);
  auto ev = eigenvalues(State{0.0, 2.0}, Params{5.0, 0.5});
  EXPECT_DOUBLE_EQ(ev.lambda_a, 2.0);
  EXPECT_DOUBLE_EQ(ev.lambda_0, 2.0);
  EXPECT_EQ(flux(State{0.0, 2.0}, Params{5.0, -0.5})[0], 0.0);
  EXPECT_THROW(flux(State{0.0, 2.0}, Params{5.0, -1.5}), DegenerateFluxError);
  EXPECT_THROW(flux(State{-1.0, 2.0}, Params{5.0, 0.5}), DegenerateFluxError);
  EXPECT_THROW(jacobian(State{0.0, 2.0}, Params{5.0, 0.5}), DegenerateFluxError);
}

TEST(CoreModel, ParamsValidation) {
  EXPECT_THROW(validate(Params{5.0, 0.0}), ConfigError);
  EXPECT_THROW(validate(Params{-1.0, 0.5}), ConfigError);
  EXPECT_THROW(validate(Params{NAN, 0.5}), ConfigError);
  EXPECT_NO_THROW(validate(Params{5.0, -1.5}));
  try {
    validate(Params{5.0, 0.0});
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
}

TEST(CoreModel, ConservedRoundTrip) {
  State s{2.5, -1.25};
  auto c = to_conserved(s);
  EXPECT_EQ(to_primitive(c), s);
  Params p{5.0, -1.5};
  EXPECT_EQ(flux(c, p), flux(s, p));
}
