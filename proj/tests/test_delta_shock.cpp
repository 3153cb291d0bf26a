#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <random>

#include "riemann_lab/delta_shock.hpp"

using namespace riemann_lab;
using hp = boost::multiprecision::cpp_bin_float_50;

namespace {

struct HpFlux {
  hp f1, f2;
};

HpFlux hp_flux(const State& s, const Params& p) {
  hp rho = s.rho, u = s.u;
  hp f1 = rho * u * (1 - pow(rho / hp(p.rho_bar), hp(p.a)));
  return {f1, u * f1};
}

// Roots of [rho] s^2 - ([rho u] + [f1]) s + [f2] = 0 in 50 digits.
std::vector<double> hp_roots(const State& l, const State& r, const Params& p) {
  HpFlux fl = hp_flux(l, p), fr = hp_flux(r, p);
  hp A = hp(l.rho) - r.rho;
  hp B = -((hp(l.rho) * l.u - hp(r.rho) * r.u) + (fl.f1 - fr.f1));
  hp C = fl.f2 - fr.f2;
  hp disc = B * B - 4 * A * C;
  if (disc < 0) return {};
  hp sq = sqrt(disc);
  double x = static_cast<double>((-B - sq) / (2 * A)), y = static_cast<double>((-B + sq) / (2 * A));
  return {std::min(x, y), std::max(x, y)};
}

}  // namespace

TEST(DeltaShock, NegARootsMatchHighPrecision) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dr(0.5, 12.0), du(-8.0, 8.0);
  int checked = 0;
  for (double a : {-2.0, -1.5, -0.5}) {
    Params p{5.0, a};
    for (int k = 0; k < 400; ++k) {
      State l{dr(rng), du(rng)}, r{dr(rng), du(rng)};
      auto ref = hp_roots(l, r, p);
      if (ref.empty()) {
        EXPECT_THROW(delta_speed_neg_a(l, r, p), NoDeltaSpeedError);
        continue;
      }
      auto got = delta_speed_neg_a(l, r, p);
      ASSERT_EQ(got.size(), 2u);
      for (int i = 0; i < 2; ++i)
        EXPECT_NEAR(got[i], ref[i], 1e-9 * (1.0 + std::abs(ref[i])));
      ++checked;
    }
  }
  EXPECT_GT(checked, 300);
}

TEST(DeltaShock, CanonicalNegA) {
  Params p{5.0, -1.5};
  State l{3, 3}, r{9, -9};
  auto d = make_delta_shock(l, r, p);
  auto ref = hp_roots(l, r, p);
  EXPECT_NEAR(d.speed, ref[1], 1e-12 * std::abs(ref[1]));
  EXPECT_DOUBLE_EQ(d.u_delta, d.speed);
  auto oc = overcompression_check(l, r, d.speed, p);
  EXPECT_TRUE(oc.admissible);
  EXPECT_FALSE(overcompression_check(l, r, ref[0], p).admissible);
  // kappa_1 by hand
  HpFlux fl = hp_flux(l, p), fr = hp_flux(r, p);
  double k1 = static_cast<double>(hp(d.speed) * (hp(l.rho) - r.rho) - (fl.f1 - fr.f1));
  EXPECT_NEAR(d.weight_rate, -k1, 1e-10 * std::abs(k1));
  EXPECT_GT(d.weight_rate, 0.0);
}

TEST(DeltaShock, PosASpeed) {
  Params p{5.0, 0.5};
  State l{8, -4}, r{10, 5};
  HpFlux fl = hp_flux(l, p), fr = hp_flux(r, p);
  double s = static_cast<double>((fl.f2 - fr.f2) / (hp(l.rho) * l.u - hp(r.rho) * r.u));
  auto d = make_delta_shock(l, r, p);
  EXPECT_NEAR(d.speed, s, 1e-13 * std::abs(s));
  EXPECT_EQ(d.u_delta, 0.0);
  EXPECT_NEAR(kappa(l, r, d.speed, p).kappa2, 0.0, 1e-11);
}

TEST(DeltaShock, ShadowWaveLimitsVanish) {
  {
    Params p{5.0, -1.5};
    State l{3, 3}, r{9, -9};
    auto d = make_delta_shock(l, r, p);
    for (double t : {0.5, 1.0, 4.0})
      for (double v : shadow_wave_residual(l, r, d, p, {1, 1, 0, 0}, t)) EXPECT_NEAR(v, 0.0, 1e-9);
    EXPECT_THROW(shadow_wave_residual(l, r, d, p, {1, 1, 1.5, 1.5}), UnsupportedAnsatzError);
  }
  {
    Params p{5.0, 0.5};
    State l{8, -4}, r{10, 5};
    auto d = make_delta_shock(l, r, p);
    auto res = shadow_wave_residual(l, r, d, p, {1, 1, -0.5, -0.5});
    for (double v : res) EXPECT_NEAR(v, 0.0, 1e-9);
  }
}

TEST(DeltaShock, Errors) {
  Params p{5.0, -1.5};
  State l{3, 3};
  EXPECT_THROW(delta_speed_neg_a(l, l, p), CoincidentStatesError);
  EXPECT_THROW(delta_speed_neg_a(l, State{4, 3}, Params{5.0, 0.5}), ConfigError);
  EXPECT_THROW(delta_speed_pos_a(l, State{4, 3}, p), ConfigError);
  EXPECT_THROW(make_delta_shock(l, l, p), NotInDeltaRegimeError);
  // expansive data: no overcompressive root
  EXPECT_THROW(make_delta_shock(State{3, -3}, State{3, 3}, p), Error);
  // [rho u] = 0 for a > 0
  EXPECT_THROW(delta_speed_pos_a(State{2, 3}, State{3, 2}, Params{5.0, 0.5}), NotInDeltaRegimeError);
  // equal densities: the quadratic degenerates to a linear relation
  auto one = delta_speed_neg_a(State{3, 3}, State{3, -2}, p);
  EXPECT_EQ(one.size(), 1u);
  auto q = delta_speed_quadratic(State{3, 3}, State{3, -2}, p);
  EXPECT_NEAR(q(one[0]), 0.0, 1e-12);
}

TEST(DeltaShock, WeightRateSignError) {
  Params p{5.0, -1.5};
  State l{3, 3}, r{9, -9};
  // [rho] < 0, so a very negative speed makes kappa_1 positive
  EXPECT_GT(kappa(l, r, -1e3, p).kappa1, 0.0);
  EXPECT_THROW(weight_rate(l, r, -1e3, p), NonGrowingDeltaError);
}
