#pragma once

#include <array>
#include <cmath>
#include <set>
#include <string>

#include "errors.hpp"

namespace riemann_lab {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

struct Params {
  double rho_bar = 5.0;  ///< critical (jamming) density
  double a = -1.5;       ///< mobility exponent, nonzero
};

struct State {
  double rho = 0.0;
  double u = 0.0;
};

inline bool operator==(const State& x, const State& y) { return x.rho == y.rho && x.u == y.u; }

struct ConservedState {
  double rho = 0.0;
  double m = 0.0;
};

inline ConservedState to_conserved(const State& s) { return {s.rho, s.rho * s.u}; }
inline State to_primitive(const ConservedState& c) { return {c.rho, c.m / c.rho}; }

inline void validate(const Params& p) {
  if (!(p.rho_bar > 0.0) || !std::isfinite(p.rho_bar))
    throw ConfigError("rho_bar must be positive and finite");
  if (p.a == 0.0 || !std::isfinite(p.a)) throw ConfigError("a must be nonzero and finite");
}

/// (rho/rho_bar)^a for rho > 0.
inline double density_ratio_pow(double rho, const Params& p) {
  return std::exp(p.a * std::log(rho / p.rho_bar));
}

/// rho (rho/rho_bar)^a in the regrouped form rho^{a+1}/rho_bar^a, extended to rho = 0 when finite.
inline double crowding_term(double rho, const Params& p) {
  if (rho > 0.0) return std::exp((p.a + 1.0) * std::log(rho) - p.a * std::log(p.rho_bar));
  if (rho < 0.0) throw DegenerateFluxError("negative density");
  if (p.a > -1.0) return 0.0;
  throw DegenerateFluxError("flux is not finite at vacuum for a <= -1");
}

/// Mobility factor 1 - (rho/rho_bar)^a.
inline double mobility(double rho, const Params& p) {
  if (rho > 0.0) return 1.0 - density_ratio_pow(rho, p);
  if (rho == 0.0 && p.a > 0.0) return 1.0;
  throw DegenerateFluxError("mobility undefined at rho = " + std::to_string(rho));
}

inline Vec2 flux(const State& s, const Params& p) {
  if (s.rho < 0.0) throw DegenerateFluxError("negative density");
  double f1 = s.u * (s.rho - crowding_term(s.rho, p));
  if (!std::isfinite(f1)) throw DegenerateFluxError("non-finite flux");
  return {f1, s.u * f1};
}

inline Vec2 flux(const ConservedState& c, const Params& p) {
  if (c.rho == 0.0) return flux(State{0.0, 0.0}, p);
  return flux(to_primitive(c), p);
}

/// Flux Jacobian with respect to the conserved variables (rho, m).
inline Mat2 jacobian(const State& s, const Params& p) {
  if (!(s.rho > 0.0)) throw DegenerateFluxError("jacobian requires rho > 0");
  double q = density_ratio_pow(s.rho, p);
  double g = 1.0 - q;
  double rho_dg = -p.a * q;  // rho * dg/drho
  double u = s.u;
  return Mat2{{{u * rho_dg, g}, {u * u * (rho_dg - g), 2.0 * u * g}}};
}

struct Eigenvalues {
  double lambda_a;
  double lambda_0;
};

inline Eigenvalues eigenvalues(const State& s, const Params& p) {
  if (s.rho < 0.0 || (s.rho == 0.0 && p.a <= 0.0))
    throw DegenerateFluxError("eigenvalues unbounded at vacuum for a < 0");
  double q = s.rho > 0.0 ? density_ratio_pow(s.rho, p) : 0.0;
  return {s.u * (1.0 - (p.a + 1.0) * q), s.u * (1.0 - q)};
}

inline double lambda_a(const State& s, const Params& p) { return eigenvalues(s, p).lambda_a; }
inline double lambda_0(const State& s, const Params& p) { return eigenvalues(s, p).lambda_0; }

struct Eigenstructure {
  double lambda_a;
  double lambda_0;
  Vec2 r_a;     ///< in (rho, u) coordinates
  Vec2 r_0;
  double gnl_a;  ///< grad(lambda_a) . r_a
  double gnl_0;  ///< grad(lambda_0) . r_0, identically zero
};

inline Eigenstructure eigenstructure(const State& s, const Params& p) {
  if (!(s.rho > 0.0)) throw DegenerateFluxError("eigenstructure requires rho > 0");
  auto ev = eigenvalues(s, p);
  double q = density_ratio_pow(s.rho, p);
  Vec2 ra{1.0, 0.0};
  Vec2 r0{s.rho * (1.0 - q), p.a * s.u * q};
  // grad lambda_a = (-u (a+1) a q / rho, 1 - (a+1) q); grad lambda_0 = (-u a q / rho, 1 - q)
  double gnl_a = -s.u * (p.a + 1.0) * p.a * q / s.rho;
  double d0_drho = -s.u * p.a * q / s.rho;
  double d0_du = 1.0 - q;
  double gnl_0 = d0_drho * r0[0] + d0_du * r0[1];
  return {ev.lambda_a, ev.lambda_0, ra, r0, gnl_a, gnl_0};
}

enum class Locus { lambda0_zero, lambdaa_zero, equal_eigenvalues, full_degeneracy };

inline std::string to_string(Locus l) {
  switch (l) {
    case Locus::lambda0_zero: return "lambda0_zero";
    case Locus::lambdaa_zero: return "lambdaa_zero";
    case Locus::equal_eigenvalues: return "equal_eigenvalues";
    case Locus::full_degeneracy: return "full_degeneracy";
  }
  return "?";
}

struct DegeneracyReport {
  bool strictly_hyperbolic = true;
  std::set<Locus> loci;
  bool has(Locus l) const { return loci.count(l) != 0; }
};

inline constexpr double kDegeneracyTol = 1e-9;

/// Density where lambda_a vanishes; only exists for a > -1.
inline double lambda_a_zero_density(const Params& p) {
  return p.rho_bar * std::pow(1.0 / (p.a + 1.0), 1.0 / p.a);
}

inline DegeneracyReport classify_degeneracy(const State& s, const Params& p,
                                            double tol = kDegeneracyTol) {
  DegeneracyReport rep;
  if (std::abs(s.rho / p.rho_bar - 1.0) <= tol) rep.loci.insert(Locus::lambda0_zero);
  if (p.a > -1.0 && std::abs(s.rho - lambda_a_zero_density(p)) / p.rho_bar <= tol)
    rep.loci.insert(Locus::lambdaa_zero);
  if (p.a > 0.0 && s.rho / p.rho_bar <= tol) rep.loci.insert(Locus::equal_eigenvalues);
  if (std::abs(s.u) <= tol) rep.loci.insert(Locus::full_degeneracy);
  rep.strictly_hyperbolic = rep.loci.empty();
  return rep;
}

/// Which side of the critical density a state sits on: -1 below, 0 on, +1 above.
inline int critical_side(double rho, const Params& p, double tol = kDegeneracyTol) {
  double d = rho / p.rho_bar - 1.0;
  if (std::abs(d) <= tol) return 0;
  return d < 0.0 ? -1 : 1;
}

inline int sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace riemann_lab
