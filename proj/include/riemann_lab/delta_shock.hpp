#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "core_model.hpp"
#include "wave_curves.hpp"

namespace riemann_lab {

struct DeltaShock {
  State left;
  State right;
  double speed;
  double weight_rate;  ///< d(zeta)/dt, constant
  double u_delta;
};

struct OvercompressionCheck {
  double lower;
  double upper;
  double speed;
  bool admissible;
};

struct Kappa {
  double kappa1;
  double kappa2;
};

/// kappa_i = s [H_i] - [G_i] with [.] = left - right.
inline Kappa kappa(const State& l, const State& r, double s, const Params& p) {
  Vec2 res = rh_residual(l, r, s, p);
  return {res[0], res[1]};
}

/// Quadratic coefficients A s^2 + B s + C of the a < 0 speed relation.
struct SpeedQuadratic {
  double A, B, C;
  double operator()(double s) const { return (A * s + B) * s + C; }
};

inline SpeedQuadratic delta_speed_quadratic(const State& l, const State& r, const Params& p) {
  Vec2 fl = flux(l, p), fr = flux(r, p);
  double jr = l.rho - r.rho;
  double jm = l.rho * l.u - r.rho * r.u;
  return {jr, -(jm + (fl[0] - fr[0])), fl[1] - fr[1]};
}

/// Real roots of the a < 0 delta speed relation, ascending.
inline std::vector<double> delta_speed_neg_a(const State& l, const State& r, const Params& p) {
  if (!(p.a < 0.0)) throw ConfigError("delta_speed_neg_a needs a < 0");
  if (l == r) throw CoincidentStatesError("identical states admit every speed");
  auto q = delta_speed_quadratic(l, r, p);
  if (q.A == 0.0) {
    if (q.B == 0.0) throw DegenerateQuadraticError("[rho] = 0 and linear coefficient vanishes");
    return {-q.C / q.B};
  }
  double disc = q.B * q.B - 4.0 * q.A * q.C;
  if (disc < 0.0) throw NoDeltaSpeedError("speed relation has complex roots");
  double sq = std::sqrt(disc);
  double t = -0.5 * (q.B + (q.B >= 0.0 ? sq : -sq));
  std::vector<double> roots;
  if (t != 0.0) {
    roots = {t / q.A, q.C / t};
  } else {
    roots = {0.0, 0.0};  // B = 0 and C = 0
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

inline double delta_speed_pos_a(const State& l, const State& r, const Params& p) {
  if (!(p.a > 0.0)) throw ConfigError("delta_speed_pos_a needs a > 0");
  double jm = l.rho * l.u - r.rho * r.u;
  if (jm == 0.0) throw NotInDeltaRegimeError("[rho u] = 0");
  Vec2 fl = flux(l, p), fr = flux(r, p);
  return (fl[1] - fr[1]) / jm;
}

inline double weight_rate(const State& l, const State& r, double s, const Params& p) {
  double rate = -kappa(l, r, s, p).kappa1;
  if (!(rate > 0.0)) throw NonGrowingDeltaError("delta weight would not grow");
  return rate;
}

inline OvercompressionCheck overcompression_check(const State& l, const State& r, double s,
                                                  const Params& p) {
  require_nondegenerate_u(l.u, "overcompression_check");
  require_nondegenerate_u(r.u, "overcompression_check");
  auto el = eigenvalues(l, p), er = eigenvalues(r, p);
  double lower = std::max(er.lambda_a, er.lambda_0);
  double upper = std::min(el.lambda_a, el.lambda_0);
  return {lower, upper, s, lower < s && s < upper};
}

/// Overcompressive delta shock joining l and r. Throws NotInDeltaRegimeError when no
/// candidate speed is overcompressive and AmbiguousRootFinding when both are.
inline DeltaShock make_delta_shock(const State& l, const State& r, const Params& p) {
  if (l == r) throw NotInDeltaRegimeError("identical states");
  double speed = 0.0;
  if (p.a < 0.0) {
    std::vector<double> passing;
    for (double s : delta_speed_neg_a(l, r, p))
      if (overcompression_check(l, r, s, p).admissible) passing.push_back(s);
    if (passing.empty()) throw NotInDeltaRegimeError("no overcompressive root");
    if (passing.size() > 1 && passing[0] != passing[1])
      throw AmbiguousRootFinding("both roots are overcompressive");
    speed = passing[0];
  } else {
    speed = delta_speed_pos_a(l, r, p);
    if (!overcompression_check(l, r, speed, p).admissible)
      throw NotInDeltaRegimeError("s_+ is not overcompressive");
  }
  double rate = weight_rate(l, r, speed, p);
  return {l, r, speed, rate, p.a < 0.0 ? speed : 0.0};
}

struct ShadowExponents {
  double k, beta, gamma, delta;
};

/// Residuals of the four limit equations of the shadow-wave ansatz, with the weight
/// zeta(t) = weight_rate * t split evenly between the two inner cells.
inline std::array<double, 4> shadow_wave_residual(const State& l, const State& r,
                                                  const DeltaShock& d, const Params& p,
                                                  const ShadowExponents& e, double t = 1.0) {
  auto kp = kappa(l, r, d.speed, p);
  double zeta = d.weight_rate * t;
  double s = d.speed;
  bool neg = e.k == 1.0 && e.beta == 1.0 && e.gamma == 0.0 && e.delta == 0.0;
  bool pos = e.k == 1.0 && e.beta == 1.0 && e.gamma == -p.a && e.delta == -p.a;
  if (neg && p.a < 0.0) {
    double eta = d.u_delta;
    return {d.weight_rate + kp.kappa1, zeta * (s - eta), d.weight_rate * eta + kp.kappa2,
            zeta * eta * (s - eta)};
  }
  if (pos && p.a > 0.0) {
    double half = 0.5 * zeta;
    double eta = -s * std::pow(p.rho_bar / half, p.a);
    double b = -s * zeta - zeta * eta * std::pow(half / p.rho_bar, p.a);
    return {d.weight_rate + kp.kappa1, b, kp.kappa2, 0.0};
  }
  throw UnsupportedAnsatzError("only (1,1,0,0) for a<0 and (1,1,-a,-a) for a>0 are supported");
}

}  // namespace riemann_lab
