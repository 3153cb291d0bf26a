#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "core_model.hpp"

namespace riemann_lab {

struct ShockA {
  State left;
  State right;
  double speed;
};

struct RarefactionA {
  State left;
  State right;
  double xi_lo;
  double xi_hi;
};

struct Contact0 {
  State left;
  State right;
  double speed;
};

/// a-family contact, only for a = -1.
struct ContactA {
  State left;
  State right;
  double speed;
};

inline bool is_a_minus_one(const Params& p) { return std::abs(p.a + 1.0) <= 1e-12; }

/// (s[rho] - [f1], s[rho u] - [f2]) with [.] = left - right.
inline Vec2 rh_residual(const State& l, const State& r, double s, const Params& p) {
  Vec2 fl = flux(l, p), fr = flux(r, p);
  return {s * (l.rho - r.rho) - (fl[0] - fr[0]),
          s * (l.rho * l.u - r.rho * r.u) - (fl[1] - fr[1])};
}

inline double shock_speed_a(double rho_l, double rho_r, double u, const Params& p) {
  if (rho_l == rho_r) throw CoincidentStatesError("shock_speed_a needs distinct densities");
  if (is_a_minus_one(p)) return u;
  double num = crowding_term(rho_l, p) - crowding_term(rho_r, p);
  return u * (1.0 - num / (rho_l - rho_r));
}

inline void require_nondegenerate_u(double u, const char* where) {
  if (std::abs(u) <= kDegeneracyTol)
    throw FullDegeneracyError(std::string(where) + ": u = 0 is fully degenerate");
}

inline bool lax_admissible_a(const State& l, const State& r, const Params& p) {
  if (std::abs(l.u - r.u) > 1e-12 * std::max(1.0, std::abs(l.u)))
    throw OffCurveError("a-shock states must share u");
  require_nondegenerate_u(l.u, "lax_admissible_a");
  double s = shock_speed_a(l.rho, r.rho, l.u, p);
  return lambda_a(r, p) < s && s < lambda_a(l, p);
}

enum class Side { Left, Right };

inline const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

/// Side of rho_L (smaller or larger density) on which admissible a-shocks lie.
/// Rarefactions lie on the opposite side.
inline Side shock_side(double a, double u) {
  // Lax needs lambda_a(r) < lambda_a(l) along u = const.
  double dlambda_sign = -u * (a + 1.0) * a;  // sign of d lambda_a / d rho
  return dlambda_sign < 0.0 ? Side::Right : Side::Left;
}

inline Side rarefaction_side(double a, double u) {
  return shock_side(a, u) == Side::Right ? Side::Left : Side::Right;
}

inline State rarefaction_state(double u_l, double xi, const Params& p) {
  if (is_a_minus_one(p)) throw NoRarefactionError("a = -1 has no a-rarefactions");
  double arg = (u_l - xi) / ((p.a + 1.0) * u_l);
  if (!(arg > 0.0) || !std::isfinite(arg)) throw OutsideFanError("xi outside the fan range");
  return {p.rho_bar * std::exp(std::log(arg) / p.a), u_l};
}

/// Velocity on the 0-contact locus through l at density rho.
inline double contact0_curve(const State& l, double rho, const Params& p) {
  if (critical_side(l.rho, p) == 0)
    throw VerticalBranchError("left state on the critical density; use contact0_vertical");
  if (critical_side(rho, p) == 0) throw PoleError("contact curve has a pole at rho_bar");
  if (!(rho > 0.0)) throw PoleError("contact curve needs rho > 0");
  return lambda_0(l, p) / mobility(rho, p);
}

struct Interval {
  double lo;
  double hi;
  bool contains(double x) const { return x > lo && x < hi; }
};

struct ContactBranches {
  State left;
  Params params;
  Interval main_rho;
  Interval mirror_rho;
  double asymptote;  ///< lambda_0(left)

  double main(double rho) const { return on_branch(rho, main_rho); }
  double mirror(double rho) const { return on_branch(rho, mirror_rho); }
  /// Limiting contact curve u_L (1 - rho_L^a / (rho_bar^a - rho^a)).
  double limit(double rho) const {
    double ra = std::pow(params.rho_bar, params.a) - std::pow(rho, params.a);
    if (ra == 0.0) throw PoleError("limit curve has a pole at rho_bar");
    return left.u * (1.0 - std::pow(left.rho, params.a) / ra);
  }

 private:
  double on_branch(double rho, const Interval& iv) const {
    if (!iv.contains(rho)) throw OffCurveError("density outside branch interval");
    return asymptote / mobility(rho, params);
  }
};

inline ContactBranches contact0_branches(const State& l, const Params& p) {
  int side = critical_side(l.rho, p);
  if (side == 0) throw VerticalBranchError("left state on the critical density");
  if (!(l.rho > 0.0)) throw PoleError("contact branches need rho_L > 0");
  constexpr double inf = std::numeric_limits<double>::infinity();
  Interval below{0.0, p.rho_bar}, above{p.rho_bar, inf};
  return {l, p, side < 0 ? below : above, side < 0 ? above : below, lambda_0(l, p)};
}

inline Contact0 contact0_vertical(const State& l, double u_r, const Params& p) {
  if (critical_side(l.rho, p) != 0)
    throw NotOnCriticalLineError("contact0_vertical needs rho_L = rho_bar");
  return {l, State{l.rho, u_r}, 0.0};
}

}  // namespace riemann_lab
