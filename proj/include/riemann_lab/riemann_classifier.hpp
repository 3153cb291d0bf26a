#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "core_model.hpp"
#include "delta_shock.hpp"
#include "wave_curves.hpp"

namespace riemann_lab {

struct CaseId {
  int index = 0;  ///< 1..24
};

/// Case number from the a-class, the sign of u_L and rho_L against rho_bar.
inline CaseId classify_case(const State& l, const Params& p) {
  require_nondegenerate_u(l.u, "classify_case");
  int a_class;
  if (is_a_minus_one(p)) a_class = 1;
  else if (p.a < -1.0) a_class = 0;
  else if (p.a < 0.0) a_class = 2;
  else a_class = 3;
  int sign_block = l.u < 0.0 ? 0 : 1;
  int side = critical_side(l.rho, p) + 1;  // 0: below, 1: on, 2: above
  return {a_class * 6 + sign_block * 3 + side + 1};
}

enum class RegionKind { I_a, I_0, II_a, II_0, III_a, III_0, IV, IV_delta, V, VI, Degenerate };

inline std::string to_string(RegionKind k) {
  switch (k) {
    case RegionKind::I_a: return "I_a";
    case RegionKind::I_0: return "I_0";
    case RegionKind::II_a: return "II_a";
    case RegionKind::II_0: return "II_0";
    case RegionKind::III_a: return "III_a";
    case RegionKind::III_0: return "III_0";
    case RegionKind::IV: return "IV";
    case RegionKind::IV_delta: return "IV_delta";
    case RegionKind::V: return "V";
    case RegionKind::VI: return "VI";
    case RegionKind::Degenerate: return "degenerate";
  }
  return "?";
}

struct RegionLabel {
  RegionKind kind = RegionKind::Degenerate;
  std::string v_sequence;  ///< e.g. "C0VRaC0", only for kind V

  std::string str() const { return kind == RegionKind::V ? "V_" + v_sequence : to_string(kind); }
  bool operator==(const RegionLabel& o) const {
    return kind == o.kind && v_sequence == o.v_sequence;
  }
};

inline const std::vector<std::string>& vacuum_subvariants() {
  static const std::vector<std::string> v{"C0VC0",  "C0VRaC0", "RaVC0",   "C0VSaC0",
                                          "SaVC0",  "CaVC0",   "C0VCaC0", "C0VRa"};
  return v;
}

struct VacuumSegment {
  double xi_lo;
  double xi_hi;
};

using Wave = std::variant<ShockA, RarefactionA, Contact0, ContactA, DeltaShock, VacuumSegment>;

inline double left_speed(const Wave& w) {
  return std::visit(
      [](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RarefactionA> || std::is_same_v<T, VacuumSegment>)
          return x.xi_lo;
        else
          return x.speed;
      },
      w);
}

inline double right_speed(const Wave& w) {
  return std::visit(
      [](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RarefactionA> || std::is_same_v<T, VacuumSegment>)
          return x.xi_hi;
        else
          return x.speed;
      },
      w);
}

inline std::string wave_name(const Wave& w) {
  switch (w.index()) {
    case 0: return "S_a";
    case 1: return "R_a";
    case 2: return "C_0";
    case 3: return "C_a";
    case 4: return "S_delta";
    default: return "vacuum";
  }
}

struct WaveSequence {
  Params params;
  State left;
  State right;
  std::vector<Wave> waves;
  std::vector<State> intermediate_states;  ///< states between consecutive waves
};

struct RiemannAnalysis {
  RegionLabel label;
  std::optional<WaveSequence> solution;
  std::string note;
};

namespace detail {

inline constexpr double kSpeedTol = 1e-10;

inline bool speeds_ordered(double lo, double hi) {
  return lo <= hi + kSpeedTol * std::max(1.0, std::abs(hi));
}

enum class AKind { None, Shock, Rarefaction, Contact };

struct AWave {
  AKind kind = AKind::None;
  Wave wave = VacuumSegment{0, 0};
  double lo = 0.0;  ///< left edge speed
  double hi = 0.0;  ///< right edge speed
};

/// Admissible a-wave joining x to y (same u, both rho > 0), if any.
inline std::optional<AWave> a_wave(const State& x, const State& y, const Params& p) {
  double scale = std::max(x.rho, y.rho);
  if (std::abs(x.rho - y.rho) <= 1e-12 * scale) return AWave{};
  if (is_a_minus_one(p)) {
    AWave w{AKind::Contact, ContactA{x, y, x.u}, x.u, x.u};
    return w;
  }
  double lx = lambda_a(x, p), ly = lambda_a(y, p);
  bool right_of = y.rho > x.rho;
  Side side = right_of ? Side::Right : Side::Left;
  if (side == shock_side(p.a, x.u)) {
    double s = shock_speed_a(x.rho, y.rho, x.u, p);
    if (!(ly < s && s < lx)) return std::nullopt;
    return AWave{AKind::Shock, ShockA{x, y, s}, s, s};
  }
  if (!(lx <= ly)) return std::nullopt;
  return AWave{AKind::Rarefaction, RarefactionA{x, y, lx, ly}, lx, ly};
}

/// Middle state on u = u_along whose lambda_0 equals c, if it exists.
inline std::optional<State> state_on_line_with_lambda0(double u_along, double c,
                                                        const Params& p) {
  double q = 1.0 - c / u_along;
  if (!(q > 0.0) || !std::isfinite(q)) return std::nullopt;
  return State{p.rho_bar * std::exp(std::log(q) / p.a), u_along};
}

inline bool same_branch(const State& m, const State& r, const Params& p) {
  int sm = critical_side(m.rho, p), sr = critical_side(r.rho, p);
  if (sm != sr) return false;
  if (sm == 0) return sign(m.u) == sign(r.u);
  return true;
}

inline RegionKind classical_kind(AKind k, bool a_first) {
  switch (k) {
    case AKind::Rarefaction: return a_first ? RegionKind::II_a : RegionKind::II_0;
    case AKind::Contact: return a_first ? RegionKind::III_a : RegionKind::III_0;
    default: return a_first ? RegionKind::I_a : RegionKind::I_0;
  }
}

inline void push_contact(WaveSequence& ws, const State& x, const State& y, double speed) {
  if (x.rho == y.rho && x.u == y.u) return;
  ws.waves.push_back(Contact0{x, y, speed});
}

inline std::optional<RiemannAnalysis> try_classical(const State& l, const State& r,
                                                   const Params& p) {
  bool a_first = p.a * l.u > 0.0;
  auto close = [](const State& x, const State& y) {
    return std::abs(x.rho - y.rho) <= 1e-12 * y.rho && x.u == y.u;
  };
  if (a_first) {
    double c = lambda_0(r, p);
    auto m = state_on_line_with_lambda0(l.u, c, p);
    if (!m) return std::nullopt;
    if (critical_side(r.rho, p) == 0) m->rho = r.rho;
    if (!same_branch(*m, r, p)) return std::nullopt;
    if (close(*m, r)) *m = r;
    auto aw = a_wave(l, *m, p);
    if (!aw) return std::nullopt;
    if (aw->kind == AKind::None) *m = l;
    if (aw->kind != AKind::None && !speeds_ordered(aw->hi, c)) return std::nullopt;
    WaveSequence ws{p, l, r, {}, {}};
    if (aw->kind != AKind::None) ws.waves.push_back(aw->wave);
    bool contact = !(*m == r);
    if (aw->kind != AKind::None && contact) ws.intermediate_states.push_back(*m);
    if (contact) push_contact(ws, *m, r, c);
    AKind k = aw->kind == AKind::None && is_a_minus_one(p) ? AKind::Contact : aw->kind;
    return RiemannAnalysis{{classical_kind(k, true), ""}, ws, ""};
  }
  double c = lambda_0(l, p);
  auto m = state_on_line_with_lambda0(r.u, c, p);
  if (!m) return std::nullopt;
  if (critical_side(l.rho, p) == 0) m->rho = l.rho;
  if (!same_branch(*m, l, p)) return std::nullopt;
  if (close(*m, l)) *m = l;
  auto aw = a_wave(*m, r, p);
  if (!aw) return std::nullopt;
  if (aw->kind == AKind::None) *m = r;
  if (aw->kind != AKind::None && !speeds_ordered(c, aw->lo)) return std::nullopt;
  WaveSequence ws{p, l, r, {}, {}};
  bool contact = !(*m == l);
  if (contact) push_contact(ws, l, *m, c);
  if (aw->kind != AKind::None && contact) ws.intermediate_states.push_back(*m);
  if (aw->kind != AKind::None) ws.waves.push_back(aw->wave);
  AKind k = aw->kind == AKind::None && is_a_minus_one(p) ? AKind::Contact : aw->kind;
  return RiemannAnalysis{{classical_kind(k, false), ""}, ws, ""};
}

inline std::optional<RiemannAnalysis> try_delta(const State& l, const State& r,
                                               const Params& p) {
  try {
    DeltaShock d = make_delta_shock(l, r, p);
    return RiemannAnalysis{{RegionKind::IV, ""}, WaveSequence{p, l, r, {d}, {}}, ""};
  } catch (const Error&) {
    return std::nullopt;
  }
}

inline std::optional<RiemannAnalysis> try_three_leg(const State& l, const State& r,
                                                   const Params& p) {
  if (sign(l.u) == sign(r.u)) return std::nullopt;
  State m1{p.rho_bar, l.u}, m2{p.rho_bar, r.u};
  if (critical_side(l.rho, p) == 0) m1.rho = l.rho;
  if (critical_side(r.rho, p) == 0) m2.rho = r.rho;
  auto w1 = a_wave(l, m1, p);
  auto w2 = a_wave(m2, r, p);
  if (!w1 || !w2) return std::nullopt;
  if (w1->kind != AKind::None && !speeds_ordered(w1->hi, 0.0)) return std::nullopt;
  if (w2->kind != AKind::None && !speeds_ordered(0.0, w2->lo)) return std::nullopt;
  WaveSequence ws{p, l, r, {}, {}};
  if (w1->kind != AKind::None) {
    ws.waves.push_back(w1->wave);
    ws.intermediate_states.push_back(m1);
  }
  ws.waves.push_back(Contact0{m1, m2, 0.0});
  if (w2->kind != AKind::None) {
    ws.intermediate_states.push_back(m2);
    ws.waves.push_back(w2->wave);
  }
  return RiemannAnalysis{{RegionKind::VI, ""}, ws, ""};
}

// ---- vacuum constructions ----

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// lambda_a at vacuum with velocity u, as an extended real.
inline double lambda_a_vacuum(double u, const Params& p) {
  if (p.a > 0.0 || is_a_minus_one(p)) return u;
  // a < 0: |lambda_a| blows up; sign of u (1 - (a+1) q) with q -> inf
  return -(p.a + 1.0) * u > 0.0 ? kInf : -kInf;
}

/// Name of the a-wave joining vacuum and a state of velocity u.
inline std::string vacuum_a_name(double u, bool vacuum_on_left, const Params& p) {
  if (is_a_minus_one(p)) return "Ca";
  // the vacuum side has the smaller density
  Side right_state_side = vacuum_on_left ? Side::Right : Side::Left;
  return shock_side(p.a, u) == right_state_side ? "Sa" : "Ra";
}

struct VacuumLeg {
  std::string name;
  std::vector<Wave> waves;
  std::vector<State> states;  ///< intermediate states inside the leg
  double edge = 0.0;          ///< vacuum boundary speed
  bool feasible = false;
};

inline std::string left_leg_name(const State& l, const Params& p) {
  if (p.a * l.u < 0.0 && critical_side(l.rho, p) < 0) return "C0";
  return vacuum_a_name(l.u, false, p);
}

inline std::string right_leg_name(const State& r, const Params& p) {
  if (p.a * r.u < 0.0) return vacuum_a_name(r.u, true, p);
  if (critical_side(r.rho, p) < 0) return "C0";
  return vacuum_a_name(r.u, true, p) + "C0";
}

inline VacuumLeg left_leg(const State& l, const Params& p) {
  VacuumLeg leg;
  leg.name = left_leg_name(l, p);
  if (leg.name == "C0") {
    double c = lambda_0(l, p);
    State v{0.0, p.a < 0.0 ? 0.0 : c};
    leg.waves.push_back(Contact0{l, v, c});
    leg.edge = c;
    leg.feasible = true;
    return leg;
  }
  // a-wave from l into vacuum, possibly after a contact along l's branch that
  // moves at the same speed and therefore collapses
  State v{0.0, l.u};
  if (leg.name == "Ca") {
    leg.waves.push_back(ContactA{l, v, l.u});
    leg.edge = l.u;
    leg.feasible = true;
    return leg;
  }
  double la_vac = lambda_a_vacuum(l.u, p);
  double la_l = lambda_a(l, p);
  if (leg.name == "Sa") {
    if (p.a <= -1.0) return leg;
    double s = lambda_0(l, p);
    if (!(la_vac < s && s < la_l)) return leg;
    leg.waves.push_back(ShockA{l, v, s});
    leg.edge = s;
    leg.feasible = true;
    return leg;
  }
  if (!std::isfinite(la_vac) || !(la_l <= la_vac)) return leg;
  leg.waves.push_back(RarefactionA{l, v, la_l, la_vac});
  leg.edge = la_vac;
  leg.feasible = true;
  return leg;
}

inline VacuumLeg right_leg(const State& r, double left_edge, const Params& p) {
  VacuumLeg leg;
  leg.name = right_leg_name(r, p);
  double c = lambda_0(r, p);
  if (leg.name == "C0") {
    State v{0.0, p.a < 0.0 ? 0.0 : c};
    leg.waves.push_back(Contact0{v, r, c});
    leg.edge = c;
    leg.feasible = true;
    return leg;
  }
  bool with_contact = leg.name.size() > 2;
  std::string a_name = leg.name.substr(0, 2);
  if (a_name == "Ca") {
    if (!with_contact) {
      leg.waves.push_back(ContactA{State{0.0, r.u}, r, r.u});
      leg.edge = r.u;
      leg.feasible = true;
      return leg;
    }
    // contact a-wave from vacuum to m on r's 0-branch; the velocity of m is free,
    // take the midpoint of the admissible interval [left_edge, lambda_0(r)]
    if (critical_side(r.rho, p) == 0) return leg;
    double um = 0.5 * (left_edge + c);
    if (!(left_edge <= c) || sign(um) != sign(r.u)) return leg;
    double g = c / um;  // mobility at m
    double q = 1.0 - g;
    if (!(q > 0.0)) return leg;
    State m{p.rho_bar * std::exp(std::log(q) / p.a), um};
    if (critical_side(m.rho, p) != critical_side(r.rho, p)) return leg;
    leg.waves.push_back(ContactA{State{0.0, um}, m, um});
    leg.states.push_back(m);
    leg.waves.push_back(Contact0{m, r, c});
    leg.edge = um;
    leg.feasible = true;
    return leg;
  }
  double la_vac = lambda_a_vacuum(r.u, p);
  double la_r = lambda_a(r, p);
  if (a_name == "Sa") {
    // any jump out of vacuum moves at lambda_0 of its right state, so the
    // a-shock and the trailing contact coincide
    if (p.a <= -1.0) return leg;
    if (!(la_r < c && c < la_vac)) return leg;
    leg.waves.push_back(ShockA{State{0.0, r.u}, r, c});
    leg.edge = c;
    leg.feasible = true;
    return leg;
  }
  if (with_contact || !std::isfinite(la_vac) || !(la_vac <= la_r)) return leg;
  leg.waves.push_back(RarefactionA{State{0.0, r.u}, r, la_vac, la_r});
  leg.edge = la_vac;
  leg.feasible = true;
  return leg;
}

inline RegionLabel vacuum_label(const State& l, const State& r, const Params& p) {
  return {RegionKind::V, left_leg_name(l, p) + "V" + right_leg_name(r, p)};
}

inline std::optional<RiemannAnalysis> try_vacuum(const State& l, const State& r,
                                                const Params& p) {
  if (!(r.rho > 0.0)) return std::nullopt;
  VacuumLeg lg = left_leg(l, p);
  if (!lg.feasible) return std::nullopt;
  VacuumLeg rg = right_leg(r, lg.edge, p);
  if (!rg.feasible || !speeds_ordered(lg.edge, rg.edge)) return std::nullopt;
  WaveSequence ws{p, l, r, {}, {}};
  for (auto& w : lg.waves) ws.waves.push_back(w);
  for (auto& s : lg.states) ws.intermediate_states.push_back(s);
  ws.intermediate_states.push_back(State{0.0, 0.0});
  ws.waves.push_back(VacuumSegment{lg.edge, std::max(lg.edge, rg.edge)});
  ws.intermediate_states.push_back(State{0.0, 0.0});
  for (auto& s : rg.states) ws.intermediate_states.push_back(s);
  for (auto& w : rg.waves) ws.waves.push_back(w);
  return RiemannAnalysis{{RegionKind::V, lg.name + "V" + rg.name}, ws, ""};
}

/// Candidate delta speeds for a pair, regardless of admissibility.
inline std::vector<double> delta_candidates(const State& l, const State& r, const Params& p) {
  try {
    if (p.a < 0.0) return delta_speed_neg_a(l, r, p);
    return {delta_speed_pos_a(l, r, p)};
  } catch (const Error&) {
    return {};
  }
}

/// Delta shock with an attached a-rarefaction on one side. The a-characteristics of
/// the intermediate state m run parallel to the delta (s = lambda_a(m)); every other
/// characteristic impinges on it.
struct Composite {
  WaveSequence ws;
  double rho_m;
};

inline std::optional<Composite> composite_at(const State& l, const State& r, double x,
                                             int root, bool delta_first, const Params& p,
                                             double* mismatch) {
  State m = delta_first ? State{x, r.u} : State{x, l.u};
  const State& dl = delta_first ? l : m;
  const State& dr = delta_first ? m : r;
  auto roots = delta_candidates(dl, dr, p);
  if (static_cast<int>(roots.size()) <= root) return std::nullopt;
  double s = roots[static_cast<std::size_t>(root)];
  double la_m = lambda_a(m, p);
  if (mismatch) *mismatch = delta_first ? s - la_m : la_m - s;
  auto el = eigenvalues(dl, p), er = eigenvalues(dr, p);
  double rate = -kappa(dl, dr, s, p).kappa1;
  if (!(rate > 0.0)) return std::nullopt;
  if (delta_first) {
    if (!(s < std::min(el.lambda_a, el.lambda_0) && s > er.lambda_0)) return std::nullopt;
    auto aw = a_wave(m, r, p);
    if (!aw || aw->kind != AKind::Rarefaction) return std::nullopt;
    DeltaShock d{dl, dr, s, rate, p.a < 0.0 ? s : 0.0};
    RarefactionA f = std::get<RarefactionA>(aw->wave);
    f.xi_lo = std::max(f.xi_lo, s);
    return Composite{WaveSequence{p, l, r, {d, f}, {m}}, x};
  }
  if (!(s > std::max(er.lambda_a, er.lambda_0) && s < el.lambda_0)) return std::nullopt;
  auto aw = a_wave(l, m, p);
  if (!aw || aw->kind != AKind::Rarefaction) return std::nullopt;
  DeltaShock d{dl, dr, s, rate, p.a < 0.0 ? s : 0.0};
  RarefactionA f = std::get<RarefactionA>(aw->wave);
  f.xi_hi = std::min(f.xi_hi, s);
  return Composite{WaveSequence{p, l, r, {f, d}, {m}}, x};
}

/// Searches the line through the fixed end for the sonic attachment point.
inline std::optional<Composite> find_composite(const State& l, const State& r, bool delta_first,
                                               const Params& p) {
  const State& anchor = delta_first ? r : l;
  // m must see the other end of the rarefaction on its rarefaction side
  double dir;
  if (delta_first) dir = rarefaction_side(p.a, r.u) == Side::Left ? 1.0 : -1.0;
  else dir = rarefaction_side(p.a, l.u) == Side::Right ? 1.0 : -1.0;
  constexpr int n = 96;
  const double span = std::log(1e3);
  std::optional<Composite> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int root = 0; root < 2; ++root) {
    double prev_t = 0.0, prev_g = std::numeric_limits<double>::quiet_NaN();
    for (int i = 1; i <= n; ++i) {
      double t = span * i / n;
      double g = std::numeric_limits<double>::quiet_NaN();
      try {
        composite_at(l, r, anchor.rho * std::exp(dir * t), root, delta_first, p, &g);
      } catch (const Error&) {
        g = std::numeric_limits<double>::quiet_NaN();
      }
      if (std::isfinite(g) && std::isfinite(prev_g) && (g == 0.0 || (g > 0.0) != (prev_g > 0.0))) {
        double lo = prev_t, hi = t, glo = prev_g;
        for (int it = 0; it < 80; ++it) {
          double mid = 0.5 * (lo + hi), gm = 0.0;
          composite_at(l, r, anchor.rho * std::exp(dir * mid), root, delta_first, p, &gm);
          if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        double tm = 0.5 * (lo + hi);
        try {
          auto c = composite_at(l, r, anchor.rho * std::exp(dir * tm), root, delta_first, p,
                                nullptr);
          if (c && tm < best_dist) {
            best = c;
            best_dist = tm;
          }
        } catch (const Error&) {
        }
        break;
      }
      prev_t = t;
      prev_g = g;
    }
  }
  return best;
}

inline std::optional<RiemannAnalysis> try_composite_delta(const State& l, const State& r,
                                                         const Params& p) {
  if (is_a_minus_one(p)) return std::nullopt;
  auto a = find_composite(l, r, true, p);
  auto b = find_composite(l, r, false, p);
  if (!a && !b) return std::nullopt;
  // prefer the attachment closest to the fixed end state
  const Composite& c = !b ? *a
                       : !a ? *b
                            : (std::abs(std::log(a->rho_m / r.rho)) <=
                                       std::abs(std::log(b->rho_m / l.rho))
                                   ? *a
                                   : *b);
  return RiemannAnalysis{{RegionKind::IV_delta, ""}, c.ws, ""};
}

}  // namespace detail

/// Full classification; the solution is absent when no finite ordered-speed wave
/// sequence exists for the assigned label.
inline RiemannAnalysis analyze_riemann(const State& l, const State& r, const Params& p) {
  require_nondegenerate_u(l.u, "classify_region");
  if (!(l.rho > 0.0)) throw DegenerateFluxError("left state must have rho > 0");
  if (l == r) {
    bool a_first = p.a * l.u > 0.0;
    detail::AKind k = is_a_minus_one(p) ? detail::AKind::Contact : detail::AKind::Shock;
    return {{detail::classical_kind(k, a_first), ""}, WaveSequence{p, l, r, {}, {}}, ""};
  }
  require_nondegenerate_u(r.u, "classify_region");
  if (!(r.rho > 0.0)) throw DegenerateFluxError("right state must have rho > 0");
  if (auto c = detail::try_classical(l, r, p)) return *c;
  if (auto d = detail::try_delta(l, r, p)) return *d;
  if (auto v = detail::try_three_leg(l, r, p)) return *v;
  if (auto v = detail::try_vacuum(l, r, p)) return *v;
  if (auto d = detail::try_composite_delta(l, r, p)) return *d;
  return {detail::vacuum_label(l, r, p), std::nullopt,
          "no finite-speed wave sequence; labelled by vacuum reachability"};
}

inline RegionLabel classify_region(const State& l, const State& r, const Params& p) {
  return analyze_riemann(l, r, p).label;
}

inline WaveSequence solve_riemann(const State& l, const State& r, const Params& p) {
  auto a = analyze_riemann(l, r, p);
  if (!a.solution)
    throw NoIntersectionError("region " + a.label.str() + ": " + a.note);
  return *a.solution;
}

struct PointValue {
  State state;
  bool delta = false;   ///< singular marker: state.rho = +inf, state.u = u_delta
  bool vacuum = false;  ///< velocity undefined
};

inline PointValue evaluate_selfsimilar(const WaveSequence& ws, double xi) {
  State cur = ws.left;
  for (std::size_t i = 0; i < ws.waves.size(); ++i) {
    const Wave& w = ws.waves[i];
    double lo = left_speed(w), hi = right_speed(w);
    if (xi < lo) return {cur, false, cur.rho == 0.0};
    if (const auto* d = std::get_if<DeltaShock>(&w)) {
      if (xi == d->speed)
        return {State{std::numeric_limits<double>::infinity(), d->u_delta}, true, false};
      cur = d->right;
      continue;
    }
    if (const auto* f = std::get_if<RarefactionA>(&w)) {
      if (xi <= hi) {
        if (xi == lo) return {f->left, false, f->left.rho == 0.0};
        if (xi == hi) return {f->right, false, f->right.rho == 0.0};
        return {rarefaction_state(f->left.u, xi, ws.params), false, false};
      }
      cur = f->right;
      continue;
    }
    if (const auto* v = std::get_if<VacuumSegment>(&w)) {
      if (xi <= v->xi_hi) return {State{0.0, 0.0}, false, true};
      continue;
    }
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (!std::is_same_v<T, VacuumSegment>) cur = x.right;
        },
        w);
  }
  return {cur, false, cur.rho == 0.0};
}

struct Window {
  double rho_lo, rho_hi, u_lo, u_hi;
};

struct RegionGrid {
  int nx = 0, ny = 0;
  Window window{};
  std::vector<RegionLabel> labels;  ///< row-major, index j * nx + i (u row j, rho column i)

  double rho_center(int i) const {
    return window.rho_lo + (i + 0.5) * (window.rho_hi - window.rho_lo) / nx;
  }
  double u_center(int j) const { return window.u_lo + (j + 0.5) * (window.u_hi - window.u_lo) / ny; }
  const RegionLabel& at(int i, int j) const { return labels[static_cast<std::size_t>(j) * nx + i]; }
};

inline RegionGrid rasterize_regions(const State& l, const Params& p, const Window& w, int nx,
                                    int ny, unsigned threads = 1) {
  RegionGrid g{nx, ny, w, std::vector<RegionLabel>(static_cast<std::size_t>(nx) * ny)};
  auto work = [&](int j0, int j1) {
    for (int j = j0; j < j1; ++j)
      for (int i = 0; i < nx; ++i) {
        State r{g.rho_center(i), g.u_center(j)};
        RegionLabel lab;
        try {
          lab = classify_region(l, r, p);
        } catch (const Error&) {
          lab = {RegionKind::Degenerate, ""};
        }
        g.labels[static_cast<std::size_t>(j) * nx + i] = lab;
      }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(ny)));
  if (threads == 1) {
    work(0, ny);
    return g;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back(work, static_cast<int>(ny * t / threads),
                      static_cast<int>(ny * (t + 1) / threads));
  for (auto& th : pool) th.join();
  return g;
}

}  // namespace riemann_lab
