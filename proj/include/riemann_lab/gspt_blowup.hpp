#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "core_model.hpp"
#include "delta_shock.hpp"
#include "ode.hpp"
#include "wave_curves.hpp"

namespace riemann_lab {

// ---------------------------------------------------------------------------
// Fast system in (rho, u, w1, w2, xi, eps)

struct FastPoint {
  double rho;
  double u;
  double w1;
  double w2;
  double xi;
  double eps;
};

using FastRate = std::array<double, 6>;

inline FastRate fast_field(const FastPoint& pt, const Params& p) {
  if (!(pt.rho > 0.0)) throw DegenerateFluxError("fast field needs rho > 0");
  double f1 = flux(State{pt.rho, pt.u}, p)[0];
  return {f1 - pt.xi * pt.rho - pt.w1,
          (pt.u * pt.w1 - pt.w2) / pt.rho,
          -pt.eps * pt.rho,
          -pt.eps * pt.rho * pt.u,
          pt.eps,
          0.0};
}

/// W = F(U) - xi U, the deficit carried by an equilibrium at U.
inline Vec2 rh_deficit(const State& s, double xi, const Params& p) {
  Vec2 f = flux(s, p);
  return {f[0] - xi * s.rho, f[1] - xi * s.rho * s.u};
}

// ---------------------------------------------------------------------------
// Invariant regions of the planar field U' = F(U) - sU - W_anchor

struct PlanarRate {
  double rho;
  double u;
};

inline PlanarRate planar_field(const State& x, const State& anchor, double s, const Params& p) {
  Vec2 w = rh_deficit(anchor, s, p);
  FastRate d = fast_field({x.rho, x.u, w[0], w[1], s, 0.0}, p);
  return {d[0], d[1]};
}

struct BoundarySample {
  State at;
  double normal_rate;  ///< outward component of the field, normalized
  bool on_curve;       ///< false for the horizontal line
};

struct InvariantRegionReport {
  Side side;
  int n_samples = 0;
  int violations = 0;
  int tangent = 0;
  double worst = 0.0;  ///< most offending normalized normal rate (0 if none)
  std::optional<BoundarySample> first_violation;
  std::vector<BoundarySample> samples;
};

inline constexpr double kTangencyTol = 1e-9;

/// Which side of the anchor density the sampled wedge occupies.
enum class Wedge { HigherDensity, LowerDensity };

/// Samples the boundary of the curvilinear wedge between the horizontal line
/// u = u_anchor and the 0-contact branch through the anchor. Left anchors need the flow
/// to leave or slide along the boundary, right anchors need it to enter or slide.
/// For an anchor on the critical density the branch is the vertical line rho = rho_bar,
/// taken on the side of u = 0.
inline InvariantRegionReport check_invariant_region(Side side, const State& anchor, double s,
                                                    const Params& p, int n_samples = 512,
                                                    Wedge wedge = Wedge::HigherDensity) {
  if (n_samples < 2) throw ConfigError("need at least 2 boundary samples");
  if (!(anchor.rho > 0.0)) throw DegenerateFluxError("anchor needs rho > 0");
  InvariantRegionReport rep;
  rep.side = side;
  const int crit = critical_side(anchor.rho, p);
  const double c = lambda_0(anchor, p);
  const int n_line = n_samples / 2, n_curve = n_samples - n_line;

  auto record = [&](BoundarySample b) {
    double t = std::abs(b.normal_rate) <= kTangencyTol ? 0.0 : b.normal_rate;
    bool bad = side == Side::Left ? t < 0.0 : t > 0.0;
    if (t == 0.0) ++rep.tangent;
    if (bad) {
      ++rep.violations;
      if (!rep.first_violation) rep.first_violation = b;
      if (std::abs(t) > std::abs(rep.worst)) rep.worst = t;
    }
    rep.samples.push_back(b);
  };
  auto normalized = [](double nr, double nu, const PlanarRate& f) {
    double nn = std::hypot(nr, nu), fn = std::hypot(f.rho, f.u);
    if (nn == 0.0 || fn == 0.0) return 0.0;
    return (nr * f.rho + nu * f.u) / (nn * fn);
  };

  if (crit == 0) {
    if (wedge == Wedge::LowerDensity) throw ConfigError("critical anchors only have the higher-density wedge");
    // quadrant rho > rho_bar, bounded by the horizontal line and the vertical line
    double toward = anchor.u > 0.0 ? -1.0 : 1.0;
    double span = 2.0 * std::max(1.0, std::abs(anchor.u));
    for (int k = 0; k < n_line; ++k) {
      double t = (k + 0.5) / n_line;
      State x{anchor.rho + p.rho_bar * t / (1.0 - t), anchor.u};
      auto f = planar_field(x, anchor, s, p);
      record({x, normalized(0.0, -toward, f), false});
    }
    for (int k = 0; k < n_curve; ++k) {
      State x{anchor.rho, anchor.u + toward * span * (k + 0.5) / n_curve};
      auto f = planar_field(x, anchor, s, p);
      record({x, normalized(-1.0, 0.0, f), true});
    }
    rep.n_samples = static_cast<int>(rep.samples.size());
    return rep;
  }

  // density range of the sampled branch
  auto rho_at = [&](double t) {
    if (wedge == Wedge::LowerDensity) {
      double lo = crit < 0 ? 0.0 : p.rho_bar;
      return anchor.rho - (anchor.rho - lo) * t;
    }
    if (crit < 0) return anchor.rho + (p.rho_bar - anchor.rho) * t;
    return anchor.rho + p.rho_bar * t / (1.0 - t);
  };
  auto curve = [&](double rho) { return c / mobility(rho, p); };
  auto curve_slope = [&](double rho) {
    // d/drho [c / g] = -c g' / g^2 with rho g' = -a q
    double g = mobility(rho, p), q = density_ratio_pow(rho, p);
    return c * p.a * q / (rho * g * g);
  };
  for (int k = 0; k < n_line; ++k) {
    double rho = rho_at((k + 0.5) / n_line);
    State x{rho, anchor.u};
    double inside = sign(curve(rho) - anchor.u);  // interior lies on this side of the line
    auto f = planar_field(x, anchor, s, p);
    record({x, normalized(0.0, -inside, f), false});
  }
  for (int k = 0; k < n_curve; ++k) {
    double rho = rho_at((k + 0.5) / n_curve);
    State x{rho, curve(rho)};
    double inside = sign(anchor.u - x.u);  // interior lies toward the horizontal line
    // gradient of u - curve(rho) is (-curve', 1); outward is against the interior
    double nr = -curve_slope(rho) * -inside, nu = -inside;
    auto f = planar_field(x, anchor, s, p);
    record({x, normalized(nr, nu, f), true});
  }
  rep.n_samples = static_cast<int>(rep.samples.size());
  return rep;
}

inline void require_invariant(const InvariantRegionReport& rep) {
  if (rep.violations == 0) return;
  const auto& b = *rep.first_violation;
  throw InvariantRegionViolation(std::to_string(rep.violations) + " boundary violations, first at (" +
                                 std::to_string(b.at.rho) + ", " + std::to_string(b.at.u) + ")");
}

// ---------------------------------------------------------------------------
// Blow-up charts

struct BlowupPoint {
  double r = 0.0;
  double rho_bar0 = 0.0;
  double u_bar0 = 1.0;
  double eps_bar = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
  double xi = 0.0;
};

/// Time derivative of every BlowupPoint coordinate.
using BlowupRate = BlowupPoint;

enum class BlowupStage { Raw, Desingularized, TimeRescaled };

inline double sphere_defect(const BlowupPoint& b) {
  return b.rho_bar0 * b.rho_bar0 + b.u_bar0 * b.u_bar0 + b.eps_bar * b.eps_bar - 1.0;
}

/// Sign quantity of the inner layer: xi w1 - w2 for a < 0, w2 for a > 0. The time
/// rescaling divides by its negative.
inline double inner_layer_quantity(const BlowupPoint& b, const Params& p) {
  return p.a < 0.0 ? b.xi * b.w1 - b.w2 : b.w2;
}

namespace detail {

inline void require_interior(const BlowupPoint& b) {
  if (!(b.r > 0.0 && b.rho_bar0 > 0.0 && b.eps_bar > 0.0))
    throw DesingularizationError("raw blow-up field needs r, rho_bar0, eps_bar > 0");
}

inline double crowding_factor(const BlowupPoint& b, const Params& p) {
  return 1.0 - std::pow(b.rho_bar0 / (b.eps_bar * p.rho_bar), p.a);
}

inline BlowupRate raw_neg_a(const BlowupPoint& b, const Params& p) {
  require_interior(b);
  const double r = b.r, R = b.rho_bar0, U = b.u_bar0, E = b.eps_bar, xi = b.xi;
  const double X = r * U + xi;
  const double P = X * b.w1 - b.w2;
  const double Phi = crowding_factor(b, p);
  BlowupRate d;
  d.r = P * E * U / R - r * E * U + r * R * R * X * Phi - xi * r * R * R - r * E * R * b.w1;
  d.rho_bar0 = R * X * Phi - xi * R - E * b.w1 - P * E * U / r + E * R * U - R * R * R * X * Phi +
               xi * R * R * R + E * R * R * b.w1;
  d.u_bar0 = P * E / (r * R) - E - P * E * U * U / (r * R) + E * U * U + xi * R * R * U -
             R * R * U * X * Phi + E * R * U * b.w1;  // sign fixed by tangency to the sphere
  d.eps_bar = -P * E * E * U / (r * R) + E * E * U - E * R * R * X * Phi + xi * E * R * R +
              E * E * R * b.w1;
  d.w1 = -r * R;
  d.w2 = -r * R * X;
  d.xi = r * E;
  return d;
}

/// Equal scaling exponents, so the normalization kappa is 1 on the sphere.
inline BlowupRate raw_pos_a(const BlowupPoint& b, const Params& p) {
  require_interior(b);
  const double r = b.r, R = b.rho_bar0, U = b.u_bar0, E = b.eps_bar, xi = b.xi;
  const double Q = r * U * b.w1 - b.w2;
  const double Phi = crowding_factor(b, p);
  BlowupRate d;
  d.r = U * Q * E / R + R * R * U * r * r * Phi - xi * r * R * R - R * r * E * b.w1;
  d.rho_bar0 = -U * Q * E / r - R * R * R * U * r * Phi + xi * R * R * R + R * R * E * b.w1 +
               R * U * r * Phi - xi * R - E * b.w1;
  d.u_bar0 = -U * U * Q * E / (R * r) - R * R * U * U * r * Phi + xi * R * R * U +
             R * U * E * b.w1 + Q * E / (R * r);
  d.eps_bar = -U * Q * E * E / (R * r) - R * R * U * r * E * Phi + xi * E * R * R +
              R * E * E * b.w1;
  d.w1 = -r * R;
  d.w2 = -r * r * U * R;
  d.xi = r * E;
  return d;
}

inline BlowupRate scaled(BlowupRate d, double k) {
  d.r *= k;
  d.rho_bar0 *= k;
  d.u_bar0 *= k;
  d.eps_bar *= k;
  d.w1 *= k;
  d.w2 *= k;
  d.xi *= k;
  return d;
}

/// r -> 0 limit of the desingularized field, keeping the term linear in r of dr/dtau.
inline BlowupRate desingularized_leading(const BlowupPoint& b, const Params& p) {
  double P0 = p.a < 0.0 ? b.xi * b.w1 - b.w2 : -b.w2;
  BlowupRate d;
  d.r = P0 * b.u_bar0 * b.r;
  d.rho_bar0 = -b.u_bar0 * b.rho_bar0 * P0;
  d.u_bar0 = P0 * (1.0 - b.u_bar0 * b.u_bar0);
  d.eps_bar = -b.eps_bar * b.u_bar0 * P0;
  d.w1 = d.w2 = d.xi = 0.0;
  return d;
}

inline double rescale_divisor(const BlowupPoint& b, const Params& p) {
  double q = inner_layer_quantity(b, p);
  if (!(q < 0.0))
    throw DesingularizationError(p.a < 0.0 ? "time rescaling needs xi w1 - w2 < 0"
                                           : "time rescaling needs w2 < 0");
  return -q;
}

inline BlowupRate blowup_field(const BlowupPoint& b, const Params& p, BlowupStage stage) {
  validate(p);
  if (stage == BlowupStage::Raw) return p.a < 0.0 ? raw_neg_a(b, p) : raw_pos_a(b, p);
  BlowupRate d;
  if (b.r == 0.0) {
    d = desingularized_leading(b, p);
  } else {
    d = scaled(p.a < 0.0 ? raw_neg_a(b, p) : raw_pos_a(b, p), b.r * b.rho_bar0 / b.eps_bar);
  }
  if (stage == BlowupStage::TimeRescaled) d = scaled(d, 1.0 / rescale_divisor(b, p));
  return d;
}

}  // namespace detail

inline BlowupRate blowup_field_neg_a(const BlowupPoint& b, const Params& p, BlowupStage stage) {
  if (!(p.a < 0.0)) throw ConfigError("blowup_field_neg_a needs a < 0");
  return detail::blowup_field(b, p, stage);
}

inline BlowupRate blowup_field_pos_a(const BlowupPoint& b, const Params& p, BlowupStage stage) {
  if (!(p.a > 0.0)) throw ConfigError("blowup_field_pos_a needs a > 0");
  return detail::blowup_field(b, p, stage);
}

/// Leading-order (in r) field, defined on the whole chart including r < 0 and the
/// coordinate planes. Used for linearization at the poles.
inline BlowupRate blowup_leading_order(const BlowupPoint& b, const Params& p, BlowupStage stage) {
  if (stage == BlowupStage::Raw) throw ConfigError("leading-order field exists only after desingularization");
  BlowupRate d = detail::desingularized_leading(b, p);
  if (stage == BlowupStage::TimeRescaled) d = detail::scaled(d, 1.0 / detail::rescale_divisor(b, p));
  return d;
}

// ---------------------------------------------------------------------------
// Spectra at the poles

enum class FixedPoint { NegA_plus1, NegA_minus1, PosA_plus1, PosA_minus1 };

inline const char* to_string(FixedPoint w) {
  switch (w) {
    case FixedPoint::NegA_plus1: return "neg_a_u+1";
    case FixedPoint::NegA_minus1: return "neg_a_u-1";
    case FixedPoint::PosA_plus1: return "pos_a_u+1";
    case FixedPoint::PosA_minus1: return "pos_a_u-1";
  }
  return "?";
}

struct SpectrumReport {
  FixedPoint which;
  BlowupPoint point;
  std::vector<double> eigenvalues;  ///< ordered as `directions`
  std::vector<std::string> directions;
  std::vector<double> expected;
  double max_error;
};

/// Central-difference Jacobian of the time-rescaled leading-order field at a pole.
/// The slow variables are frozen at values with the inner-layer sign; they drop out
/// after rescaling.
inline SpectrumReport fixed_point_spectrum(FixedPoint which, const Params& p, double tol = 1e-6) {
  const bool neg = which == FixedPoint::NegA_plus1 || which == FixedPoint::NegA_minus1;
  const double u0 = (which == FixedPoint::NegA_plus1 || which == FixedPoint::PosA_plus1) ? 1.0 : -1.0;
  Params q = p;
  if (neg != (q.a < 0.0)) q.a = neg ? -std::abs(q.a) : std::abs(q.a);
  BlowupPoint b{0.0, 0.0, u0, 0.0, 0.0, neg ? 1.0 : -1.0, 0.0};

  const int n = neg ? 4 : 3;
  const char* tags[] = {"rho_bar0", "u_bar0", "eps_bar", "r"};
  auto get = [](const BlowupPoint& x, int i) {
    switch (i) {
      case 0: return x.rho_bar0;
      case 1: return x.u_bar0;
      case 2: return x.eps_bar;
      default: return x.r;
    }
  };
  auto set = [](BlowupPoint& x, int i, double v) {
    switch (i) {
      case 0: x.rho_bar0 = v; break;
      case 1: x.u_bar0 = v; break;
      case 2: x.eps_bar = v; break;
      default: x.r = v; break;
    }
  };
  const double h = 1e-6;
  Eigen::MatrixXd J(n, n);
  for (int j = 0; j < n; ++j) {
    BlowupPoint bp = b, bm = b;
    set(bp, j, get(b, j) + h);
    set(bm, j, get(b, j) - h);
    auto fp = blowup_leading_order(bp, q, BlowupStage::TimeRescaled);
    auto fm = blowup_leading_order(bm, q, BlowupStage::TimeRescaled);
    for (int i = 0; i < n; ++i) J(i, j) = (get(fp, i) - get(fm, i)) / (2.0 * h);
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(J);
  SpectrumReport rep{which, b, std::vector<double>(n, NAN), {}, {}, 0.0};
  for (int k = 0; k < n; ++k) {
    Eigen::Index dir = 0;
    es.eigenvectors().col(k).cwiseAbs().maxCoeff(&dir);
    rep.eigenvalues[static_cast<std::size_t>(dir)] = es.eigenvalues()[k].real();
  }
  for (int i = 0; i < n; ++i) rep.directions.push_back(tags[i]);
  rep.expected = neg ? std::vector<double>{u0, 2.0 * u0, u0, -u0}
                     : std::vector<double>{-u0, -2.0 * u0, -u0};
  for (int i = 0; i < n; ++i) {
    double e = std::abs(rep.eigenvalues[i] - rep.expected[i]);
    rep.max_error = std::isfinite(e) ? std::max(rep.max_error, e) : INFINITY;
  }
  if (!(rep.max_error <= tol))
    throw SpectrumMismatch(std::string(to_string(which)) + ": spectrum off by " +
                           std::to_string(rep.max_error));
  return rep;
}

// ---------------------------------------------------------------------------
// Heteroclinic orbit on the sphere r = 0

struct SphereOrbit {
  std::vector<double> tau;
  std::vector<std::array<double, 3>> points;  ///< (rho_bar0, u_bar0, eps_bar)
  double max_sphere_defect = 0.0;             ///< before each projection
  long projections = 0;
  double closest_to_equator = INFINITY;       ///< distance to (1, 0, 0)
  bool monotone = true;
};

/// Follows the time-rescaled flow from the unstable pole, displaced by `offset` along
/// the rho_bar0 direction (tilted toward eps_bar by `tilt` radians), to the stable pole.
inline SphereOrbit heteroclinic_on_sphere(const Params& p, double offset = 1e-6, double tilt = 0.0,
                                          double max_tau = 200.0) {
  validate(p);
  const bool neg = p.a < 0.0;
  const double from = neg ? 1.0 : -1.0, to = -from;
  BlowupPoint frozen{0.0, 0.0, from, 0.0, 0.0, neg ? 1.0 : -1.0, 0.0};

  ode::Vec y(3);
  y << offset * std::cos(tilt), from * std::sqrt(1.0 - offset * offset), offset * std::sin(tilt);
  SphereOrbit orb;
  auto field = [&](double, const ode::Vec& x) {
    BlowupPoint b = frozen;
    b.rho_bar0 = x[0];
    b.u_bar0 = x[1];
    b.eps_bar = x[2];
    auto d = blowup_leading_order(b, p, BlowupStage::TimeRescaled);
    ode::Vec out(3);
    out << d.rho_bar0, d.u_bar0, d.eps_bar;
    return out;
  };
  auto project = [&](ode::Vec& x) {
    double nrm = x.norm();
    orb.max_sphere_defect = std::max(orb.max_sphere_defect, std::abs(nrm * nrm - 1.0));
    x /= nrm;
    x[0] = std::max(x[0], 0.0);
    x[2] = std::max(x[2], 0.0);
    ++orb.projections;
  };
  auto stop = [&](double, const ode::Vec& x) { return std::abs(x[1] - to) < 1e-6; };
  ode::Options opt;
  opt.h_max = 0.05;
  auto res = ode::integrate(field, 0.0, y, max_tau, opt, project, stop);
  if (!res.stopped) throw HeteroclinicNotFound("orbit did not reach the stable pole");
  double prev = from;
  for (const auto& s : res.path) {
    orb.tau.push_back(s.t);
    orb.points.push_back({s.y[0], s.y[1], s.y[2]});
    if ((s.y[1] - prev) * (to - from) < 0.0) orb.monotone = false;
    prev = s.y[1];
    double d = std::sqrt((s.y[0] - 1.0) * (s.y[0] - 1.0) + s.y[1] * s.y[1] + s.y[2] * s.y[2]);
    orb.closest_to_equator = std::min(orb.closest_to_equator, d);
  }
  return orb;
}

// ---------------------------------------------------------------------------
// Viscous profiles of the self-similar regularization eps U'' = (DF(U) - xi) U'

struct ProfileDiagnostics {
  double max_rho;
  double peak_xi;
  double mass_excess;     ///< integral of rho minus the step background
  double boundary_error;  ///< distance of the first interior nodes from U_L, U_R
  double inner_sign_max;  ///< max of the inner-layer quantity where rho exceeds both end densities
  int iterations;
  double residual;
};

struct ViscousProfile {
  double eps;
  double center;
  std::vector<double> xi;
  std::vector<double> rho;
  std::vector<double> m;
  ProfileDiagnostics diag;

  State at(std::size_t i) const { return {rho[i], m[i] / rho[i]}; }
};

struct ProfileOptions {
  double half_width = 25.0;  ///< domain is center +- half_width
  double cells_per_eps = 100.0;
  double core_eps = 12.0;  ///< uniform fine mesh on center +- core_eps * eps
  double growth = 1.03;
  double h_max = 0.05;
  int max_iterations = 2000;
  double tol = 1e-8;  ///< on the Newton step, relative to the peak density
  double seed_width = 2.0;  ///< width of the initial mass bump, in units of eps
};

namespace detail {

inline std::vector<double> graded_mesh(double center, double eps, const ProfileOptions& o) {
  const double h = eps / o.cells_per_eps;
  std::vector<double> right{0.0};
  while (right.back() < o.core_eps * eps) right.push_back(right.back() + h);
  double step = h;
  while (right.back() < o.half_width) {
    step = std::min(step * o.growth, o.h_max);
    right.push_back(right.back() + step);
  }
  right.back() = o.half_width;
  std::vector<double> xi;
  for (std::size_t i = right.size(); i-- > 1;) xi.push_back(center - right[i]);
  for (double d : right) xi.push_back(center + d);
  return xi;
}

inline double interp(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), at);
  std::size_t j = static_cast<std::size_t>(it - x.begin());
  double t = (at - x[j - 1]) / (x[j] - x[j - 1]);
  return y[j - 1] + t * (y[j] - y[j - 1]);
}

/// Residual eps U'' - (F(U) - xi U)' - U at interior nodes, and its Jacobian.
inline void profile_system(const std::vector<double>& xi, const std::vector<double>& rho,
                           const std::vector<double>& m, double eps, const Params& p,
                           Eigen::VectorXd& res, Eigen::SparseMatrix<double>* jac) {
  const std::size_t n = xi.size();
  const Eigen::Index nu = static_cast<Eigen::Index>(2 * (n - 2));
  res.setZero(nu);
  std::vector<Vec2> G(n);
  std::vector<Mat2> DG(n);
  for (std::size_t i = 0; i < n; ++i) {
    State s{rho[i], m[i] / rho[i]};
    Vec2 f = flux(s, p);
    G[i] = {f[0] - xi[i] * rho[i], f[1] - xi[i] * m[i]};
    if (jac) {
      DG[i] = jacobian(s, p);
      DG[i][0][0] -= xi[i];
      DG[i][1][1] -= xi[i];
    }
  }
  std::vector<Eigen::Triplet<double>> trip;
  if (jac) trip.reserve(static_cast<std::size_t>(nu) * 6);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double hl = xi[i] - xi[i - 1], hr = xi[i + 1] - xi[i];
    double cl = 2.0 * eps / (hl * (hl + hr)), cr = 2.0 * eps / (hr * (hl + hr));
    double inv = 1.0 / (hl + hr);
    const double U[2][3] = {{rho[i - 1], rho[i], rho[i + 1]}, {m[i - 1], m[i], m[i + 1]}};
    Eigen::Index row = static_cast<Eigen::Index>(2 * (i - 1));
    for (int k = 0; k < 2; ++k) {
      res[row + k] = cl * U[k][0] - (cl + cr) * U[k][1] + cr * U[k][2] -
                     (G[i + 1][k] - G[i - 1][k]) * inv - U[k][1];
    }
    if (!jac) continue;
    for (int k = 0; k < 2; ++k) {
      trip.emplace_back(row + k, row + k, -(cl + cr) - 1.0);
      for (int j = 0; j < 2; ++j) {
        if (i >= 2) {
          double v = (k == j ? cl : 0.0) + DG[i - 1][k][j] * inv;
          trip.emplace_back(row + k, row - 2 + j, v);
        }
        if (i + 2 < n) {
          double v = (k == j ? cr : 0.0) - DG[i + 1][k][j] * inv;
          trip.emplace_back(row + k, row + 2 + j, v);
        }
      }
    }
  }
  if (jac) {
    jac->resize(nu, nu);
    jac->setFromTriplets(trip.begin(), trip.end());
  }
}

/// Pseudo-transient continuation of U_s = residual(U) to its steady state.
inline int relax_profile(ViscousProfile& pr, const State& l, const State& r, const Params& p,
                         const ProfileOptions& o, double& final_res) {
  const std::size_t n = pr.xi.size();
  Eigen::VectorXd res, res_try;
  Eigen::SparseMatrix<double> J;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  double dt = 1e-3;
  profile_system(pr.xi, pr.rho, pr.m, pr.eps, p, res, &J);
  double rn = res.lpNorm<Eigen::Infinity>();
  const double scale = std::max({l.rho, r.rho, std::abs(l.rho * l.u), std::abs(r.rho * r.u)});
  for (int it = 1; it <= o.max_iterations; ++it) {
    Eigen::SparseMatrix<double> A(J.rows(), J.cols());
    A.setIdentity();
    A = A / dt - J;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw ProfileNotFound("singular Newton matrix");
    Eigen::VectorXd d = lu.solve(res);
    std::vector<double> rho2 = pr.rho, m2 = pr.m;
    bool ok = true;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      rho2[i] += d[static_cast<Eigen::Index>(2 * (i - 1))];
      m2[i] += d[static_cast<Eigen::Index>(2 * (i - 1) + 1)];
      if (!(rho2[i] > 0.5 * pr.rho[i] && rho2[i] < 2.0 * pr.rho[i] + scale) || !std::isfinite(m2[i]))
        ok = false;
    }
    double rn2 = INFINITY;
    if (ok) {
      profile_system(pr.xi, rho2, m2, pr.eps, p, res_try, nullptr);
      rn2 = res_try.lpNorm<Eigen::Infinity>();
      if (!std::isfinite(rn2)) ok = false;
    }
    if (!ok) {
      dt *= 0.25;
      if (dt < 1e-14) throw ProfileNotFound("pseudo-time step collapsed");
      continue;
    }
    pr.rho = std::move(rho2);
    pr.m = std::move(m2);
    double step = d.lpNorm<Eigen::Infinity>();
    dt = std::min(1e12, dt * std::clamp(rn / std::max(rn2, 1e-300), 0.5, 4.0));
    profile_system(pr.xi, pr.rho, pr.m, pr.eps, p, res, &J);
    rn = res.lpNorm<Eigen::Infinity>();
    double peak = *std::max_element(pr.rho.begin(), pr.rho.end());
    if (step <= o.tol * std::max(scale, peak) && dt >= 1e2) {
      final_res = rn;
      return it;
    }
  }
  throw ProfileNotFound("no steady profile within the iteration budget");
}

inline ProfileDiagnostics profile_diagnostics(const ViscousProfile& pr, const State& l,
                                              const State& r, const Params& p) {
  ProfileDiagnostics d{};
  const std::size_t n = pr.xi.size();
  std::size_t pk = static_cast<std::size_t>(std::max_element(pr.rho.begin(), pr.rho.end()) - pr.rho.begin());
  d.max_rho = pr.rho[pk];
  d.peak_xi = pr.xi[pk];
  long double mass = 0.0L;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double mid = 0.5 * (pr.xi[i] + pr.xi[i + 1]);
    double bg = mid < pr.center ? l.rho : r.rho;
    mass += (0.5 * (pr.rho[i] + pr.rho[i + 1]) - bg) * (pr.xi[i + 1] - pr.xi[i]);
  }
  d.mass_excess = static_cast<double>(mass);
  auto dist = [](const State& a, const State& b) {
    return std::max(std::abs(a.rho - b.rho), std::abs(a.u - b.u));
  };
  d.boundary_error = std::max(dist(pr.at(1), l), dist(pr.at(n - 2), r));
  const double thresh = std::max(l.rho, r.rho);
  d.inner_sign_max = -INFINITY;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(pr.rho[i] > thresh)) continue;
    double dr = (pr.rho[i + 1] - pr.rho[i - 1]) / (pr.xi[i + 1] - pr.xi[i - 1]);
    double dm = (pr.m[i + 1] - pr.m[i - 1]) / (pr.xi[i + 1] - pr.xi[i - 1]);
    Vec2 w = rh_deficit(pr.at(i), pr.xi[i], p);
    w[0] -= pr.eps * dr;
    w[1] -= pr.eps * dm;
    BlowupPoint b;
    b.w1 = w[0];
    b.w2 = w[1];
    b.xi = pr.xi[i];
    d.inner_sign_max = std::max(d.inner_sign_max, inner_layer_quantity(b, p));
  }
  return d;
}

}  // namespace detail

/// Steady profile at one eps. A previous profile, when given, seeds the iteration after
/// stretching its layer to the new eps.
inline ViscousProfile viscous_profile(const State& l, const State& r, const Params& p, double eps,
                                      const ViscousProfile* seed = nullptr,
                                      const ProfileOptions& o = {}) {
  if (!(eps > 0.0 && eps <= 0.1)) throw ConfigError("eps must lie in (0, 0.1]");
  DeltaShock ds = make_delta_shock(l, r, p);
  ViscousProfile pr;
  pr.eps = eps;
  pr.center = ds.speed;
  pr.xi = detail::graded_mesh(pr.center, eps, o);
  const std::size_t n = pr.xi.size();
  pr.rho.resize(n);
  pr.m.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double z = (pr.xi[i] - pr.center) / eps;
    if (seed) {
      double zs = pr.center + z * seed->eps;
      double k = seed->eps / eps;
      double bg_rho = z < 0.0 ? l.rho : r.rho;
      double rs = detail::interp(seed->xi, seed->rho, zs);
      double ms = detail::interp(seed->xi, seed->m, zs);
      if (rs > bg_rho) {
        // concentrated part grows like 1/eps; u is kept
        pr.rho[i] = bg_rho + k * (rs - bg_rho);
        pr.m[i] = pr.rho[i] * ms / rs;
      } else {
        pr.rho[i] = rs;
        pr.m[i] = ms;
      }
    } else {
      // smoothed step carrying the delta's mass in a bump moving at its speed
      double t = 0.5 * (1.0 + std::tanh(z));
      double bump = ds.weight_rate / (std::sqrt(M_PI) * o.seed_width * eps) *
                    std::exp(-z * z / (o.seed_width * o.seed_width));
      pr.rho[i] = (1.0 - t) * l.rho + t * r.rho + bump;
      pr.m[i] = (1.0 - t) * l.rho * l.u + t * r.rho * r.u + ds.speed * bump;
    }
  }
  pr.rho.front() = l.rho;
  pr.m.front() = l.rho * l.u;
  pr.rho.back() = r.rho;
  pr.m.back() = r.rho * r.u;
  double final_res = 0.0;
  int its = detail::relax_profile(pr, l, r, p, o, final_res);
  pr.diag = detail::profile_diagnostics(pr, l, r, p);
  pr.diag.iterations = its;
  pr.diag.residual = final_res;
  return pr;
}

/// Independent profiles for each eps. Seeding from the previous rung is slower here: the
/// peak does not grow like 1/eps, so the stretched seed overshoots.
inline std::vector<ViscousProfile> viscous_profile_family(const State& l, const State& r,
                                                          const Params& p,
                                                          const std::vector<double>& eps_list,
                                                          const ProfileOptions& o = {}) {
  std::vector<ViscousProfile> out;
  for (double e : eps_list) out.push_back(viscous_profile(l, r, p, e, nullptr, o));
  return out;
}

}  // namespace riemann_lab
