#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "errors.hpp"

namespace riemann_lab::ode {

using Vec = Eigen::VectorXd;
using Field = std::function<Vec(double, const Vec&)>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h0 = 1e-3;
  double h_min = 1e-14;
  double h_max = 1.0;
  long max_steps = 1'000'000;
};

struct Sample {
  double t;
  Vec y;
};

struct Result {
  std::vector<Sample> path;
  long rejected = 0;
  bool stopped = false;  ///< the stop predicate fired
};

/// Dormand-Prince 5(4) with standard step control. `project` runs after each accepted
/// step; `stop` ends the integration when it returns true.
inline Result integrate(const Field& f, double t0, Vec y0, double t_end, const Options& opt,
                        const std::function<void(Vec&)>& project = {},
                        const std::function<bool(double, const Vec&)>& stop = {}) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Result res;
  double t = t0;
  Vec y = std::move(y0);
  res.path.push_back({t, y});
  const double dir = t_end >= t0 ? 1.0 : -1.0;
  double h = std::min(opt.h0, std::abs(t_end - t0));
  Vec k1 = f(t, y);
  for (long n = 0; n < opt.max_steps; ++n) {
    if (dir * (t_end - t) <= 0.0) return res;
    h = std::min(h, std::abs(t_end - t));
    double hs = dir * h;
    Vec k2 = f(t + c2 * hs, y + hs * (a21 * k1));
    Vec k3 = f(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    Vec k4 = f(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    Vec k5 = f(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Vec k6 = f(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vec y5 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Vec k7 = f(t + hs, y5);
    Vec err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double en = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      en = std::max(en, std::abs(err[i]) / sc);
    }
    if (!std::isfinite(en)) en = 1e10;
    if (en <= 1.0) {
      t += hs;
      y = std::move(y5);
      if (project) {
        project(y);
        k1 = f(t, y);
      } else {
        k1 = std::move(k7);
      }
      res.path.push_back({t, y});
      if (stop && stop(t, y)) {
        res.stopped = true;
        return res;
      }
    } else {
      ++res.rejected;
    }
    double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h = std::min(opt.h_max, h * fac);
    if (h < opt.h_min) throw StepSizeUnderflow("adaptive step fell below h_min");
  }
  throw StepSizeUnderflow("step budget exhausted");
}

}  // namespace riemann_lab::ode
