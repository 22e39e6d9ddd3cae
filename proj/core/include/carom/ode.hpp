#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "carom/errors.hpp"

namespace carom {

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 0.0;  // 0 chooses automatically
  long max_steps = 20000000L;
};

using OdeRhs = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;
using OdeObserver = std::function<void(double, const Eigen::VectorXd&)>;

// Embedded explicit Runge-Kutta pair of orders 5(4) with PI step control.
// Integrates y' = f(t, y) from t0 to t1 (either direction) and returns y(t1);
// the observer, when given, sees every accepted step including the last.
// Throws StiffnessError when the step size underflows or the step budget is
// exhausted before reaching t1.
inline Eigen::VectorXd dp54_integrate(const OdeRhs& f, double t0, double t1, Eigen::VectorXd y,
                                      const OdeOptions& opts = {},
                                      const OdeObserver& observer = {}) {
  if (t0 == t1) {
    if (observer) observer(t0, y);
    return y;
  }

  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  static constexpr double e1 = 5179.0 / 57600.0, e3 = 7571.0 / 16695.0, e4 = 393.0 / 640.0,
                          e5 = -92097.0 / 339200.0, e6 = 187.0 / 2100.0, e7 = 1.0 / 40.0;
  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

  const double dir = (t1 > t0) ? 1.0 : -1.0;
  const long nv = y.size();
  Eigen::VectorXd k1(nv), k2(nv), k3(nv), k4(nv), k5(nv), k6(nv), k7(nv), y5(nv), y4(nv),
      tmp(nv);

  double t = t0;
  f(t, y, k1);

  double h;
  if (opts.initial_step != 0.0) {
    h = std::abs(opts.initial_step) * dir;
  } else {
    const double ynorm = 1.0 + y.cwiseAbs().maxCoeff();
    const double fnorm = 1.0 + k1.cwiseAbs().maxCoeff();
    h = dir * std::min(std::abs(t1 - t0), 1e-2 * ynorm / fnorm);
  }

  if (observer) observer(t, y);

  double err_prev = 1.0;
  for (long step = 0; step < opts.max_steps; ++step) {
    if ((t + h - t1) * dir > 0.0) h = t1 - t;

    tmp = y + h * (a21 * k1);
    f(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, tmp, k6);
    y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + h, y5, k7);
    y4 = y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err2 = 0.0;
    for (long i = 0; i < nv; ++i) {
      const double sc =
          opts.abs_tol + opts.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
      const double e = (y5(i) - y4(i)) / sc;
      err2 += e * e;
    }
    double err = std::sqrt(err2 / static_cast<double>(nv));
    if (!std::isfinite(err)) err = 1e10;

    const double h_min = 1e-14 * std::max(1.0, std::abs(t));
    if (err <= 1.0) {
      t += h;
      y.swap(y5);
      k1.swap(k7);  // first-same-as-last
      if (observer) observer(t, y);
      if ((t - t1) * dir >= 0.0) return y;
      const double floor_err = std::max(err, 1e-10);
      double fac = 0.9 * std::pow(floor_err, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, 5.0);
      err_prev = floor_err;
      h *= fac;
    } else {
      if (std::abs(h) <= h_min)
        throw StiffnessError("step size underflow in adaptive integrator");
      double fac = std::clamp(0.9 * std::pow(err, -1.0 / 5.0), 0.1, 0.9);
      h *= fac;
    }
    if (std::abs(h) < h_min) throw StiffnessError("step size underflow in adaptive integrator");
  }
  throw StiffnessError("integrator exceeded its step budget");
}

}  // namespace carom
