#include "carom/action.hpp"

#include <cmath>
#include <utility>

#include "carom/errors.hpp"

namespace carom {

namespace {

constexpr double kCoincidentTol = 1e-12;

void check_tuple(const BoundaryCurve& curve, const std::vector<double>& s) {
  if (s.size() < 2) throw DegenerateChordError("closed polygon needs at least two vertices");
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = curve.point(s[i]);
    const Vec2 b = curve.point(s[(i + 1) % n]);
    if (dist(a, b) < kCoincidentTol * curve.perimeter())
      throw DegenerateChordError("consecutive polygon vertices coincide");
  }
}

}  // namespace

ActionFunctional ActionFunctional::euclidean(BoundaryCurve curve) {
  return ActionFunctional(ChordGeometry::Euclidean, std::move(curve));
}

ActionFunctional ActionFunctional::minkowski(BoundaryCurve curve, MinkowskiNorm norm) {
  ActionFunctional f(ChordGeometry::Minkowski, std::move(curve));
  f.norm_ = std::move(norm);
  return f;
}

ActionFunctional ActionFunctional::hyperbolic(BoundaryCurve curve) {
  ActionFunctional f(ChordGeometry::Hyperbolic, curve);
  f.hyp_.emplace(std::move(curve));
  return f;
}

double ActionFunctional::chord(double sa, double sb) const {
  switch (geom_) {
    case ChordGeometry::Euclidean:
      return dist(curve_.point(sa), curve_.point(sb));
    case ChordGeometry::Minkowski:
      return norm_(curve_.point(sb) - curve_.point(sa));
    case ChordGeometry::Hyperbolic:
      return hyp_->chord_length(sa, sb);
  }
  return 0.0;
}

bool ActionFunctional::symmetric() const {
  if (geom_ == ChordGeometry::Minkowski) return norm_.is_symmetric();
  return true;
}

double action_value(const ActionFunctional& F, const std::vector<double>& s) {
  const std::size_t n = s.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += F.chord(s[i], s[(i + 1) % n]);
  return total;
}

namespace {

// Analytic derivatives of the Euclidean chord polygon length.  With
// u = unit vector along the chord from a to b:
//   dL/ds_b = T_b . u                     dL/ds_a = -T_a . u
//   d2L/ds_b2 = kappa_b (N_b . u) + (1 - (T_b . u)^2) / L
//   d2L/ds_a ds_b = -(T_a . T_b - (u . T_a)(u . T_b)) / L
ActionResult action_euclidean(const ActionFunctional& F, const std::vector<double>& s) {
  const BoundaryCurve& curve = F.curve();
  const int n = static_cast<int>(s.size());
  ActionResult out;
  out.gradient.assign(n, 0.0);
  out.hessian = Eigen::MatrixXd::Zero(n, n);

  std::vector<CurvePoint> cp(n);
  for (int i = 0; i < n; ++i) cp[i] = curve.eval(s[i]);

  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const Vec2 c = cp[j].point - cp[i].point;
    const double ell = norm(c);
    const Vec2 u = c / ell;
    out.value += ell;

    const double tau_a = dot(cp[i].tangent, u);
    const double tau_b = dot(cp[j].tangent, u);
    out.gradient[i] += -tau_a;
    out.gradient[j] += tau_b;

    const double haa =
        -cp[i].curvature * dot(cp[i].normal, u) + (1.0 - tau_a * tau_a) / ell;
    const double hbb =
        cp[j].curvature * dot(cp[j].normal, u) + (1.0 - tau_b * tau_b) / ell;
    const double hab = -(dot(cp[i].tangent, cp[j].tangent) - tau_a * tau_b) / ell;
    out.hessian(i, i) += haa;
    out.hessian(j, j) += hbb;
    out.hessian(i, j) += hab;
    out.hessian(j, i) += hab;
  }
  return out;
}

ActionResult action_finite_difference(const ActionFunctional& F, const std::vector<double>& s) {
  const int n = static_cast<int>(s.size());
  const double h = 1e-6 * F.curve().perimeter();
  ActionResult out;
  out.value = action_value(F, s);
  out.gradient.assign(n, 0.0);
  out.hessian = Eigen::MatrixXd::Zero(n, n);

  auto at = [&](int i, double di, int j, double dj) {
    std::vector<double> t = s;
    t[i] += di;
    if (j >= 0) t[j] += dj;
    return action_value(F, t);
  };

  for (int i = 0; i < n; ++i) {
    const double fp = at(i, h, -1, 0.0);
    const double fm = at(i, -h, -1, 0.0);
    out.gradient[i] = (fp - fm) / (2.0 * h);
    out.hessian(i, i) = (fp - 2.0 * out.value + fm) / (h * h);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double fpp = at(i, h, j, h);
      const double fpm = at(i, h, j, -h);
      const double fmp = at(i, -h, j, h);
      const double fmm = at(i, -h, j, -h);
      const double hij = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      out.hessian(i, j) = hij;
      out.hessian(j, i) = hij;
    }
  }
  return out;
}

}  // namespace

ActionResult action(const ActionFunctional& F, const std::vector<double>& s) {
  check_tuple(F.curve(), s);
  if (F.geometry() == ChordGeometry::Euclidean) return action_euclidean(F, s);
  return action_finite_difference(F, s);
}

ActionResult action_fd(const ActionFunctional& F, const std::vector<double>& s) {
  check_tuple(F.curve(), s);
  return action_finite_difference(F, s);
}

}  // namespace carom
