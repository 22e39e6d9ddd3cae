#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "carom/ode.hpp"

namespace carom {

struct FlowState {
  Eigen::VectorXd x;
  Eigen::VectorXd p;
  double t = 0.0;
};

// Dissipative Hamiltonian system on R^n x R^n.  Two damping models:
//
//   constant rate:  xdot = dH/dp,  pdot = -dH/dx - c p
//
//   general factor f with one-form data (eta_x, eta_p):
//       xdot = dH/dp + (p.xdot - H) eta_p        (implicit in xdot)
//       pdot = -dH/dx + f p - (p.xdot - H) eta_x
//   along such a flow f - <(eta_x,eta_p),(xdot,pdot)> stays constant.
//
// The constant-rate system with rate c coincides with the general system with
// f = -c and eta = 0; the two conventions place the damping with opposite
// signs, and this library treats `c` as the decay rate of the symplectic area
// (the tangent map satisfies Jt' O J = e^{-ct} O).
class ConformalSystem {
 public:
  using Scalar = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
  using Field = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
  // Full second-derivative matrix [[H_xx, H_xp], [H_px, H_pp]] (2n x 2n).
  using HessFn =
      std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

  static ConformalSystem constant_rate(int n, Scalar H, Field dHdx, Field dHdp, double c);
  // User-supplied factor f; eta_p may be empty ({}) meaning identically zero.
  static ConformalSystem general(int n, Scalar H, Field dHdx, Field dHdp, Scalar f,
                                 Field eta_x, Field eta_p);
  // Factor chosen pointwise so that f - iota_X eta == structure_constant.
  static ConformalSystem pinned(int n, Scalar H, Field dHdx, Field dHdp,
                                double structure_constant, Field eta_x, Field eta_p);

  ConformalSystem& with_hessian(HessFn hess) {
    hess_ = std::move(hess);
    return *this;
  }

  int dimension() const { return n_; }
  bool has_constant_rate() const { return kind_ == Kind::Constant; }
  double rate() const { return c_; }
  bool eta_p_zero() const { return !eta_p_; }

  double hamiltonian(const Eigen::VectorXd& x, const Eigen::VectorXd& p) const {
    return H_(x, p);
  }
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x, const Eigen::VectorXd& p) const;

  struct Derivative {
    Eigen::VectorXd xdot;
    Eigen::VectorXd pdot;
    double f = 0.0;         // damping factor in effect
    double iota_eta = 0.0;  // eta contracted with (xdot, pdot)
    double excess = 0.0;    // p.xdot - H  (the Lagrangian for Tonelli H)
  };
  // Right-hand side of the equations of motion at one state; throws
  // ImplicitSingularError when the implicit xdot system is ill-conditioned.
  Derivative derivative(const Eigen::VectorXd& x, const Eigen::VectorXd& p) const;

  // Max finite-difference antisymmetry defect of d(eta) over sample points.
  double eta_closedness_defect(const std::vector<Eigen::VectorXd>& points) const;

 private:
  enum class Kind { Constant, General, Pinned };
  ConformalSystem() = default;

  Kind kind_ = Kind::Constant;
  int n_ = 0;
  Scalar H_;
  Field dHdx_, dHdp_;
  HessFn hess_;
  double c_ = 0.0;  // constant rate, or pinned structure constant
  Scalar f_;
  Field eta_x_, eta_p_;
};

// Integrate the constant-rate system for a duration t (local error <= tol).
FlowState flow_constant(const ConformalSystem& sys, const FlowState& state, double t,
                        double tol = 1e-10);

// Integrate either damping model; monitors the constancy of f - iota_X eta
// along the trajectory (to 10*tol) and throws ModelError when the supplied
// data violate it.
FlowState flow_general(const ConformalSystem& sys, const FlowState& state, double t,
                       double tol = 1e-10);

// Flow together with the Jacobian of the time-t map, propagated by the
// variational equations through the same accepted steps.
std::pair<FlowState, Eigen::MatrixXd> tangent_flow(const ConformalSystem& sys,
                                                   const FlowState& state, double t,
                                                   double tol = 1e-10);

// Same, observed at a whole schedule of times (one integration pass).
std::vector<std::pair<FlowState, Eigen::MatrixXd>> tangent_flow_path(
    const ConformalSystem& sys, const FlowState& state, const std::vector<double>& times,
    double tol = 1e-10);

// Max-norm of J^T O J - e^{-ct} O, with O the canonical skew form on R^{2m}.
// Throws ShapeError unless J is square of even dimension.
double conformal_defect(const Eigen::MatrixXd& J, double c, double t);

// Time-periodic one-degree-of-freedom mechanical system on the unit circle:
// u'' = -dV/du(u, t) with V 1-periodic in both u and t.
class NewtonSystem {
 public:
  using Potential = std::function<double(double u, double t)>;
  using Force = std::function<double(double u, double t)>;

  NewtonSystem(Potential V, Force dVdu);  // checks 1-periodicity by sampling

  double potential(double u, double t) const { return V_(u, t); }
  double force(double u, double t) const { return dVdu_(u, t); }

 private:
  Potential V_;
  Force dVdu_;
};

struct StrobeState {
  double u = 0.0;
  double p = 0.0;
};

// Time-1 stroboscopic map of the Newton system, u reduced mod 1.
StrobeState newton_strobe(const NewtonSystem& sys, const StrobeState& state,
                          double tol = 1e-10);

// Iterated stroboscopic map: returns the orbit (u_k, p_k), k = 0..count.
std::vector<StrobeState> newton_strobe_orbit(const NewtonSystem& sys, const StrobeState& state,
                                             int count, double tol = 1e-10);

}  // namespace carom
