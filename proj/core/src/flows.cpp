#include "carom/flows.hpp"

#include <cmath>
#include <utility>

#include "carom/errors.hpp"
#include "carom/rng.hpp"

namespace carom {

namespace {

void check_state(const ConformalSystem& sys, const FlowState& st) {
  if (st.x.size() != sys.dimension() || st.p.size() != sys.dimension())
    throw ShapeError("state dimension does not match the system");
  if (!st.x.allFinite() || !st.p.allFinite() || !std::isfinite(st.t))
    throw DomainError("flow state must be finite");
}

std::vector<Eigen::VectorXd> default_eta_samples(int n) {
  SeedSequence seq(0x0e7aULL);
  auto rng = seq.stream(1);
  std::uniform_real_distribution<double> box(-1.5, 1.5);
  std::vector<Eigen::VectorXd> pts;
  for (int k = 0; k < 12; ++k) {
    Eigen::VectorXd z(2 * n);
    for (int i = 0; i < 2 * n; ++i) z(i) = box(rng);
    pts.push_back(std::move(z));
  }
  return pts;
}

}  // namespace

ConformalSystem ConformalSystem::constant_rate(int n, Scalar H, Field dHdx, Field dHdp,
                                               double c) {
  ConformalSystem s;
  s.kind_ = Kind::Constant;
  s.n_ = n;
  s.H_ = std::move(H);
  s.dHdx_ = std::move(dHdx);
  s.dHdp_ = std::move(dHdp);
  s.c_ = c;
  return s;
}

ConformalSystem ConformalSystem::general(int n, Scalar H, Field dHdx, Field dHdp, Scalar f,
                                         Field eta_x, Field eta_p) {
  ConformalSystem s;
  s.kind_ = Kind::General;
  s.n_ = n;
  s.H_ = std::move(H);
  s.dHdx_ = std::move(dHdx);
  s.dHdp_ = std::move(dHdp);
  s.f_ = std::move(f);
  s.eta_x_ = std::move(eta_x);
  s.eta_p_ = std::move(eta_p);
  if (s.eta_closedness_defect(default_eta_samples(n)) > 1e-6)
    throw ModelError("supplied one-form is not closed");
  return s;
}

ConformalSystem ConformalSystem::pinned(int n, Scalar H, Field dHdx, Field dHdp,
                                        double structure_constant, Field eta_x, Field eta_p) {
  ConformalSystem s;
  s.kind_ = Kind::Pinned;
  s.n_ = n;
  s.H_ = std::move(H);
  s.dHdx_ = std::move(dHdx);
  s.dHdp_ = std::move(dHdp);
  s.c_ = structure_constant;
  s.eta_x_ = std::move(eta_x);
  s.eta_p_ = std::move(eta_p);
  if (s.eta_closedness_defect(default_eta_samples(n)) > 1e-6)
    throw ModelError("supplied one-form is not closed");
  return s;
}

Eigen::MatrixXd ConformalSystem::hessian(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& p) const {
  if (hess_) return hess_(x, p);
  // Central finite differences of the analytic gradient.
  const int n = n_;
  const double h = 1e-6 * (1.0 + std::max(x.cwiseAbs().maxCoeff(), p.cwiseAbs().maxCoeff()));
  Eigen::MatrixXd M(2 * n, 2 * n);
  auto grad = [&](const Eigen::VectorXd& xx, const Eigen::VectorXd& pp) {
    Eigen::VectorXd g(2 * n);
    g.head(n) = dHdx_(xx, pp);
    g.tail(n) = dHdp_(xx, pp);
    return g;
  };
  for (int j = 0; j < 2 * n; ++j) {
    Eigen::VectorXd xp = x, pp = p, xm = x, pm = p;
    if (j < n) {
      xp(j) += h;
      xm(j) -= h;
    } else {
      pp(j - n) += h;
      pm(j - n) -= h;
    }
    M.col(j) = (grad(xp, pp) - grad(xm, pm)) / (2.0 * h);
  }
  return 0.5 * (M + M.transpose());
}

ConformalSystem::Derivative ConformalSystem::derivative(const Eigen::VectorXd& x,
                                                        const Eigen::VectorXd& p) const {
  Derivative d;
  const double H = H_(x, p);
  const Eigen::VectorXd gx = dHdx_(x, p);
  const Eigen::VectorXd gp = dHdp_(x, p);

  Eigen::VectorXd ep;
  if (eta_p_) ep = eta_p_(x, p);
  const bool has_ep = ep.size() > 0 && ep.cwiseAbs().maxCoeff() > 0.0;

  if (has_ep) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n_, n_) - ep * p.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > 1e12)
      throw ImplicitSingularError("implicit velocity system is numerically singular");
    d.xdot = svd.solve(gp - H * ep);
  } else {
    d.xdot = gp;
  }

  d.excess = p.dot(d.xdot) - H;

  Eigen::VectorXd ex;
  if (eta_x_) ex = eta_x_(x, p);
  if (ex.size() == 0) ex = Eigen::VectorXd::Zero(n_);
  if (ep.size() == 0) ep = Eigen::VectorXd::Zero(n_);

  switch (kind_) {
    case Kind::Constant:
      d.f = -c_;
      break;
    case Kind::General:
      d.f = f_(x, p);
      break;
    case Kind::Pinned: {
      const double denom = 1.0 - ep.dot(p);
      if (std::abs(denom) < 1e-12)
        throw ImplicitSingularError("pinned damping factor is undefined here");
      d.f = (c_ + ex.dot(d.xdot) + ep.dot(-gx - d.excess * ex)) / denom;
      break;
    }
  }

  d.pdot = -gx + d.f * p - d.excess * ex;
  d.iota_eta = ex.dot(d.xdot) + ep.dot(d.pdot);
  return d;
}

double ConformalSystem::eta_closedness_defect(
    const std::vector<Eigen::VectorXd>& points) const {
  if (!eta_x_ && !eta_p_) return 0.0;
  const int n = n_;
  auto comps = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd xx = z.head(n), pp = z.tail(n);
    Eigen::VectorXd e(2 * n);
    e.head(n) = eta_x_ ? eta_x_(xx, pp) : Eigen::VectorXd::Zero(n);
    e.tail(n) = eta_p_ ? eta_p_(xx, pp) : Eigen::VectorXd::Zero(n);
    return e;
  };
  double worst = 0.0;
  const double h = 1e-5;
  for (const Eigen::VectorXd& z : points) {
    Eigen::MatrixXd D(2 * n, 2 * n);  // D(a, b) = d eta_a / d z_b
    for (int b = 0; b < 2 * n; ++b) {
      Eigen::VectorXd zp = z, zm = z;
      zp(b) += h;
      zm(b) -= h;
      D.col(b) = (comps(zp) - comps(zm)) / (2.0 * h);
    }
    worst = std::max(worst, (D - D.transpose()).cwiseAbs().maxCoeff());
  }
  return worst;
}

namespace {

Eigen::VectorXd pack(const FlowState& st) {
  Eigen::VectorXd y(st.x.size() + st.p.size());
  y.head(st.x.size()) = st.x;
  y.tail(st.p.size()) = st.p;
  return y;
}

FlowState unpack(const Eigen::VectorXd& y, int n, double t) {
  FlowState st;
  st.x = y.head(n);
  st.p = y.tail(n);
  st.t = t;
  return st;
}

}  // namespace

FlowState flow_constant(const ConformalSystem& sys, const FlowState& state, double t,
                        double tol) {
  if (!sys.has_constant_rate())
    throw ModelError("constant-rate damping required for this flow");
  check_state(sys, state);
  const int n = sys.dimension();
  OdeRhs rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    auto d = sys.derivative(y.head(n), y.tail(n));
    dy.resize(2 * n);
    dy.head(n) = d.xdot;
    dy.tail(n) = d.pdot;
  };
  OdeOptions opts;
  opts.abs_tol = tol;
  opts.rel_tol = tol;
  Eigen::VectorXd y = dp54_integrate(rhs, state.t, state.t + t, pack(state), opts);
  return unpack(y, n, state.t + t);
}

FlowState flow_general(const ConformalSystem& sys, const FlowState& state, double t,
                       double tol) {
  check_state(sys, state);
  const int n = sys.dimension();
  OdeRhs rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    auto d = sys.derivative(y.head(n), y.tail(n));
    dy.resize(2 * n);
    dy.head(n) = d.xdot;
    dy.tail(n) = d.pdot;
  };
  bool have_ref = false;
  double ref = 0.0;
  OdeObserver watch = [&](double, const Eigen::VectorXd& y) {
    auto d = sys.derivative(y.head(n), y.tail(n));
    const double value = d.f - d.iota_eta;
    if (!have_ref) {
      ref = value;
      have_ref = true;
    } else if (std::abs(value - ref) > 10.0 * tol * std::max(1.0, std::abs(ref))) {
      throw ModelError("damping factor minus contracted one-form drifted along the flow");
    }
  };
  OdeOptions opts;
  opts.abs_tol = tol;
  opts.rel_tol = tol;
  Eigen::VectorXd y = dp54_integrate(rhs, state.t, state.t + t, pack(state), opts, watch);
  return unpack(y, n, state.t + t);
}

namespace {

// Augmented right-hand side: state plus tangent matrix, column-major.
OdeRhs tangent_rhs(const ConformalSystem& sys) {
  const int n = sys.dimension();
  return [&sys, n](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const Eigen::VectorXd x = y.head(n);
    const Eigen::VectorXd p = y.segment(n, n);
    auto d = sys.derivative(x, p);

    const Eigen::MatrixXd M = sys.hessian(x, p);
    Eigen::MatrixXd A(2 * n, 2 * n);
    A.topRows(n) = M.bottomRows(n);   // d(xdot)/d(x,p)
    A.bottomRows(n) = -M.topRows(n);  // d(pdot)/d(x,p), damping next
    A.bottomRightCorner(n, n) -= sys.rate() * Eigen::MatrixXd::Identity(n, n);

    const Eigen::Map<const Eigen::MatrixXd> J(y.data() + 2 * n, 2 * n, 2 * n);
    dy.resize(y.size());
    dy.head(n) = d.xdot;
    dy.segment(n, n) = d.pdot;
    Eigen::Map<Eigen::MatrixXd>(dy.data() + 2 * n, 2 * n, 2 * n) = A * J;
  };
}

Eigen::VectorXd tangent_pack(const FlowState& st, int n) {
  Eigen::VectorXd y(2 * n + 4 * n * n);
  y.head(n) = st.x;
  y.segment(n, n) = st.p;
  Eigen::Map<Eigen::MatrixXd>(y.data() + 2 * n, 2 * n, 2 * n) =
      Eigen::MatrixXd::Identity(2 * n, 2 * n);
  return y;
}

}  // namespace

std::pair<FlowState, Eigen::MatrixXd> tangent_flow(const ConformalSystem& sys,
                                                   const FlowState& state, double t,
                                                   double tol) {
  if (!sys.has_constant_rate())
    throw ModelError("constant-rate damping required for this flow");
  check_state(sys, state);
  const int n = sys.dimension();
  OdeOptions opts;
  opts.abs_tol = tol;
  opts.rel_tol = tol;
  Eigen::VectorXd y =
      dp54_integrate(tangent_rhs(sys), state.t, state.t + t, tangent_pack(state, n), opts);
  Eigen::MatrixXd J = Eigen::Map<Eigen::MatrixXd>(y.data() + 2 * n, 2 * n, 2 * n);
  return {unpack(y.head(2 * n), n, state.t + t), J};
}

std::vector<std::pair<FlowState, Eigen::MatrixXd>> tangent_flow_path(
    const ConformalSystem& sys, const FlowState& state, const std::vector<double>& times,
    double tol) {
  if (!sys.has_constant_rate())
    throw ModelError("constant-rate damping required for this flow");
  check_state(sys, state);
  const int n = sys.dimension();
  OdeOptions opts;
  opts.abs_tol = tol;
  opts.rel_tol = tol;
  OdeRhs rhs = tangent_rhs(sys);

  std::vector<std::pair<FlowState, Eigen::MatrixXd>> out;
  Eigen::VectorXd y = tangent_pack(state, n);
  double t0 = state.t;
  for (double t1 : times) {
    if (t1 < t0) throw DomainError("observation times must be nondecreasing");
    y = dp54_integrate(rhs, t0, t1, y, opts);
    t0 = t1;
    Eigen::MatrixXd J = Eigen::Map<Eigen::MatrixXd>(y.data() + 2 * n, 2 * n, 2 * n);
    out.emplace_back(unpack(y.head(2 * n), n, t1), J);
  }
  return out;
}

double conformal_defect(const Eigen::MatrixXd& J, double c, double t) {
  if (J.rows() != J.cols() || J.rows() % 2 != 0)
    throw ShapeError("tangent matrix must be square of even dimension");
  const int n = static_cast<int>(J.rows()) / 2;
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  omega.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  omega.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return (J.transpose() * omega * J - std::exp(-c * t) * omega).cwiseAbs().maxCoeff();
}

NewtonSystem::NewtonSystem(Potential V, Force dVdu) : V_(std::move(V)), dVdu_(std::move(dVdu)) {
  const double us[] = {0.0, 0.13, 0.37, 0.71};
  const double ts[] = {0.0, 0.29, 0.55, 0.83};
  for (double u : us) {
    for (double t : ts) {
      if (std::abs(V_(u + 1.0, t) - V_(u, t)) > 1e-10 ||
          std::abs(V_(u, t + 1.0) - V_(u, t)) > 1e-10)
        throw ModelError("potential must be 1-periodic in position and time");
    }
  }
}

StrobeState newton_strobe(const NewtonSystem& sys, const StrobeState& state, double tol) {
  if (!std::isfinite(state.u) || !std::isfinite(state.p))
    throw DomainError("strobe state must be finite");
  OdeRhs rhs = [&sys](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(2);
    dy(0) = y(1);
    dy(1) = -sys.force(y(0), t);
  };
  OdeOptions opts;
  opts.abs_tol = tol;
  opts.rel_tol = tol;
  Eigen::VectorXd y(2);
  y << state.u, state.p;
  y = dp54_integrate(rhs, 0.0, 1.0, y, opts);
  return {y(0) - std::floor(y(0)), y(1)};
}

std::vector<StrobeState> newton_strobe_orbit(const NewtonSystem& sys, const StrobeState& state,
                                             int count, double tol) {
  std::vector<StrobeState> orbit;
  orbit.reserve(count + 1);
  StrobeState cur{state.u - std::floor(state.u), state.p};
  orbit.push_back(cur);
  for (int k = 0; k < count; ++k) {
    cur = newton_strobe(sys, cur, tol);
    orbit.push_back(cur);
  }
  return orbit;
}

}  // namespace carom
