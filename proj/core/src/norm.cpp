#include "carom/norm.hpp"

#include <cmath>

#include "carom/errors.hpp"

namespace carom {

namespace {
constexpr double kTwoPi = 6.283185307179586476925;
}

MinkowskiNorm MinkowskiNorm::euclidean() { return MinkowskiNorm(); }

MinkowskiNorm MinkowskiNorm::scaled(double factor) {
  if (!(factor > 0.0)) throw GeometryError("norm scale factor must be positive");
  MinkowskiNorm n;
  n.kind_ = NormKind::Scaled;
  n.factor_ = factor;
  return n;
}

MinkowskiNorm MinkowskiNorm::p_gauge(double p) {
  if (!(p > 1.0)) throw GeometryError("p-gauge requires p > 1 for strict convexity");
  MinkowskiNorm n;
  n.kind_ = NormKind::PGauge;
  n.p_ = p;
  return n;
}

MinkowskiNorm MinkowskiNorm::radial_gauge(double rho0,
                                          std::vector<std::pair<double, double>> fourier) {
  MinkowskiNorm n;
  n.kind_ = NormKind::RadialGauge;
  n.rho0_ = rho0;
  n.fourier_ = std::move(fourier);
  n.check_convexity();
  return n;
}

double MinkowskiNorm::rho(double th) const {
  double r = rho0_;
  for (std::size_t k = 0; k < fourier_.size(); ++k) {
    double m = static_cast<double>(k + 1);
    r += fourier_[k].first * std::cos(m * th) + fourier_[k].second * std::sin(m * th);
  }
  return r;
}

double MinkowskiNorm::drho(double th) const {
  double r = 0.0;
  for (std::size_t k = 0; k < fourier_.size(); ++k) {
    double m = static_cast<double>(k + 1);
    r += m * (-fourier_[k].first * std::sin(m * th) + fourier_[k].second * std::cos(m * th));
  }
  return r;
}

double MinkowskiNorm::ddrho(double th) const {
  double r = 0.0;
  for (std::size_t k = 0; k < fourier_.size(); ++k) {
    double m = static_cast<double>(k + 1);
    r -= m * m *
         (fourier_[k].first * std::cos(m * th) + fourier_[k].second * std::sin(m * th));
  }
  return r;
}

void MinkowskiNorm::check_convexity() const {
  // Unit-ball boundary r(th) = 1/rho(th); strict convexity of a radial curve
  // needs r^2 + 2 r'^2 - r r'' > 0.  Also verified with a midpoint test.
  const int n = 2048;
  for (int i = 0; i < n; ++i) {
    double th = kTwoPi * i / n;
    double g = rho(th);
    if (!(g > 1e-9)) throw GeometryError("radial gauge must be positive");
    double r = 1.0 / g;
    double r1 = -drho(th) / (g * g);
    double r2 = (2.0 * drho(th) * drho(th) - g * ddrho(th)) / (g * g * g);
    if (!(r * r + 2.0 * r1 * r1 - r * r2 > 1e-12))
      throw GeometryError("radial gauge unit ball is not strictly convex");
  }
  const int m = 256;
  for (int i = 0; i < m; ++i) {
    double t0 = kTwoPi * i / m, t1 = kTwoPi * ((i + 7) % m) / m;
    Vec2 a = unit_dir(t0) / rho(t0);
    Vec2 b = unit_dir(t1) / rho(t1);
    Vec2 mid = (a + b) * 0.5;
    if (!((*this)(mid) < 1.0 - 1e-12))
      throw GeometryError("radial gauge unit ball fails the midpoint convexity test");
  }
}

double MinkowskiNorm::operator()(const Vec2& v) const {
  switch (kind_) {
    case NormKind::Euclidean:
      return norm(v);
    case NormKind::Scaled:
      return factor_ * norm(v);
    case NormKind::PGauge:
      return std::pow(std::pow(std::abs(v.x), p_) + std::pow(std::abs(v.y), p_), 1.0 / p_);
    case NormKind::RadialGauge: {
      double n = norm(v);
      if (n == 0.0) return 0.0;
      return n * rho(angle_of(v));
    }
  }
  return 0.0;
}

Vec2 MinkowskiNorm::gradient(const Vec2& v) const {
  switch (kind_) {
    case NormKind::Euclidean:
      return normalized(v);
    case NormKind::Scaled:
      return normalized(v) * factor_;
    case NormKind::PGauge: {
      double N = (*this)(v);
      if (N == 0.0) return {0.0, 0.0};
      auto comp = [&](double c) {
        return std::copysign(std::pow(std::abs(c), p_ - 1.0), c);
      };
      double scale = std::pow(N, 1.0 - p_);
      return {scale * comp(v.x), scale * comp(v.y)};
    }
    case NormKind::RadialGauge: {
      double th = angle_of(v);
      Vec2 u = normalized(v);
      return u * rho(th) + perp(u) * drho(th);
    }
  }
  return {0.0, 0.0};
}

bool MinkowskiNorm::is_symmetric() const {
  if (kind_ != NormKind::RadialGauge) return true;
  for (int i = 0; i < 64; ++i) {
    double th = kTwoPi * i / 64;
    if (std::abs(rho(th) - rho(th + 0.5 * kTwoPi)) > 1e-12) return false;
  }
  return true;
}

}  // namespace carom
