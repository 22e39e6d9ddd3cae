#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace carom {

// Monotone cubic Hermite interpolation (Fritsch-Carlson slopes).  Used for
// the arc-length inverse and for tabulated monotone data; never overshoots.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  std::size_t interval(double x) const;
  std::vector<double> x_, y_, m_;
};

inline MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  m_.assign(n, 0.0);
  if (n < 2) return;
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  m_[0] = d[0];
  m_[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i)
    m_[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      m_[i] = m_[i + 1] = 0.0;
      continue;
    }
    double a = m_[i] / d[i], b = m_[i + 1] / d[i];
    double s = a * a + b * b;
    if (s > 9.0) {
      double t = 3.0 / std::sqrt(s);
      m_[i] = t * a * d[i];
      m_[i + 1] = t * b * d[i];
    }
  }
}

inline std::size_t MonotoneCubic::interval(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

inline double MonotoneCubic::operator()(double x) const {
  std::size_t i = interval(x);
  double h = x_[i + 1] - x_[i];
  double t = (x - x_[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

inline double MonotoneCubic::derivative(double x) const {
  std::size_t i = interval(x);
  double h = x_[i + 1] - x_[i];
  double t = (x - x_[i]) / h;
  double t2 = t * t;
  double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
  double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
  return d00 * y_[i] + d10 * m_[i] + d01 * y_[i + 1] + d11 * m_[i + 1];
}

// Deterministic parallel loop: the work partition depends only on (n, threads)
// and each item writes results keyed by its index.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  unsigned t = std::min<unsigned>(threads, std::thread::hardware_concurrency() > 0
                                               ? std::thread::hardware_concurrency() * 2
                                               : 8);
  t = std::min<std::size_t>(t, n);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned k = 0; k < t; ++k) {
    pool.emplace_back([&, k]() {
      for (std::size_t i = k; i < n; i += t) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Bisection refinement of a bracketed sign change, then returns the midpoint.
// f(lo) and f(hi) must have opposite signs.
template <typename F>
double bisect(F&& f, double lo, double hi, double flo, double tol_x) {
  for (int iter = 0; iter < 200 && (hi - lo) > tol_x; ++iter) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace carom
