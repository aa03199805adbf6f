#pragma once

// Globally adaptive Gauss-Kronrod 10/21 on finite intervals, for real or
// complex integrands. Node tables come from Boost.Math; the driver keeps a
// max-heap of panels keyed by local error and refines the worst one until the
// total estimate meets the tolerance or the evaluation budget runs out.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <tuple>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace heisenberg::quad {

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  double l1 = 0.0;  // integral of |f|
  std::size_t evals = 0;
  bool converged = false;
};

template <class T>
struct Panel {
  double a = 0.0, b = 0.0;
  T value{};
  double error = 0.0;
  double l1 = 0.0;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// One GK21 panel with the QUADPACK error heuristic.
template <class F>
auto gk21(F& f, double a, double b) {
  using T = decltype(f(0.0));
  using K = boost::math::quadrature::gauss_kronrod<double, 21>;
  using G = boost::math::quadrature::gauss<double, 10>;
  const auto& x = K::abscissa();
  const auto& wk = K::weights();
  const auto& wg = G::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);

  T f0 = f(c);
  T kron = f0 * wk[0];
  T gauss{};
  double l1 = std::abs(f0) * wk[0];
  T fv[21];
  fv[0] = f0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const T fp = f(c + h * x[i]);
    const T fm = f(c - h * x[i]);
    fv[2 * i - 1] = fp;
    fv[2 * i] = fm;
    kron += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 1) gauss += (fp + fm) * wg[i / 2];
  }
  const T mean = kron * 0.5;
  double asc = std::abs(f0 - mean) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i)
    asc += (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean)) * wk[i];

  const double ah = std::abs(h);
  double err = std::abs(kron - gauss) * ah;
  const double resasc = asc * ah;
  const double resabs = l1 * ah;
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(50 * eps * resabs, err);
  return Panel<T>{a, b, kron * h, err, resabs};
}

struct Options {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  double l1_floor = 0.0;  // stop once the error is below l1_floor * integral of |f|
  std::size_t max_evals = 2'000'000;
};

/// Integrate f over the partition given by `points` (sorted, at least two).
template <class F>
auto integrate(F f, const std::vector<double>& points, const Options& opt) {
  using T = decltype(f(0.0));
  Result<T> out;
  std::priority_queue<Panel<T>> heap;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] == points[i]) continue;
    heap.push(gk21(f, points[i], points[i + 1]));
    out.evals += 21;
  }
  auto totals = [&]() {
    T v{};
    double e = 0.0, l = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      l += copy.top().l1;
      copy.pop();
    }
    return std::tuple{v, e, l};
  };
  auto [value, error, l1] = totals();
  while (!heap.empty()) {
    const double target = std::max({opt.abs_tol, opt.rel_tol * std::abs(value), opt.l1_floor * l1});
    if (error <= target) {
      out.converged = true;
      break;
    }
    if (out.evals + 42 > opt.max_evals) break;
    Panel<T> worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // panel at machine resolution
    heap.pop();
    auto left = gk21(f, worst.a, mid);
    auto right = gk21(f, mid, worst.b);
    out.evals += 42;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    // Re-sum periodically so running updates do not drift.
    if (out.evals % (42 * 256) == 0) std::tie(value, error, l1) = totals();
  }
  std::tie(value, error, l1) = totals();
  out.value = value;
  out.error = error;
  out.l1 = l1;
  if (!out.converged)
    out.converged = error <= std::max({opt.abs_tol, opt.rel_tol * std::abs(value), opt.l1_floor * l1});
  return out;
}

template <class F>
auto integrate(F f, double a, double b, const Options& opt) {
  return integrate(f, std::vector<double>{a, b}, opt);
}

}  // namespace heisenberg::quad
