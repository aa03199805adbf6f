#pragma once

// Carnot-Caratheodory distance to the identity: inversion of mu, the critical
// angle, and the two branches (interior / cut locus).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "heisenberg/detail/trig.hpp"
#include "heisenberg/errors.hpp"
#include "heisenberg/group_model.hpp"

namespace heisenberg {

using detail::kPi;

/// An angle in [0, pi] stored together with its complement eps = pi - theta.
/// Near pi, eps carries the precision: theta alone cannot resolve 1e-16 of pi.
struct Angle {
  double theta = 0.0;
  double eps = kPi;

  static Angle from_theta(double th) { return {th, kPi - th}; }
  static Angle from_eps(double e) { return {kPi - e, e}; }
  bool near_pi() const noexcept { return eps < kPi / 2; }
};

/// mu(w) = w / sin^2 w - cot w on (-pi, pi).
inline double mu(double omega) {
  if (!(std::abs(omega) < kPi)) throw DomainError("mu: |omega| must be < pi");
  return detail::mu(omega);
}

inline double mu(const Angle& a) {
  return a.near_pi() ? detail::mu_near_pi(a.eps) : detail::mu(a.theta);
}

inline double mu_prime(const Angle& a) {
  return a.near_pi() ? detail::mu_prime_near_pi(a.eps) : detail::mu_prime(a.theta);
}

/// theta / sin theta, finite for theta < pi.
inline double sinc_inv(const Angle& a) {
  return a.near_pi() ? detail::sinc_inv_near_pi(a.eps) : detail::sinc_inv(a.theta);
}

/// theta cot theta
inline double w_cot(const Angle& a) {
  return a.near_pi() ? detail::w_cot_near_pi(a.eps) : detail::w_cot(a.theta);
}

namespace detail {

// Bisect to width 1e-3, then safeguarded Newton. f returns (value, derivative)
// and is monotone on [lo, hi] with a sign change.
template <class F>
double bracketed_newton(F f, double lo, double hi) {
  auto value = [&](double x) { return f(x).first; };
  const auto width_ok = [](double a, double b) { return std::abs(b - a) < 1e-3; };
  std::uintmax_t iters = 200;
  auto br = boost::math::tools::bisect(value, lo, hi, width_ok, iters);
  double a = std::min(br.first, br.second), b = std::max(br.first, br.second);
  if (!(a < b)) return a;
  std::uintmax_t newton_iters = 100;
  return boost::math::tools::newton_raphson_iterate(f, 0.5 * (a + b), a, b,
                                                    std::numeric_limits<double>::digits - 2, newton_iters);
}

}  // namespace detail

/// Inverse of mu on [0, inf), returned with its complement.
inline Angle mu_inv_angle(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("mu_inv: argument must be finite and >= 0");
  if (x == 0.0) return Angle::from_theta(0.0);
  const double mid = kPi / 2;  // mu(pi/2) = pi/2
  if (x <= mid) {
    auto f = [x](double th) { return std::pair{detail::mu(th) - x, detail::mu_prime(th)}; };
    return Angle::from_theta(detail::bracketed_newton(f, 0.0, mid));
  }
  // Near the pole mu ~ pi/eps^2: solve log mu(pi - e^u) = log x, nearly linear in u.
  auto f = [x](double u) {
    const double e = std::exp(u);
    const double m = detail::mu_near_pi(e);
    return std::pair{std::log(m) - std::log(x), -e * detail::mu_prime_near_pi(e) / m};
  };
  const double seed = std::sqrt(kPi / x);
  double u_lo = std::log(std::min(seed, mid)) - 1.0;
  while (f(u_lo).first < 0.0) u_lo -= 2.0;
  return Angle::from_eps(std::exp(detail::bracketed_newton(f, u_lo, std::log(mid))));
}

inline double mu_inv(double x) { return mu_inv_angle(x).theta; }

enum class Branch { Interior, CutLocus };

inline const char* to_string(Branch b) { return b == Branch::Interior ? "Interior" : "CutLocus"; }

struct GeodesicData {
  double theta = 0.0;
  double epsilon = kPi;
  double dSq = 0.0;
  Branch branch = Branch::Interior;
  double epsilonStar = 1.0;

  Angle angle() const noexcept { return {theta, epsilon}; }
};

/// sum_{j<l} a_j mu(a_j pi) r_j^2: the height above which r_l = 0 points sit on the cut locus.
inline double cut_threshold(const GroupSignature& sig, const RadialPoint& p) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < sig.blocks(); ++j) s += sig.a(j) * detail::mu(sig.a(j) * kPi) * p.r[j] * p.r[j];
  return s;
}

namespace detail {

// sum_j a_j mu(a_j theta) r_j^2 and its theta-derivative.
inline std::pair<double, double> height_and_slope(const GroupSignature& sig, const RadialPoint& p, const Angle& th) {
  double f = 0.0, df = 0.0;
  const std::size_t l = sig.blocks();
  for (std::size_t j = 0; j < l; ++j) {
    const double r2 = p.r[j] * p.r[j];
    if (r2 == 0.0) continue;
    const double aj = sig.a(j);
    if (j + 1 == l) {
      f += mu(th) * r2;
      df += mu_prime(th) * r2;
    } else {
      f += aj * detail::mu(aj * th.theta) * r2;
      df += aj * aj * detail::mu_prime(aj * th.theta) * r2;
    }
  }
  return {f, df};
}

inline double sinc_inv_block(const GroupSignature& sig, std::size_t j, const Angle& th) {
  if (j + 1 == sig.blocks()) return heisenberg::sinc_inv(th);
  return detail::sinc_inv(sig.a(j) * th.theta);
}

}  // namespace detail

/// d^2 on the interior branch as sum (a_j theta / sin a_j theta)^2 r_j^2.
inline double dsq_interior(const GroupSignature& sig, const RadialPoint& p, const Angle& th) {
  double s = 0.0;
  for (std::size_t j = 0; j < sig.blocks(); ++j) {
    const double q = detail::sinc_inv_block(sig, j, th);
    s += q * q * p.r[j] * p.r[j];
  }
  return s;
}

/// d^2 on the interior branch as theta (|t| + sum a_j cot(a_j theta) r_j^2).
inline double dsq_interior_alt(const GroupSignature& sig, const RadialPoint& p, const Angle& th) {
  if (th.theta == 0.0) return p.r_total_sq();
  double s = std::abs(p.t);
  for (std::size_t j = 0; j < sig.blocks(); ++j) {
    const double r2 = p.r[j] * p.r[j];
    if (r2 == 0.0) continue;
    if (j + 1 == sig.blocks()) s += w_cot(th) / th.theta * r2;
    else s += sig.a(j) * std::cos(sig.a(j) * th.theta) / std::sin(sig.a(j) * th.theta) * r2;
  }
  return th.theta * s;
}

inline GeodesicData make_cut_locus(const GroupSignature& sig, const RadialPoint& p) {
  double s = std::abs(p.t);
  for (std::size_t j = 0; j + 1 < sig.blocks(); ++j) {
    const double aj = sig.a(j);
    s += aj * std::cos(aj * kPi) / std::sin(aj * kPi) * p.r[j] * p.r[j];
  }
  return {kPi, 0.0, kPi * s, Branch::CutLocus, 0.0};
}

inline GeodesicData solve_geodesic(const GroupSignature& sig, const RadialPoint& p) {
  if (p.r.size() != sig.blocks()) throw DomainError("solve_geodesic: point/signature block mismatch");
  if (p.is_origin()) throw DomainError("solve_geodesic: origin has d = 0");
  const double t = std::abs(p.t);
  const double rl = p.r_last();
  if (p.r_total_sq() == 0.0) return {kPi, 0.0, kPi * t, Branch::CutLocus, 0.0};
  if (t == 0.0) return {0.0, kPi, p.r_total_sq(), Branch::Interior, 1.0};
  const double tc = cut_threshold(sig, p);
  if (rl == 0.0 && t >= tc) return make_cut_locus(sig, p);

  const Angle half = Angle::from_theta(kPi / 2);
  Angle th;
  if (detail::height_and_slope(sig, p, half).first >= t) {
    auto f = [&](double x) {
      auto [v, dv] = detail::height_and_slope(sig, p, Angle::from_theta(x));
      return std::pair{v - t, dv};
    };
    th = Angle::from_theta(detail::bracketed_newton(f, 0.0, kPi / 2));
  } else if (rl == 0.0) {
    // No pole: the height stays below tc; solve in eps on [0, pi/2].
    auto f = [&](double e) {
      auto [v, dv] = detail::height_and_slope(sig, p, Angle::from_eps(e));
      return std::pair{v - t, -dv};
    };
    th = Angle::from_eps(detail::bracketed_newton(f, 0.0, kPi / 2));
  } else {
    // Pole of the last block: height ~ tc + pi r_l^2 / eps^2; work in u = log eps.
    auto f = [&](double u) {
      const double e = std::exp(u);
      auto [v, dv] = detail::height_and_slope(sig, p, Angle::from_eps(e));
      return std::pair{std::log(v) - std::log(t), -e * dv / v};
    };
    const double seed = t > tc ? std::sqrt(kPi * rl * rl / (t - tc)) : kPi / 2;
    double u_lo = std::log(std::min(seed, kPi / 2)) - 1.0;
    while (f(u_lo).first < 0.0) u_lo -= 2.0;
    th = Angle::from_eps(std::exp(detail::bracketed_newton(f, u_lo, std::log(kPi / 2))));
  }
  GeodesicData g;
  g.theta = th.theta;
  g.epsilon = th.eps;
  g.dSq = dsq_interior(sig, p, th);
  g.branch = Branch::Interior;
  g.epsilonStar = 1.0 / sinc_inv(th);
  return g;
}

/// Residual of the critical-angle equation at the solved angle.
inline double geodesic_residual(const GroupSignature& sig, const RadialPoint& p, const GeodesicData& g) {
  return detail::height_and_slope(sig, p, g.angle()).first - std::abs(p.t);
}

inline double cc_distance_sq(const GroupSignature& sig, const RadialPoint& p) {
  if (p.is_origin()) return 0.0;
  return solve_geodesic(sig, p).dSq;
}

inline double cc_distance(const GroupSignature& sig, const RadialPoint& p) { return std::sqrt(cc_distance_sq(sig, p)); }

}  // namespace heisenberg
