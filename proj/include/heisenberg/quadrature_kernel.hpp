#pragma once

// Heat kernel p_h(z, t) at time h, by quadrature of its Fourier representation
//   p(z, t) = c_n * integral h(lambda) exp(phi(lambda)) dlambda,  c_n = 1 / (2 (4 pi)^{n+1}),
// along one of three horizontal lines: the real axis (direct), the line
// through the critical point i theta (shifted), or the line through the
// saddle of h exp(phi) on the imaginary axis (contour). A fourth route
// builds the kernel as a 1-D convolution of lower-dimensional kernels.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "heisenberg/errors.hpp"
#include "heisenberg/geometry.hpp"
#include "heisenberg/group_model.hpp"
#include "heisenberg/phase.hpp"
#include "heisenberg/quadrature.hpp"

namespace heisenberg {

enum class Method { Direct, ShiftedContour, SaddleContour, Convolution, Asymptotic };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Direct: return "direct";
    case Method::ShiftedContour: return "shifted";
    case Method::SaddleContour: return "contour";
    case Method::Convolution: return "conv";
    case Method::Asymptotic: return "asymptotic";
  }
  return "?";
}

struct KernelValue {
  double value = 0.0;      // may underflow to 0 far from the origin; log_value stays finite
  double log_value = 0.0;
  Method method = Method::Direct;
  double errEstimate = 0.0;  // absolute
  double relError = 0.0;
  double imagResidual = 0.0;  // |Im| / |Re| of the line integral
  double height = 0.0;        // Im lambda of the integration line
  std::size_t evals = 0;
  std::optional<GeodesicData> meta;
};

struct KernelOptions {
  double tol = 1e-10;
  std::size_t max_evals = 2'000'000;
  bool allow_delegate = true;  // direct hands over to a shifted line when over budget
};

/// log c_n with c_n = 1 / (2 (4 pi)^{n+1})
inline double log_normalization(int n) { return -std::log(2.0) - (n + 1) * std::log(4 * kPi); }

namespace detail {

inline void check_tol(double tol) {
  if (!(tol >= 1e-12 && tol <= 1e-3)) throw DomainError("kernel tolerance must lie in [1e-12, 1e-3]");
}

struct LineIntegral {
  cplx value{};
  double error = 0.0;
  double l1 = 0.0;
  std::size_t evals = 0;
  bool converged = false;
  bool over_budget = false;
  double half_width = 0.0;
  double log_scale = 0.0;  // value, error and l1 are relative to exp(log_scale)
};

// Curvature scale of the integrand on the line Im lambda = eta.
inline double line_scale(const GroupSignature& sig, const RadialPoint& p, const Angle& eta) {
  const double curv = -phi_second_at_zero(sig, p, eta);
  double s = 1.0;
  if (curv > 0) s = std::min(s, 1.0 / std::sqrt(curv));
  if (eta.near_pi()) s = std::min(s, eta.eps);
  return 0.25 * s;
}

inline std::vector<double> line_breakpoints(double scale, double L, double period) {
  std::vector<double> pts{-L, 0.0, L};
  for (double x = scale; x < L; x *= 2) {
    pts.push_back(x);
    pts.push_back(-x);
  }
  if (period > 0 && period < L) {
    const long m = static_cast<long>(L / period);
    for (long i = 1; i <= m; ++i) {
      pts.push_back(i * period);
      pts.push_back(-i * period);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Integrate ContourLine over R. The interval is grown until the modulus drops
// below exp(-42) of its value at 0, and the doubled interval is checked once.
inline LineIntegral integrate_line(const ContourLine& line, double scale, double freq, double tol,
                                   std::size_t budget) {
  LineIntegral out;
  auto logmod = [&](double x) { return line.log_integrand(x).real(); };
  const double ref = logmod(0.0);
  double L = scale;
  while (std::max(logmod(L), logmod(-L)) > ref - 42.0 && L < 1e5) L *= 2;
  out.half_width = L;
  const double period = freq > 0 ? 8 * kPi / freq : 0.0;
  if (period > 0 && 21.0 * (2 * L / period) > double(budget)) {
    out.over_budget = true;
    return out;
  }
  // Rescale by exp(-ref) so values of any size stay in range.
  auto f = [&](double x) { return std::exp(line.log_integrand(x) - ref); };
  quad::Options opt;
  opt.rel_tol = tol / 4;
  opt.l1_floor = 64 * std::numeric_limits<double>::epsilon();
  opt.max_evals = budget;
  auto main = quad::integrate(f, line_breakpoints(scale, L, period), opt);
  out.value = main.value;
  out.error = main.error;
  out.l1 = main.l1;
  out.evals = main.evals;

  auto tails = [&](double a, double b) {
    std::vector<double> pts{a, b};
    if (period > 0)
      for (double x = a + period; x < b && pts.size() < budget / 21; x += period) pts.push_back(x);
    std::sort(pts.begin(), pts.end());
    quad::Options o = opt;
    o.rel_tol = 0.0;
    o.abs_tol = 0.05 * tol * std::abs(out.value.real());
    o.max_evals = std::max<std::size_t>(budget / 4, 2000);
    auto r = quad::integrate(f, pts, o);
    auto l = quad::integrate([&](double x) { return f(-x); }, pts, o);
    out.value += r.value + l.value;
    out.error += r.error + l.error;
    out.l1 += r.l1 + l.l1;
    out.evals += r.evals + l.evals;
  };
  tails(L, 2 * L);
  out.error += 20 * std::numeric_limits<double>::epsilon() * out.l1;
  out.half_width = 2 * L;
  out.log_scale = ref;
  out.converged = out.value.real() > 0 && out.error <= tol * out.value.real();
  return out;
}

}  // namespace detail

namespace detail {

// Turn a line integral at height eta for the time-1 point p1 into a kernel value at time h.
inline KernelValue finish(const GroupSignature& sig, const ContourLine& line, const LineIntegral& I, double h,
                          Method m, double tol) {
  KernelValue kv;
  kv.method = m;
  kv.height = line.height().theta;
  kv.evals = I.evals;
  const double re = I.value.real();
  const double log_c = log_normalization(sig.n()) - (sig.n() + 1) * std::log(h);
  const double log_front = log_c + line.phi_at_height() + I.log_scale;
  if (!(re > 0)) {
    throw AccuracyError(std::string("kernel quadrature (") + to_string(m) + ") lost the sign of the integral", 0.0,
                        std::exp(log_front) * I.error);
  }
  kv.log_value = log_front + std::log(re);
  kv.value = std::exp(kv.log_value);
  kv.relError = I.error / re;
  kv.errEstimate = kv.relError * kv.value;
  kv.imagResidual = std::abs(I.value.imag()) / re;
  if (!I.converged || kv.relError > tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "rel. error %.3g against %.3g%s", kv.relError, tol,
                  I.converged ? "" : ", node budget exhausted");
    throw AccuracyError(std::string("kernel quadrature (") + to_string(m) + ") missed the tolerance: " + buf, kv.value,
                        kv.errEstimate);
  }
  return kv;
}

inline RadialPoint to_unit_time(const RadialPoint& p, double h) {
  if (!(h > 0)) throw DomainError("time h must be positive");
  return h == 1.0 ? p : dilate(p, 1.0 / std::sqrt(h));
}

inline LineIntegral integrate_at(const GroupSignature& sig, const RadialPoint& p1, const Angle& eta, double tol,
                                 std::size_t budget, const ContourLine& line) {
  return integrate_line(line, line_scale(sig, p1, eta), std::abs(p1.t) / 4, tol, budget);
}

}  // namespace detail

KernelValue kernel_shifted(const GroupSignature& sig, const RadialPoint& p, double h, const KernelOptions& opt);

/// Quadrature along the real axis.
inline KernelValue kernel_direct(const GroupSignature& sig, const RadialPoint& p, double h,
                                 const KernelOptions& opt = {}) {
  detail::check_tol(opt.tol);
  const RadialPoint p1 = detail::to_unit_time(p, h);
  const Angle zero = Angle::from_theta(0.0);
  ContourLine line(sig, p1, zero);
  auto I = detail::integrate_at(sig, p1, zero, opt.tol, opt.max_evals, line);
  if (I.over_budget) {
    if (opt.allow_delegate && !p1.is_origin()) {
      KernelOptions o = opt;
      o.allow_delegate = false;
      return kernel_shifted(sig, p, h, o);
    }
    throw AccuracyError("direct quadrature: oscillation needs more nodes than the budget allows", 0.0,
                        std::numeric_limits<double>::infinity());
  }
  auto kv = detail::finish(sig, line, I, h, Method::Direct, opt.tol);
  if (!p1.is_origin()) kv.meta = solve_geodesic(sig, p1);
  return kv;
}

/// Quadrature along Im lambda = theta, the line through the critical point.
inline KernelValue kernel_shifted(const GroupSignature& sig, const RadialPoint& p, const GeodesicData& geo,
                                  double h, const KernelOptions& opt) {
  detail::check_tol(opt.tol);
  if (geo.branch != Branch::Interior) throw RegimeError("shifted contour needs an interior critical angle");
  if (geo.epsilon < 1e-6) throw RegimeError("shifted contour: eps below 1e-6, use the direct or saddle contour");
  RadialPoint q = detail::to_unit_time(p, h);
  q.t = std::abs(q.t);
  const Angle th = geo.angle();
  ContourLine line(sig, q, th);
  auto I = detail::integrate_at(sig, q, th, opt.tol, opt.max_evals, line);
  if (I.over_budget)
    throw AccuracyError("shifted quadrature: node budget exceeded", 0.0, std::numeric_limits<double>::infinity());
  auto kv = detail::finish(sig, line, I, h, Method::ShiftedContour, opt.tol);
  kv.meta = geo;
  return kv;
}

inline KernelValue kernel_shifted(const GroupSignature& sig, const RadialPoint& p, double h, const KernelOptions& opt) {
  const RadialPoint p1 = detail::to_unit_time(p, h);
  if (p1.is_origin()) throw RegimeError("shifted contour is undefined at the origin");
  return kernel_shifted(sig, p, solve_geodesic(sig, p1), h, opt);
}

/// The height eta in [0, pi) minimizing phi(i eta) + log h(i eta), the saddle of
/// the integrand on the imaginary axis.
inline Angle saddle_height(const GroupSignature& sig, const RadialPoint& p1) {
  RadialPoint q = p1;
  q.t = std::abs(q.t);
  auto F = [&](double u) {
    const Angle a = Angle::from_eps(std::exp(u));
    return phi_at(sig, q, a) + std::log(amplitude_at(sig, a));
  };
  const double lo = std::log(1e-12), hi = std::log(kPi);
  auto best = boost::math::tools::brent_find_minima(F, lo, hi, 40);
  return Angle::from_eps(std::exp(best.first));
}

/// Quadrature along the horizontal line through the saddle of the integrand
/// on the imaginary axis; works on the cut locus and arbitrarily close to it.
inline KernelValue kernel_contour(const GroupSignature& sig, const RadialPoint& p, double h,
                                  const KernelOptions& opt = {}, std::optional<Angle> height = std::nullopt) {
  detail::check_tol(opt.tol);
  RadialPoint q = detail::to_unit_time(p, h);
  q.t = std::abs(q.t);
  const Angle eta = height ? *height : saddle_height(sig, q);
  ContourLine line(sig, q, eta);
  auto I = detail::integrate_at(sig, q, eta, opt.tol, opt.max_evals, line);
  if (I.over_budget)
    throw AccuracyError("contour quadrature: node budget exceeded", 0.0, std::numeric_limits<double>::infinity());
  auto kv = detail::finish(sig, line, I, h, Method::SaddleContour, opt.tol);
  if (!q.is_origin()) kv.meta = solve_geodesic(sig, q);
  return kv;
}

/// Pick a line: the real axis near the origin (d^2 <= 4 at unit time, where
/// nothing is exponentially small and the shifted lines near the pole cancel
/// badly), the critical line when it is safely away from the pole, the saddle
/// line otherwise or when the critical line misses the tolerance.
inline KernelValue kernel_auto(const GroupSignature& sig, const RadialPoint& p, double h,
                               const KernelOptions& opt = {}) {
  const RadialPoint p1 = detail::to_unit_time(p, h);
  if (p1.is_origin()) return kernel_direct(sig, p, h, opt);
  const auto geo = solve_geodesic(sig, p1);
  if (geo.dSq <= 4.0) return kernel_direct(sig, p, h, opt);
  if (geo.branch == Branch::Interior && geo.epsilon >= 1e-6) {
    try {
      return kernel_shifted(sig, p, geo, h, opt);
    } catch (const AccuracyError&) {
    }
  }
  return kernel_contour(sig, p, h, opt);
}

struct GaveauValue {
  double value = 0.0;
  double log_value = 0.0;
  double relError = 0.0;
};

/// integral (lambda / sinh lambda)^power exp(-i lambda s) dlambda.
/// power 1 is the closed form pi^2 / (1 + cosh(pi s)); higher powers are
/// integrated along Im lambda = -(pi - power/|s|) when that line is above -pi/2,
/// which keeps the result free of cancellation for large |s|.
inline GaveauValue gaveau_transform_full(int power, double s, double tol = 1e-12) {
  if (power < 1) throw DomainError("gaveau_transform: power must be >= 1");
  s = std::abs(s);
  GaveauValue g;
  if (power == 1) {
    // 1 + cosh x = 2 cosh^2(x/2)
    const double x = kPi * s;
    const double log_cosh_half = 0.5 * x + std::log1p(std::exp(-x)) - std::log(2.0);
    g.log_value = 2 * std::log(kPi) - std::log(2.0) - 2 * log_cosh_half;
    g.value = std::exp(g.log_value);
    return g;
  }
  const double delta = s > 0 ? power / s : kPi;
  const double eta = delta < kPi / 2 ? kPi - delta : 0.0;
  // log h1(mu - i eta); near the pole use sinh(mu - i pi + i delta) = -sinh(mu + i delta).
  auto log_h1_line = [&](double m) -> cplx {
    const cplx w{m, -eta};
    if (eta == 0.0 || std::abs(m) > 20) return detail::log_h1(w);
    return std::log(-w / std::sinh(cplx{m, delta}));
  };
  const double ref = power * log_h1_line(0.0).real();
  auto f = [&](double m) {
    return std::exp(double(power) * log_h1_line(m) - kI * m * s - ref).real();
  };
  const double scale = 0.25 * std::min(1.0, eta > 0 ? delta : 1.0);
  double L = scale;
  while (power * log_h1_line(L).real() - ref > -42.0 && L < 1e4) L *= 2;
  L *= 2;
  const double period = s > 0 ? 2 * kPi / s : 0.0;
  std::vector<double> pts{0.0, L};
  for (double x = scale; x < L; x *= 2) pts.push_back(x);
  if (period > 0 && period < L)
    for (double x = period; x < L; x += period) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  quad::Options opt;
  opt.rel_tol = tol / 4;
  opt.l1_floor = 64 * std::numeric_limits<double>::epsilon();
  auto r = quad::integrate(f, pts, opt);
  // f(-m) = conj f(m): the integral is twice the real half-line part.
  const double v = 2 * r.value;
  if (!(v > 0)) throw AccuracyError("gaveau_transform: quadrature lost the sign", 0.0, 2 * r.error);
  g.log_value = std::log(v) + ref - eta * s;
  g.value = std::exp(g.log_value);
  g.relError = (r.error + 20 * std::numeric_limits<double>::epsilon() * r.l1) / r.value;
  return g;
}

inline double gaveau_transform(int power, double s) { return gaveau_transform_full(power, s).value; }

/// p^{H(m,1)}(o, s) = c_m * gaveau(m, s / 4)
inline double log_origin_vertical_kernel(int m, double s) {
  return log_normalization(m) + gaveau_transform_full(m, s / 4).log_value;
}

/// Kernel as a 1-D convolution in the vertical variable:
///   H(n,1):          p(z, .) = p^{H(1,1)}(|z|, .) * p^{H(n-1,1)}(o, .)
///   H((1,1),(a,1)):  p(z, .) = (1/a) p^{H(1,1)}(z_1, ./a) * p^{H(1,1)}(z_2, .)
inline KernelValue kernel_convolution(const GroupSignature& sig, const RadialPoint& p, double h,
                                      const KernelOptions& opt = {}) {
  detail::check_tol(opt.tol);
  const bool iso = sig.is_isotropic() && sig.n() >= 2;
  const bool five = sig.blocks() == 2 && sig.k(0) == 1 && sig.k(1) == 1;
  if (!iso && !five) throw DomainError("kernel_convolution: needs H(n,1) with n >= 2 or H((1,1),(a,1))");
  const RadialPoint p1 = detail::to_unit_time(p, h);
  const auto h11 = GroupSignature::isotropic(1);
  const double t = p1.t;
  KernelOptions inner = opt;
  inner.tol = std::max(1e-12, opt.tol / 10);
  double inner_rel = 0.0;
  auto log_h11 = [&](double r, double u) {
    auto kv = kernel_auto(h11, RadialPoint{{r}, u}, 1.0, inner);
    inner_rel = std::max(inner_rel, kv.relError);
    return kv.log_value;
  };
  std::function<double(double)> g;
  if (iso) {
    const double r = p1.r_total();
    const int m = sig.n() - 1;
    g = [&, r, m](double s) { return log_h11(r, t - s) + log_origin_vertical_kernel(m, s); };
  } else {
    const double a = sig.a(0);
    g = [&, a](double s) { return -std::log(a) + log_h11(p1.r[0], s / a) + log_h11(p1.r[1], t - s); };
  }
  // Both factors decay like exp(-c |.|) with c >= pi/4 per unit of their
  // argument, so the mass sits between 0 and t (or t a) with exponential tails.
  const double stretch = iso ? 1.0 : std::max(1.0, 1.0 / sig.a(0));
  const double lo = std::min(0.0, t) - 60.0, hi = std::max(0.0, t) + 60.0 / stretch + 60.0;
  const double ref = std::max({g(0.0), g(t), g(0.5 * t)});
  auto f = [&](double s) { return std::exp(g(s) - ref); };
  std::vector<double> pts{lo, hi, 0.0, t};
  for (double x = lo + 4; x < hi; x += 4) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  quad::Options qo;
  qo.rel_tol = opt.tol / 4;
  qo.max_evals = 200'000;
  auto r = quad::integrate(f, pts, qo);
  if (!(r.value > 0)) throw AccuracyError("kernel_convolution: non-positive integral", 0.0, r.error);
  KernelValue kv;
  kv.method = Method::Convolution;
  kv.log_value = std::log(r.value) + ref - (sig.n() + 1) * std::log(h);
  kv.value = std::exp(kv.log_value);
  kv.relError = r.error / r.value + inner_rel;
  kv.errEstimate = kv.relError * kv.value;
  kv.evals = r.evals;
  if (!p1.is_origin()) kv.meta = solve_geodesic(sig, p1);
  if (!r.converged || kv.relError > opt.tol)
    throw AccuracyError("kernel_convolution missed the tolerance", kv.value, kv.errEstimate);
  return kv;
}

/// Dispatch by method name.
inline KernelValue heat_kernel(const GroupSignature& sig, const RadialPoint& p, double h, Method m,
                               const KernelOptions& opt = {}) {
  switch (m) {
    case Method::Direct: return kernel_direct(sig, p, h, opt);
    case Method::ShiftedContour: return kernel_shifted(sig, p, h, opt);
    case Method::SaddleContour: return kernel_contour(sig, p, h, opt);
    case Method::Convolution: return kernel_convolution(sig, p, h, opt);
    default: return kernel_auto(sig, p, h, opt);
  }
}

}  // namespace heisenberg
