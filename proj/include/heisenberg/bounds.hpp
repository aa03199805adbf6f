#pragma once

// Two-sided comparators for the kernel and their empirical constants over
// grids, plus finite-difference checks of the logarithmic gradient and of one
// second-order mixed derivative written as four line integrals.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "heisenberg/detail/parallel.hpp"
#include "heisenberg/errors.hpp"
#include "heisenberg/geometry.hpp"
#include "heisenberg/group_model.hpp"
#include "heisenberg/phase.hpp"
#include "heisenberg/quadrature_kernel.hpp"

namespace heisenberg {

enum class Comparator { IHE, HEB1, PEHK, HU1, HL1 };

inline const char* to_string(Comparator c) {
  switch (c) {
    case Comparator::IHE: return "IHE";
    case Comparator::HEB1: return "HEB1";
    case Comparator::PEHK: return "PEHK";
    case Comparator::HU1: return "HU1";
    case Comparator::HL1: return "HL1";
  }
  return "?";
}

/// log of the comparator expression at time h. varpi is used by HL1 only.
inline double log_comparator_value(Comparator kind, const GroupSignature& sig, const RadialPoint& p, double h,
                                   double varpi = 2.0) {
  if (!(h > 0)) throw DomainError("comparator: h must be > 0");
  const double dSq = cc_distance_sq(sig, p);
  const double d = std::sqrt(dSq);
  const double z = p.r_total();
  const int n = sig.n();
  const double Q = sig.homogeneous_dimension();
  const double gauss = -dSq / (4 * h);
  switch (kind) {
    case Comparator::IHE:
      if (!sig.is_isotropic()) throw DomainError("IHE comparator needs an isotropic group");
      return -(n + 1) * std::log(h) + gauss + 2 * (n - 1) * std::log1p(d / std::sqrt(h)) +
             (0.5 - n) * std::log1p(z * d / h);
    case Comparator::HEB1:
      if (!(sig.is_isotropic() && n == 1)) throw DomainError("HEB1 comparator is specific to H(1,1)");
      return -2 * std::log(h) + gauss - 0.5 * std::log1p(z * d / h);
    case Comparator::PEHK: {
      const double es = p.is_origin() ? 1.0 : solve_geodesic(sig, p).epsilonStar;
      if (!(es > 0)) throw DomainError("PEHK comparator: eps* = 0 on the cut locus");
      const double zl2 = p.r_last() * p.r_last();
      const double sh = std::sqrt(h);
      const double first = std::log1p((z * z * es * es + zl2 / es) / h);
      const double num = h + sh * z + zl2 / (es * es);
      const double den = h + sh * z * es + zl2 / es;
      return -(n + 1) * std::log(h) - 0.5 * first + (sig.k_last() - 1) * std::log(num / den) + gauss;
    }
    case Comparator::HU1:
      return -0.5 * Q * std::log(h) + (Q - 1) * std::log1p(d / std::sqrt(h)) + gauss;
    case Comparator::HL1:
      if (!(varpi > 0 && varpi < 4)) throw DomainError("HL1 comparator: varpi must lie in (0, 4)");
      return -0.5 * Q * std::log(h) - dSq / ((4 - varpi) * h);
  }
  return 0.0;
}

inline double comparator_value(Comparator kind, const GroupSignature& sig, const RadialPoint& p, double h,
                               double varpi = 2.0) {
  return std::exp(log_comparator_value(kind, sig, p, h, varpi));
}

/// Point at unit time on the ray with all block moduli equal, critical angle
/// theta, and distance d. theta = pi gives a cut-locus point (z = 0 when l = 1,
/// otherwise r_l = 0 at twice the cut threshold).
inline RadialPoint ray_point(const GroupSignature& sig, double theta, double d) {
  if (!(theta >= 0 && theta <= kPi)) throw DomainError("ray_point: theta must lie in [0, pi]");
  if (!(d > 0)) throw DomainError("ray_point: d must be > 0");
  std::vector<double> r(sig.blocks(), 1.0);
  RadialPoint p{r, 0.0};
  if (theta == kPi) {
    if (sig.is_isotropic()) return {{0.0}, d * d / kPi};
    p.r.back() = 0.0;
    p.t = 2 * cut_threshold(sig, p);
  } else {
    p.t = detail::height_and_slope(sig, p, Angle::from_theta(theta)).first;
  }
  return dilate(p, d / cc_distance(sig, p));
}

struct GridSpec {
  std::vector<double> thetas;
  std::vector<double> distances;    // at unit time
  std::vector<double> times{1.0};   // point i uses times[i % size], dilated accordingly
};

/// 8 angles x 25 distances, cycling h over {0.25, 1, 4}: the 200-point grid.
inline GridSpec standard_grid() {
  GridSpec g;
  g.thetas = {0.0, 0.3, 0.8, 1.5, 2.2, 2.8, 3.1, kPi};
  for (int i = 0; i < 25; ++i) g.distances.push_back(0.05 * std::pow(600.0, i / 24.0));
  g.times = {0.25, 1.0, 4.0};
  return g;
}

struct SandwichPoint {
  RadialPoint p;
  double h = 1.0;
  double theta = 0.0;
  double d = 0.0;  // at unit time
  double log_kernel = 0.0;
  double log_comparator = 0.0;
  double ratio() const { return std::exp(log_kernel - log_comparator); }
};

struct SandwichReport {
  Comparator comparator = Comparator::HU1;
  std::vector<SandwichPoint> grid;
  std::vector<std::string> skipped;  // one line per grid point that could not be evaluated
  double ratioMin = std::numeric_limits<double>::infinity();
  double ratioMax = 0.0;
  std::size_t argmin = 0, argmax = 0;
  double spread() const { return ratioMax / ratioMin; }
};

inline std::string describe(const RadialPoint& p, double h) {
  std::ostringstream os;
  os.precision(10);
  os << "r=(";
  for (std::size_t j = 0; j < p.r.size(); ++j) os << (j ? "," : "") << p.r[j];
  os << ") t=" << p.t << " h=" << h;
  return os.str();
}

namespace detail {

inline void finalize(SandwichReport& rep) {
  for (std::size_t i = 0; i < rep.grid.size(); ++i) {
    const double q = rep.grid[i].ratio();
    if (q < rep.ratioMin) rep.ratioMin = q, rep.argmin = i;
    if (q > rep.ratioMax) rep.ratioMax = q, rep.argmax = i;
  }
}

}  // namespace detail

inline SandwichReport sandwich_sweep(Comparator kind, const GroupSignature& sig, const GridSpec& spec,
                                     double varpi = 2.0, const KernelOptions& opt = {}) {
  struct Slot {
    bool ok = false;
    SandwichPoint pt;
    std::string err;
  };
  const std::size_t nd = spec.distances.size();
  const std::size_t total = spec.thetas.size() * nd;
  std::vector<Slot> slots(total);
  detail::parallel_for(total, [&](std::size_t i) {
    Slot& s = slots[i];
    s.pt.theta = spec.thetas[i / nd];
    s.pt.d = spec.distances[i % nd];
    s.pt.h = spec.times[i % spec.times.size()];
    try {
      s.pt.p = dilate(ray_point(sig, s.pt.theta, s.pt.d), std::sqrt(s.pt.h));
      s.pt.log_comparator = log_comparator_value(kind, sig, s.pt.p, s.pt.h, varpi);
      s.pt.log_kernel = kernel_auto(sig, s.pt.p, s.pt.h, opt).log_value;
      s.ok = true;
    } catch (const std::exception& e) {
      s.err = describe(s.pt.p, s.pt.h) + ": " + e.what();
    }
  });
  SandwichReport rep;
  rep.comparator = kind;
  for (auto& s : slots) {
    if (s.ok) rep.grid.push_back(s.pt);
    else rep.skipped.push_back(s.err);
  }
  detail::finalize(rep);
  return rep;
}

/// gaveau(n-1, s) against (1 + pi |s|)^{n-2} e^{-pi |s|}.
inline SandwichReport lm4_bound_check(int n, const std::vector<double>& s_grid) {
  if (n < 2) throw DomainError("lm4_bound_check: n must be >= 2");
  SandwichReport rep;
  for (double s : s_grid) {
    SandwichPoint pt;
    pt.p = {{0.0}, s};
    pt.log_kernel = gaveau_transform_full(n - 1, s).log_value;
    pt.log_comparator = (n - 2) * std::log1p(kPi * std::abs(s)) - kPi * std::abs(s);
    rep.grid.push_back(pt);
  }
  detail::finalize(rep);
  return rep;
}

// ---- derivatives -----------------------------------------------------------

namespace detail {

inline double log_kernel_full(const GroupSignature& sig, const FullPoint& g, double h) {
  KernelOptions o;
  o.tol = 1e-12;
  return kernel_auto(sig, reduce(g), h, o).log_value;
}

inline double field_coordinate(const FullPoint& g, const HorizontalField& u) {
  const auto& c = g.z.at(u.block).at(u.coord);
  return u.imaginary ? c.imag() : c.real();
}

inline double full_distance(const GroupSignature& sig, const FullPoint& g) { return cc_distance(sig, reduce(g)); }

}  // namespace detail

/// U ln p_h(g) = d/ds ln p_h(g exp(sU)): central differences at steps s and s/2,
/// combined by one Richardson step.
inline double log_derivative(const GroupSignature& sig, const FullPoint& g, const HorizontalField& u, double h) {
  const double x = detail::field_coordinate(g, u);
  const double s = 1e-5 * (1 + std::abs(x)) * std::sqrt(h);
  if (x + s == x) throw AccuracyError("log_derivative: step below machine resolution", 0.0, 0.0);
  auto at = [&](double step) { return detail::log_kernel_full(sig, multiply(sig, g, exp_horizontal(sig, u, step)), h); };
  const double D1 = (at(s) - at(-s)) / (2 * s);
  const double D2 = (at(s / 2) - at(-s / 2)) / s;
  return (4 * D2 - D1) / 3;
}

struct GradCheck {
  double gradNorm = 0.0;
  double d = 0.0;
  double bound = 0.0;  // C d(g) / h
  bool ok = false;
  double scaled_ratio() const { return gradNorm / d; }
};

/// |grad ln p_h| at g against C d(g) / h. The default C is the supremum of
/// h |grad ln p_h| / d over the seed-1 H(1,1) grid of grad_grid (0.988), rounded up.
inline constexpr double kGradConstantH11 = 1.0;

inline GradCheck grad_log_check(const GroupSignature& sig, const FullPoint& g, double h, double C = kGradConstantH11) {
  if (reduce(g).is_origin()) throw DomainError("grad_log_check: g must differ from the identity");
  GradCheck out;
  double s2 = 0.0;
  for (const auto& u : horizontal_fields(sig)) {
    const double v = log_derivative(sig, g, u, h);
    s2 += v * v;
  }
  out.gradNorm = std::sqrt(s2);
  out.d = detail::full_distance(sig, g);
  out.bound = C * out.d / h;
  out.ok = out.gradNorm <= out.bound;
  return out;
}

/// Random unit-time points of H(1,1) (uniform angle of z, |z| log-uniform on
/// [0.05, 8], critical angle uniform on [0, 3.1]); disjoint seeds give the
/// calibration and test grids.
inline std::vector<FullPoint> grad_grid(const GroupSignature& sig, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<FullPoint> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double theta = 3.1 * U(rng);
    const double rad = 0.05 * std::pow(160.0, U(rng));
    std::vector<std::vector<std::complex<double>>> z(sig.blocks());
    double r2sum = 0;
    for (std::size_t b = 0; b < sig.blocks(); ++b) {
      for (int c = 0; c < sig.k(b); ++c) {
        const double ang = 2 * kPi * U(rng);
        const double m = 0.5 + U(rng);
        z[b].push_back(std::polar(m, ang));
        r2sum += m * m;
      }
    }
    for (auto& blk : z)
      for (auto& c : blk) c *= rad / std::sqrt(r2sum);
    FullPoint g = make_full(sig, z, 0.0);
    const RadialPoint p = reduce(g);
    const double t = detail::height_and_slope(sig, p, Angle::from_theta(theta)).first;
    g.t = U(rng) < 0.5 ? t : -t;
    out.push_back(g);
  }
  return out;
}

/// Supremum of h |grad ln p_h| / d over a grid, evaluated at time h.
struct GradSup {
  double sup = 0.0;
  std::size_t argmax = 0;
  std::vector<double> ratios;
};

inline GradSup grad_sup(const GroupSignature& sig, const std::vector<FullPoint>& grid, double h = 1.0) {
  GradSup out;
  out.ratios.assign(grid.size(), 0.0);
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    try {
      out.ratios[i] = h * grad_log_check(sig, grid[i], h).scaled_ratio();
    } catch (const std::exception&) {
      out.ratios[i] = std::numeric_limits<double>::quiet_NaN();
    }
  });
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (out.ratios[i] > out.sup) out.sup = out.ratios[i], out.argmax = i;
  return out;
}

/// c_n int h(lambda) e^{phi(lambda)} w(lambda) dlambda, w analytic in the strip
/// |Im lambda| < pi. Integrated along the saddle line of the kernel so the
/// result keeps its relative accuracy far from the origin. For t < 0 the
/// integrand at -t is the one at t reflected, so the weight is reflected instead.
template <class W>
cplx weighted_kernel_integral(const GroupSignature& sig, const RadialPoint& p, W w, double tol = 1e-13) {
  RadialPoint q = p;
  const bool flip = q.t < 0;
  q.t = std::abs(q.t);
  const Angle eta =
      q.is_origin() || cc_distance_sq(sig, q) <= 4.0 ? Angle::from_theta(0.0) : saddle_height(sig, q);
  const ContourLine line(sig, q, eta);
  const double scale = detail::line_scale(sig, q, eta);
  auto weight = [&](double x) { return w(cplx{flip ? -x : x, flip ? -eta.theta : eta.theta}); };
  auto logmod = [&](double x) { return line.log_integrand(x).real() + std::log(std::abs(weight(x)) + 1e-300); };
  double L = scale;
  while (std::max(logmod(L), logmod(-L)) - logmod(0.0) > -50.0 && L < 1e5) L *= 2;
  const double freq = q.t / 4;
  const double period = freq > 0 ? 8 * kPi / freq : 0.0;
  auto f = [&](double x) { return line(x) * weight(x); };
  quad::Options o;
  o.rel_tol = tol;
  o.l1_floor = 64 * std::numeric_limits<double>::epsilon();
  auto r = quad::integrate(f, detail::line_breakpoints(scale, 2 * L, period), o);
  return std::exp(log_normalization(sig.n()) + line.phi_at_height()) * r.value;
}

/// X_{1,1} Y_{1,1} p at unit time as four line integrals with u = a_1 lambda:
///   -(i/2) u  +  (1/4) x y (u coth u)^2  +  (i/4)(x^2 - y^2) u (u coth u)  +  (1/4) x y u^2
/// integrated against h e^{phi}, where x + iy is the first coordinate of block 1.
inline double xy_mixed_expansion(const GroupSignature& sig, const FullPoint& g) {
  const RadialPoint p = reduce(g);
  const double a = sig.a(0);
  const double x = g.z.at(0).at(0).real(), y = g.z.at(0).at(0).imag();
  auto w = [&](const cplx& lam) {
    const cplx u = a * lam;
    const cplx uc = detail::h2(u);
    return -0.5 * kI * u + 0.25 * x * y * uc * uc + 0.25 * kI * (x * x - y * y) * u * uc + 0.25 * x * y * u * u;
  };
  return weighted_kernel_integral(sig, p, w).real();
}

/// X_{1,1} Y_{1,1} p at unit time by a mixed central difference along the
/// left-invariant fields, one Richardson step.
inline double xy_mixed_fd(const GroupSignature& sig, const FullPoint& g) {
  const HorizontalField X{0, 0, false}, Y{0, 0, true};
  KernelOptions o;
  o.tol = 1e-12;
  auto f = [&](double s, double u) {
    FullPoint q = multiply(sig, multiply(sig, g, exp_horizontal(sig, X, s)), exp_horizontal(sig, Y, u));
    return kernel_auto(sig, reduce(q), 1.0, o).value;
  };
  auto D = [&](double s) { return (f(s, s) - f(s, -s) - f(-s, s) + f(-s, -s)) / (4 * s * s); };
  const double s = 2e-3 * (1 + std::abs(g.z.at(0).at(0)));
  return (4 * D(s / 2) - D(s)) / 3;
}

}  // namespace heisenberg
