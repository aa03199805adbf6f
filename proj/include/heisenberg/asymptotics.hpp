#pragma once

// Large-distance leading terms of the unit-time kernel in the three regimes
// (bounded angle, near the cut locus with large / bounded pole weight), the
// exact cut-locus form, and the small-time limits obtained by dilation.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "heisenberg/bessel_core.hpp"
#include "heisenberg/errors.hpp"
#include "heisenberg/geometry.hpp"
#include "heisenberg/group_model.hpp"
#include "heisenberg/phase.hpp"
#include "heisenberg/quadrature.hpp"
#include "heisenberg/quadrature_kernel.hpp"

namespace heisenberg {

enum class RegimeTag { BoundedTheta, SmallEpsLargeD, SmallEpsBoundedD };

inline const char* to_string(RegimeTag t) {
  switch (t) {
    case RegimeTag::BoundedTheta: return "BoundedTheta";
    case RegimeTag::SmallEpsLargeD: return "SmallEpsLargeD";
    case RegimeTag::SmallEpsBoundedD: return "SmallEpsBoundedD";
  }
  return "?";
}

struct Thresholds {
  double theta0 = 3 * kPi / 4;
  double gamma0 = 4.0;
};

struct Regime {
  RegimeTag tag = RegimeTag::BoundedTheta;
  double theta0 = 3 * kPi / 4;
  double eps0 = 0.0;
  double gamma0 = 4.0;
  // Set when the point is in neither open regime and was assigned by fallback:
  // eps0 < eps with theta > theta0, or gamma0 < D1 + D2 < eps0^-3.
  bool warning = false;
  std::string note;
};

inline Regime classify(const GeodesicData& geo, const PhaseFrame& frame, const Thresholds& th = {}) {
  if (!(th.theta0 >= kPi / 2 && th.theta0 < kPi)) throw DomainError("classify: theta0 must lie in [pi/2, pi)");
  if (!(th.gamma0 >= 1)) throw DomainError("classify: gamma0 must be >= 1");
  if (!(geo.dSq >= 1 - 1e-12)) throw DomainError("classify: needs d^2 >= 1");  // allow rounding at d = 1
  Regime r;
  r.theta0 = th.theta0;
  r.eps0 = frame.eps0;
  r.gamma0 = th.gamma0;
  const double eps = geo.epsilon;
  if (eps <= frame.eps0) {
    const double D = frame.d_sum();
    const double big = std::pow(frame.eps0, -3);
    if (D <= th.gamma0) {
      r.tag = RegimeTag::SmallEpsBoundedD;
    } else {
      r.tag = RegimeTag::SmallEpsLargeD;
      if (D < big) {
        r.warning = true;
        r.note = "D1+D2 between gamma0 and eps0^-3";
      }
    }
    return r;
  }
  r.tag = RegimeTag::BoundedTheta;
  if (geo.theta > th.theta0) {
    r.warning = true;
    r.note = "theta0 < theta < pi - eps0";
  }
  return r;
}

namespace detail {

// log of e^{-d^2/4} / (4 (4 pi)^{n + 1/2})
inline double log_front_half(const GroupSignature& sig, double dSq) {
  return -0.25 * dSq - std::log(4.0) - (sig.n() + 0.5) * std::log(4 * kPi);
}

// log prod_{j<l} (a_j pi / sin a_j pi)^{k_j}
inline double log_amplitude_inner_at_pi(const GroupSignature& sig) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < sig.blocks(); ++j) s += sig.k(j) * std::log(detail::sinc_inv(sig.a(j) * kPi));
  return s;
}

inline void require_regime(const Regime& r, RegimeTag want, const char* who) {
  if (r.tag != want) throw RegimeError(std::string(who) + ": point is in regime " + to_string(r.tag));
}

// log int_0^inf rho^{k-1} Bt_k(A rho) exp(-(rho - c)^2 / (2 v)) drho
inline double log_rho_integral(int k, double A, double c, double v) {
  const double sd = std::sqrt(v);
  auto lg = [=](double x) {
    double s = -(x - c) * (x - c) / (2 * v) + log_bessel_reduced(k, A * x);
    if (k > 1) s += (k - 1) * std::log(x);
    return s;
  };
  const double mode = 0.5 * (c + std::sqrt(c * c + 4 * v * (k - 1)));
  double lo = std::max(0.0, std::min(mode, c) - 14 * sd);
  double hi = std::max(mode, c) + 14 * sd;
  if (hi <= 0) hi = 14 * sd;
  double peak = -1e300;
  for (int i = 0; i <= 256; ++i) {
    const double x = lo + (hi - lo) * i / 256.0;
    if (x > 0 || k == 1) peak = std::max(peak, lg(x));
  }
  while (lg(hi) > peak - 60) hi += 4 * sd;
  std::vector<double> pts;
  const double w = std::min(0.5 * sd, (hi - lo) / 8);
  for (double x = lo; x < hi; x += w) pts.push_back(x);
  pts.push_back(hi);
  auto f = [&](double x) { return (x == 0 && k > 1) ? 0.0 : std::exp(lg(x) - peak); };
  quad::Options o;
  o.rel_tol = 1e-13;
  return peak + std::log(quad::integrate(f, pts, o).value);
}

}  // namespace detail

/// e^{-d^2/4} / (4 (4 pi)^{n+1/2}) (-Phi''(0)/2)^{-1/2} h(i theta), in log form.
inline double log_thm1_leading(const GroupSignature& sig, const RadialPoint& /*p*/, const GeodesicData& geo,
                               const PhaseFrame& frame) {
  if (geo.branch != Branch::Interior) throw RegimeError("thm1: needs an interior point");
  return detail::log_front_half(sig, geo.dSq) - 0.5 * std::log(-0.5 * frame.phiPP0) +
         std::log(amplitude_at(sig, geo.angle()));
}

inline double thm1_leading(const GroupSignature& sig, const RadialPoint& p, const GeodesicData& geo,
                           const PhaseFrame& frame, const Thresholds& th = {}) {
  detail::require_regime(classify(geo, frame, th), RegimeTag::BoundedTheta, "thm1_leading");
  return std::exp(log_thm1_leading(sig, p, geo, frame));
}

struct Thm2Forms {
  double log_full = 0.0;   // eps (D1+D2)^{-1/2} prod_{j<=l} (a_j theta / sin a_j theta)^{k_j}
  double log_split = 0.0;  // eps (pi/eps)^{k_l} (D1+D2)^{-1/2} prod_{j<l} (a_j pi / sin a_j pi)^{k_j}
  double full() const { return std::exp(log_full); }
  double split() const { return std::exp(log_split); }
};

inline Thm2Forms thm2_forms(const GroupSignature& sig, const RadialPoint& /*p*/, const GeodesicData& geo,
                            const PhaseFrame& frame) {
  if (geo.branch != Branch::Interior) throw RegimeError("thm2: needs an interior point");
  const double eps = geo.epsilon;
  const double base = detail::log_front_half(sig, geo.dSq) - 0.5 * std::log(frame.d_sum()) + std::log(eps);
  Thm2Forms f;
  f.log_full = base + std::log(amplitude_at(sig, geo.angle()));
  f.log_split = base + sig.k_last() * std::log(kPi / eps) + detail::log_amplitude_inner_at_pi(sig);
  return f;
}

inline double thm2_leading(const GroupSignature& sig, const RadialPoint& p, const GeodesicData& geo,
                           const PhaseFrame& frame, const Thresholds& th = {}) {
  detail::require_regime(classify(geo, frame, th), RegimeTag::SmallEpsLargeD, "thm2_leading");
  return thm2_forms(sig, p, geo, frame).full();
}

/// e^{-d^2/4} / (2 (4 pi)^{n+1}) e^{-D1 + J*} S_{k_l} eps (pi/eps)^{k_l} prod_{j<l} (...),
/// in log form. At eps = 0 the eps-free form with s = eps rho is used.
inline double log_thm3_leading(const GroupSignature& sig, const RadialPoint& p, const GeodesicData& geo,
                               const PhaseFrame& frame) {
  const int k = sig.k_last();
  const double lead = log_normalization(sig.n()) - 0.25 * geo.dSq + detail::log_amplitude_inner_at_pi(sig);
  const double eps = geo.epsilon;
  if (eps == 0.0) {
    // sqrt(2 pi / G''(0)) pi^k int rho^{k-1} Bt_k(pi r_l^2 rho / 4) exp(-(rho - rho0)^2 / (2 G''(0))),
    // with pi r_l^2 / (4 eps^2) -> rho0 = (|t| - T_c) / 4 on the cut locus.
    const double g = g3_second_at_zero(sig, p);
    const double rho0 = 0.25 * (std::abs(p.t) - cut_threshold(sig, p));
    return lead + 0.5 * std::log(2 * kPi / g) + k * std::log(kPi) + detail::log_rho_integral(k, 0.0, rho0, g);
  }
  const double S = s_factor(k, frame.d1(), frame.d2());
  return lead - frame.d1() + frame.jstar() + std::log(S) + std::log(eps) + k * std::log(kPi / eps);
}

inline double thm3_leading(const GroupSignature& sig, const RadialPoint& p, const GeodesicData& geo,
                           const PhaseFrame& frame, const Thresholds& th = {}) {
  detail::require_regime(classify(geo, frame, th), RegimeTag::SmallEpsBoundedD, "thm3_leading");
  return std::exp(log_thm3_leading(sig, p, geo, frame));
}

/// Exact cut-locus form (r_l = 0, theta = pi):
///   pi^{k_l - n - 1/2} / (2^{2n+3} Gamma(k_l)) (G3''(0)/2)^{-1/2} e^{-d^2/4} prod_{j<l} (...)
///   * int_0^inf rho^{k_l - 1} exp(-(rho - (|t| - T_c)/4)^2 / (2 G3''(0))) drho
inline double log_cutlocus_leading(const GroupSignature& sig, const RadialPoint& p) {
  if (p.r.size() != sig.blocks()) throw DomainError("cutlocus_leading: point/signature block mismatch");
  if (p.r_last() != 0.0) throw DomainError("cutlocus_leading: needs r_l = 0");
  if (p.r_total_sq() == 0.0) throw DomainError("cutlocus_leading: needs |z| != 0");
  if (sig.blocks() == 1) throw DomainError("cutlocus_leading: needs at least two blocks");
  const GeodesicData geo = solve_geodesic(sig, p);
  if (geo.branch != Branch::CutLocus) throw DomainError("cutlocus_leading: point is not on the cut locus");
  const int k = sig.k_last();
  const int n = sig.n();
  const double g = g3_second_at_zero(sig, p);
  const double rho0 = 0.25 * (std::abs(p.t) - cut_threshold(sig, p));
  const double front = (k - n - 0.5) * std::log(kPi) - (2 * n + 3) * std::log(2.0) - std::lgamma(k) -
                       0.5 * std::log(0.5 * g) - 0.25 * geo.dSq + detail::log_amplitude_inner_at_pi(sig);
  double integral;
  if (k == 1) {
    integral = std::log(std::sqrt(0.5 * kPi * g) * std::erfc(-rho0 / std::sqrt(2 * g)));
  } else {
    integral = detail::log_rho_integral(k, 0.0, rho0, g) + std::lgamma(k);  // undo Bt_k(0) = 1/Gamma(k)
  }
  return front + integral;
}

inline double cutlocus_leading(const GroupSignature& sig, const RadialPoint& p) {
  return std::exp(log_cutlocus_leading(sig, p));
}

/// Leading term in whatever regime the point falls in.
struct LeadingTerm {
  Regime regime;
  double log_value = 0.0;
  double value() const { return std::exp(log_value); }
};

inline LeadingTerm leading_term(const GroupSignature& sig, const RadialPoint& p, const Thresholds& th = {}) {
  const GeodesicData geo = solve_geodesic(sig, p);
  const PhaseFrame frame = phase_frame(sig, p, geo);
  LeadingTerm out;
  out.regime = classify(geo, frame, th);
  switch (out.regime.tag) {
    case RegimeTag::BoundedTheta: out.log_value = log_thm1_leading(sig, p, geo, frame); break;
    case RegimeTag::SmallEpsLargeD: out.log_value = thm2_forms(sig, p, geo, frame).log_full; break;
    case RegimeTag::SmallEpsBoundedD: out.log_value = log_thm3_leading(sig, p, geo, frame); break;
  }
  return out;
}

enum class SmallTimeCase { Interior, CutBoundary, BeyondCut };

inline const char* to_string(SmallTimeCase c) {
  switch (c) {
    case SmallTimeCase::Interior: return "c2";
    case SmallTimeCase::CutBoundary: return "c3";
    case SmallTimeCase::BeyondCut: return "c4";
  }
  return "?";
}

/// p_h(z, t) ~ coefficient * h^{-powerOfH} * exp(-d^2 / (4h)) as h -> 0.
struct SmallTimeLeading {
  double value = 0.0;
  double log_value = 0.0;
  double powerOfH = 0.0;
  double coefficient = 0.0;
  SmallTimeCase caseTag = SmallTimeCase::Interior;
  double dSq = 0.0;
};

inline SmallTimeLeading small_time(const GroupSignature& sig, const RadialPoint& p, double h) {
  if (p.is_origin()) throw DomainError("small_time: origin");
  if (!(h > 0 && h <= 1)) throw DomainError("small_time: needs 0 < h <= 1");
  const GeodesicData geo = solve_geodesic(sig, p);
  const int n = sig.n();
  const int k = sig.k_last();
  SmallTimeLeading s;
  s.dSq = geo.dSq;
  double log_coef;
  if (geo.branch == Branch::Interior) {
    s.caseTag = SmallTimeCase::Interior;
    s.powerOfH = n + 0.5;
    const double pp = phi_second_at_zero(sig, p, geo.angle());
    log_coef = -std::log(4.0) - (n + 0.5) * std::log(4 * kPi) - 0.5 * std::log(-0.5 * pp) +
               std::log(amplitude_at(sig, geo.angle()));
  } else {
    if (p.r_total_sq() == 0.0) throw DomainError("small_time: z = 0 is outside the three cases");
    const double g = g3_second_at_zero(sig, p);
    const double excess = std::abs(p.t) - cut_threshold(sig, p);
    const double base = -(n + 1) * std::log(4 * kPi) + detail::log_amplitude_inner_at_pi(sig);
    if (excess <= 1e-12 * std::abs(p.t)) {
      s.caseTag = SmallTimeCase::CutBoundary;
      s.powerOfH = n + 0.5 * (k + 1);
      log_coef = base + 0.5 * (k - 3) * std::log(2.0) + (k + 0.5) * std::log(kPi) + std::lgamma(0.5 * k) -
                 std::lgamma(k) + 0.5 * (k - 1) * std::log(g);
    } else {
      s.caseTag = SmallTimeCase::BeyondCut;
      s.powerOfH = n + k;
      // pi^{k+1} ((|t| - T_c)/4)^{k-1} / Gamma(k) relative to (4 pi)^{-(n+1)}
      log_coef = base + (k + 1) * std::log(kPi) + (k - 1) * std::log(0.25 * excess) - std::lgamma(k);
    }
  }
  s.coefficient = std::exp(log_coef);
  s.log_value = log_coef - s.powerOfH * std::log(h) - 0.25 * geo.dSq / h;
  s.value = std::exp(s.log_value);
  return s;
}

}  // namespace heisenberg
