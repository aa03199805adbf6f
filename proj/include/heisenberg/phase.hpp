#pragma once

// The complex phase phi, its shift Phi along the horizontal line through the
// critical point, the amplitude h, and the decomposition of the phase near
// the cut locus into the pole part and the analytic part G.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "heisenberg/detail/trig.hpp"
#include "heisenberg/errors.hpp"
#include "heisenberg/geometry.hpp"
#include "heisenberg/group_model.hpp"

namespace heisenberg {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};

namespace detail {

// Evenness lets us always work with Re u >= 0.
inline cplx right_half(const cplx& w) { return w.real() >= 0.0 ? w : -w; }

// log(w / sinh w), safe for large Re w.
inline cplx log_h1(const cplx& w) {
  const cplx u = right_half(w);
  if (std::abs(u) < 1.0) return std::log(sinc_inv(kI * u));
  // log sinh u = u - log 2 + log(1 - e^{-2u}), and e^{-2u} < 5e-18 here
  if (u.real() > 20.0) return std::log(u) - (u - std::log(2.0) - std::exp(-2.0 * u));
  return std::log(u / std::sinh(u));
}

// w coth w, safe for large Re w.
inline cplx h2(const cplx& w) {
  const cplx u = right_half(w);
  if (std::abs(u) < 1.0) return w_cot(kI * u);
  if (u.real() > 20.0) {
    const cplx q = std::exp(-2.0 * u);
    return u * (1.0 + 2.0 * q / (1.0 - q));
  }
  return u * std::cosh(u) / std::sinh(u);
}

inline void check_strip(const cplx& w) {
  if (!(std::abs(w.imag()) < kPi)) throw DomainError("argument outside the strip |Im| < pi");
}

}  // namespace detail

/// h1(w) = w / sinh w
inline cplx h1(const cplx& w) {
  detail::check_strip(w);
  return std::exp(detail::log_h1(w));
}

/// h2(w) = w coth w
inline cplx h2(const cplx& w) {
  detail::check_strip(w);
  return detail::h2(w);
}

/// |h1(x + i y)|^2 in closed form.
inline double h1_abs_sq_closed(double x, double y) {
  if (x == 0.0 && y == 0.0) return 1.0;
  const double sh = std::sinh(x), s = std::sin(y);
  return (x * x + y * y) / (sh * sh + s * s);
}

/// Re h2(x + i y) in closed form.
inline double re_h2_closed(double x, double y) {
  if (x == 0.0 && y == 0.0) return 1.0;
  return (x * std::sinh(2 * x) + y * std::sin(2 * y)) / (std::cosh(2 * x) - std::cos(2 * y));
}

/// h(w) = prod_j h1(a_j w)^{k_j}
inline cplx amplitude(const GroupSignature& sig, const cplx& w) {
  detail::check_strip(w);
  cplx lg{0.0, 0.0};
  for (std::size_t j = 0; j < sig.blocks(); ++j) lg += double(sig.k(j)) * detail::log_h1(sig.a(j) * w);
  return std::exp(lg);
}

/// h(i theta) for an angle below pi.
inline double amplitude_at(const GroupSignature& sig, const Angle& th) {
  double lg = 0.0;
  for (std::size_t j = 0; j < sig.blocks(); ++j) {
    const double q = j + 1 == sig.blocks() ? sinc_inv(th) : detail::sinc_inv(sig.a(j) * th.theta);
    lg += sig.k(j) * std::log(q);
  }
  return std::exp(lg);
}

/// phi(lambda) = (i lambda t - sum r_j^2 h2(a_j lambda)) / 4
inline cplx phi(const GroupSignature& sig, const RadialPoint& p, const cplx& lambda) {
  detail::check_strip(lambda);
  cplx s = kI * lambda * p.t;
  for (std::size_t j = 0; j < sig.blocks(); ++j)
    if (p.r[j] != 0.0) s -= p.r[j] * p.r[j] * detail::h2(sig.a(j) * lambda);
  return 0.25 * s;
}

/// phi(i eta) for real eta in [0, pi); real.
inline double phi_at(const GroupSignature& sig, const RadialPoint& p, const Angle& eta) {
  double s = eta.theta * p.t;
  for (std::size_t j = 0; j < sig.blocks(); ++j) {
    if (p.r[j] == 0.0) continue;
    const double wc = j + 1 == sig.blocks() ? w_cot(eta) : detail::w_cot(sig.a(j) * eta.theta);
    s += p.r[j] * p.r[j] * wc;
  }
  return -0.25 * s;
}

/// Restriction of the kernel integrand to the horizontal line Im lambda = eta:
/// h(lambda + i eta) exp(phi(lambda + i eta) - phi(i eta)) for real lambda.
/// The large vertical part -eta t / 4 cancels analytically; the amplitude is
/// summed in log space so values far below the double range stay usable.
class ContourLine {
 public:
  ContourLine(const GroupSignature& sig, const RadialPoint& p, const Angle& eta)
      : sig_(sig), p_(p), eta_(eta) {
    if (!(eta.theta >= 0.0 && eta.eps > 0.0)) throw DomainError("contour height must lie in [0, pi)");
    const std::size_t l = sig.blocks();
    ref_h2_.resize(l);
    for (std::size_t j = 0; j < l; ++j)
      ref_h2_[j] = j + 1 == l ? w_cot(eta) : detail::w_cot(sig.a(j) * eta.theta);
    phi_eta_ = phi_at(sig, p, eta);
    log_h_eta_ = std::log(amplitude_at(sig, eta));
  }

  const Angle& height() const noexcept { return eta_; }
  double phi_at_height() const noexcept { return phi_eta_; }
  double log_amplitude_at_height() const noexcept { return log_h_eta_; }

  /// log h(lambda + i eta) and h2 of each block, combined into the exponent.
  cplx log_integrand(double lambda) const {
    cplx lg{0.0, 0.0};
    cplx ph = kI * lambda * p_.t;
    const std::size_t l = sig_.blocks();
    for (std::size_t j = 0; j < l; ++j) {
      const double aj = sig_.a(j);
      const double rj2 = p_.r[j] * p_.r[j];
      cplx lh1, hh2;
      if (j + 1 == l && eta_.near_pi() && std::abs(lambda) < 1.0) {
        // w = i (pi - xi), xi = eps + i lambda
        const cplx xi{eta_.eps, lambda};
        const cplx pm = kPi - xi;
        lh1 = std::log(pm / std::sin(xi));
        hh2 = -pm * std::cos(xi) / std::sin(xi);
      } else {
        const cplx w{aj * lambda, aj * eta_.theta};
        lh1 = detail::log_h1(w);
        hh2 = rj2 != 0.0 ? detail::h2(w) : cplx{};
      }
      lg += double(sig_.k(j)) * lh1;
      if (rj2 != 0.0) ph -= rj2 * (hh2 - ref_h2_[j]);
    }
    return lg + 0.25 * ph;
  }

  /// Phi_eta(lambda) = phi(lambda + i eta) - phi(i eta)
  cplx shifted_phase(double lambda) const {
    cplx ph = kI * lambda * p_.t;
    const std::size_t l = sig_.blocks();
    for (std::size_t j = 0; j < l; ++j) {
      const double rj2 = p_.r[j] * p_.r[j];
      if (rj2 == 0.0) continue;
      cplx hh2;
      if (j + 1 == l && eta_.near_pi() && std::abs(lambda) < 1.0) {
        const cplx xi{eta_.eps, lambda};
        hh2 = -(kPi - xi) * std::cos(xi) / std::sin(xi);
      } else {
        hh2 = detail::h2(cplx{sig_.a(j) * lambda, sig_.a(j) * eta_.theta});
      }
      ph -= rj2 * (hh2 - ref_h2_[j]);
    }
    return 0.25 * ph;
  }

  /// Integrand relative to exp(phi(i eta)).
  cplx operator()(double lambda) const { return std::exp(log_integrand(lambda)); }

  /// Integrand divided by its value at lambda = 0, i.e. relative to exp(phi(i eta)) h(i eta).
  cplx normalized(double lambda) const { return std::exp(log_integrand(lambda) - log_h_eta_); }

 private:
  GroupSignature sig_;
  RadialPoint p_;
  Angle eta_;
  std::vector<double> ref_h2_;
  double phi_eta_ = 0.0;
  double log_h_eta_ = 0.0;
};

/// Phi(s) = phi(s + i theta) - phi(i theta) at an interior critical angle.
inline cplx Phi(const GroupSignature& sig, const RadialPoint& p, const GeodesicData& geo, double s) {
  if (geo.branch != Branch::Interior) throw DomainError("Phi: needs an interior critical angle");
  const RadialPoint q = p.t < 0 ? reflect_t(p) : p;
  return ContourLine(sig, q, geo.angle()).shifted_phase(s);
}

/// Phi''(0) = -(1/4) sum a_j^2 r_j^2 mu'(a_j theta)
inline double phi_second_at_zero(const GroupSignature& sig, const RadialPoint& p, const Angle& th) {
  double s = 0.0;
  for (std::size_t j = 0; j < sig.blocks(); ++j) {
    const double rj2 = p.r[j] * p.r[j];
    if (rj2 == 0.0) continue;
    const double aj = sig.a(j);
    const double mp = j + 1 == sig.blocks() ? mu_prime(th) : detail::mu_prime(aj * th.theta);
    s += aj * aj * rj2 * mp;
  }
  return -0.25 * s;
}

/// (1/16) min{1, (1 - a_{l-1}) pi / a_{l-1}}
inline double eps0(const GroupSignature& sig) {
  if (sig.blocks() == 1) return 1.0 / 16.0;
  const double a = sig.a(sig.blocks() - 2);
  return std::min(1.0, (1.0 - a) * kPi / a) / 16.0;
}

/// Radius of the disc around 0 on which the G family is used.
inline double g_family_radius(const GroupSignature& sig) { return 16.0 * eps0(sig); }

template <class T>
struct GValues {
  T G1, G2, G3, G;
  T dG, d2G, d3G;
};

/// The analytic part of phi(i(pi - xi)) once the pole pi r_l^2 / (4 xi) and the
/// linear term are removed:
///   G1 = xi cot xi, G2 = pi (cot xi - 1/xi), G3 = -sum_{j<l} r_j^2 G1(a_j (pi - xi)) / 4,
///   G = G3 + r_l^2 (G2 - G1) / 4.
template <class T>
GValues<T> g_family_unchecked(const GroupSignature& sig, const RadialPoint& p, const T& xi) {
  GValues<T> g{};
  const std::size_t l = sig.blocks();
  g.G1 = detail::w_cot(xi);
  g.G2 = T(kPi) * detail::cot_minus_inv(xi);
  T g3(0.0), d1(0.0), d2(0.0), d3(0.0);
  for (std::size_t j = 0; j + 1 < l; ++j) {
    const double rj2 = p.r[j] * p.r[j];
    if (rj2 == 0.0) continue;
    const double aj = sig.a(j);
    const T w = T(aj) * (T(kPi) - xi);
    g3 -= T(0.25 * rj2) * detail::w_cot(w);
    d1 -= T(0.25 * rj2 * aj) * detail::mu(w);
    d2 += T(0.25 * rj2 * aj * aj) * detail::mu_prime(w);
    d3 -= T(0.25 * rj2 * aj * aj * aj) * detail::mu_second(w);
  }
  g.G3 = g3;
  const double q = 0.25 * p.r_last() * p.r_last();
  g.G = g3 + T(q) * (g.G2 - g.G1);
  // G1' = -mu, G1'' = -mu', G1''' = -mu''
  g.dG = d1 + T(q) * (T(kPi) * detail::cot_minus_inv_derivative(xi, 1) + detail::mu(xi));
  g.d2G = d2 + T(q) * (T(kPi) * detail::cot_minus_inv_derivative(xi, 2) + detail::mu_prime(xi));
  g.d3G = d3 + T(q) * (T(kPi) * detail::cot_minus_inv_derivative(xi, 3) + detail::mu_second(xi));
  return g;
}

template <class T>
GValues<T> g_family(const GroupSignature& sig, const RadialPoint& p, const T& xi) {
  if (!(std::abs(xi) < g_family_radius(sig))) throw DomainError("g_family: xi outside the analyticity disc");
  return g_family_unchecked(sig, p, xi);
}

/// G3''(0) = sum_{j<l} r_j^2 a_j^2 mu'(a_j pi) / 4
inline double g3_second_at_zero(const GroupSignature& sig, const RadialPoint& p) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < sig.blocks(); ++j)
    s += 0.25 * p.r[j] * p.r[j] * sig.a(j) * sig.a(j) * detail::mu_prime(sig.a(j) * kPi);
  return s;
}

struct PhaseFrame {
  double phiAtITheta = 0.0;
  double phiPP0 = 0.0;
  double eps0 = 0.0;
  double epsilon = 0.0;
  std::optional<double> D1, D2, Jstar;
  std::optional<GValues<double>> gFamily;

  bool near_cut_locus() const noexcept { return D1.has_value(); }
  double d1() const { return require(D1); }
  double d2() const { return require(D2); }
  double jstar() const { return require(Jstar); }
  double d_sum() const { return d1() + d2(); }

 private:
  static double require(const std::optional<double>& v) {
    if (!v) throw RegimeError("phase frame: D1/D2/J* need eps <= eps0");
    return *v;
  }
};

inline PhaseFrame phase_frame(const GroupSignature& sig, const RadialPoint& p, const GeodesicData& geo) {
  PhaseFrame f;
  f.phiAtITheta = -0.25 * geo.dSq;
  f.eps0 = eps0(sig);
  f.epsilon = geo.epsilon;
  const Angle th = geo.angle();
  const double e = geo.epsilon;
  if (geo.branch == Branch::CutLocus) {
    f.phiPP0 = -g3_second_at_zero(sig, p);
  } else {
    f.phiPP0 = phi_second_at_zero(sig, p, th);
  }
  if (e <= f.eps0) {
    const double rl2 = p.r_last() * p.r_last();
    auto ge = g_family(sig, p, e);
    auto g0 = g_family(sig, p, 0.0);
    f.D1 = rl2 == 0.0 ? 0.0 : 0.25 * kPi * rl2 / e;
    f.D2 = 0.5 * ge.d2G * e * e;
    f.Jstar = g0.G - ge.G + ge.dG * e - 0.5 * ge.d2G * e * e;
    f.gFamily = ge;
  }
  return f;
}

/// K(s) = G(eps + i s) - G(eps) - i s G'(eps) + s^2 G''(eps) / 2 (third-order Taylor remainder).
inline cplx k_remainder(const GroupSignature& sig, const RadialPoint& p, double eps, const cplx& s) {
  const auto ge = g_family_unchecked(sig, p, cplx{eps, 0.0});
  const auto gs = g_family_unchecked(sig, p, cplx{eps, 0.0} + kI * s);
  return gs.G - ge.G - kI * s * ge.dG + 0.5 * s * s * ge.d2G;
}

/// Reduced amplitude s(xi) = (xi / pi) h(i (pi - xi)), defined when k_l = 1.
template <class T>
T s_reduced(const GroupSignature& sig, const T& xi) {
  if (sig.k_last() != 1) throw DomainError("s_reduced: needs k_l = 1");
  if (!(std::abs(xi) < g_family_radius(sig))) throw DomainError("s_reduced: xi outside the analyticity disc");
  T v = detail::sinc_inv(xi) * (T(1.0) - xi / T(kPi));
  for (std::size_t j = 0; j + 1 < sig.blocks(); ++j)
    v *= std::pow(detail::sinc_inv(T(sig.a(j)) * (T(kPi) - xi)), sig.k(j));
  return v;
}

/// H(u) = s(eps + i u)
inline cplx s_reduced_line(const GroupSignature& sig, double eps, double u) { return s_reduced(sig, cplx{eps, u}); }

}  // namespace heisenberg
