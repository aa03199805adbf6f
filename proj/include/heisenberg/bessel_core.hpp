#pragma once

// Modified Bessel function I_nu for real nu > -1/2, the Bessel-Gaussian
// integral V(r, b; nu) in its two forms (an oscillatory tau-integral and a
// positive s-integral), its envelope (r + sqrt b)^{nu-1}, and the factor
// S_k that multiplies the leading term near the cut locus.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "heisenberg/errors.hpp"
#include "heisenberg/quadrature.hpp"

namespace heisenberg {

namespace detail {

inline constexpr double kSqrtPi = 1.7724538509055160273;

inline void check_order(double nu) {
  if (!(nu > -0.5) || !std::isfinite(nu)) throw DomainError("bessel: order must exceed -1/2");
}

// Boost's integrate() is not const-qualified; one rule per thread.
inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule;
}

}  // namespace detail

namespace detail {

inline double bessel_series_any(double nu, double u) {
  if (u == 0) return nu == 0 ? 1.0 : (nu > 0 ? 0.0 : std::numeric_limits<double>::infinity());
  const double q = 0.25 * u * u;
  double term = std::exp(nu * std::log(0.5 * u) - std::lgamma(nu + 1));
  double sum = term;
  for (int m = 1; m < 500; ++m) {
    term *= q / (m * (nu + m));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

}  // namespace detail

/// sum_m (u/2)^{nu+2m} / (m! Gamma(nu+m+1))
inline double bessel_I_series(double nu, double u) {
  detail::check_order(nu);
  if (u < 0) throw DomainError("bessel: argument must be >= 0");
  return detail::bessel_series_any(nu, u);
}

/// (u/2)^nu / (sqrt(pi) Gamma(nu+1/2)) * integral_{-1}^{1} (1 - x^2)^{nu-1/2} e^{-u x} dx,
/// by tanh-sinh quadrature (the weight may be singular at both ends).
inline double bessel_I_integral(double nu, double u) {
  detail::check_order(nu);
  if (u < 0) throw DomainError("bessel: argument must be >= 0");
  if (u == 0) return bessel_I_series(nu, u);
  // xc is the signed distance to the nearer endpoint, so 1 - x^2 keeps full precision.
  auto f = [nu, u](double x, double xc) {
    const double d = std::abs(xc);
    return std::exp((nu - 0.5) * std::log(d * (2 - d)) - u * x - u);
  };
  const double v = detail::tanh_sinh_rule().integrate(f, -1.0, 1.0, 1e-15);
  return std::exp(nu * std::log(0.5 * u) + u - std::lgamma(nu + 0.5)) / detail::kSqrtPi * v;
}

/// e^{-u} I_nu(u). For u > 30 the integral is rewritten around the endpoint
/// carrying the growth: with x = 1 - y/u,
///   e^{-u} I_nu(u) = 2^{-nu} u^{-1/2} / (sqrt(pi) Gamma(nu+1/2)) int_0^{2u} y^{nu-1/2} (2 - y/u)^{nu-1/2} e^{-y} dy.
inline double bessel_I_scaled(double nu, double u) {
  if (!(nu > -1) || !std::isfinite(nu)) throw DomainError("bessel: scaled order must exceed -1");
  if (u < 0) throw DomainError("bessel: argument must be >= 0");
  // Positive series terms: no cancellation, fine for any order > -1 at moderate u.
  if (nu <= -0.5 && u <= 30) return std::exp(-u) * detail::bessel_series_any(nu, u);
  if (u <= 10) return std::exp(-u) * bessel_I_series(nu, u);
  if (u <= 30) return std::exp(-u) * bessel_I_integral(nu, u);
  if (nu <= -0.5) {
    // I_nu = I_{nu+2} + 2(nu+1)/u I_{nu+1}; upward in order, stable for u > 30.
    return bessel_I_scaled(nu + 2, u) + 2 * (nu + 1) / u * bessel_I_scaled(nu + 1, u);
  }
  const double top = std::min(2 * u, 80.0);
  auto f = [nu, u, top](double y, double yc) {
    // yc is the distance to the nearer endpoint; it keeps 2 - y/u accurate near y = 2u.
    const double two_minus = (top == 2 * u && y > u) ? std::abs(yc) / u : 2 - y / u;
    return std::exp((nu - 0.5) * (std::log(y) + std::log(two_minus)) - y);
  };
  const double v = detail::tanh_sinh_rule().integrate(f, 0.0, top, 1e-15);
  return std::exp(-nu * std::log(2.0) - 0.5 * std::log(u) - std::lgamma(nu + 0.5)) / detail::kSqrtPi * v;
}

/// I_nu(u): series for u <= 10, integral representation up to 30, scaled form beyond.
inline double bessel_I(double nu, double u) {
  if (u <= 10) return bessel_I_series(nu, u);
  if (u <= 30) return bessel_I_integral(nu, u);
  return std::exp(u) * bessel_I_scaled(nu, u);
}

/// log of sum_m x^m / (m! Gamma(nu+m)) = x^{-(nu-1)/2} I_{nu-1}(2 sqrt x), nu > 0, x >= 0.
/// Equal to 1/Gamma(nu) at x = 0.
inline double log_bessel_reduced(double nu, double x) {
  if (!(nu > 0)) throw DomainError("reduced Bessel kernel: nu must be > 0");
  if (x < 0) throw DomainError("reduced Bessel kernel: x must be >= 0");
  if (x <= 25) {
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 500; ++m) {
      term *= x / (m * (nu + m - 1));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::log(sum) - std::lgamma(nu);
  }
  const double u = 2 * std::sqrt(x);
  return -0.5 * (nu - 1) * std::log(x) + u + std::log(bessel_I_scaled(nu - 1, u));
}

inline double bessel_reduced(double nu, double x) { return std::exp(log_bessel_reduced(nu, x)); }

struct VParams {
  double nu = 1.0;
  double r = 0.0;
  double b = 1.0;
};

namespace detail {

inline void check_vparams(const VParams& v) {
  if (!(v.nu > 0) || !std::isfinite(v.nu)) throw DomainError("V(r,b;nu): nu must be > 0");
  if (!(v.r >= 0) || !std::isfinite(v.r)) throw DomainError("V(r,b;nu): r must be >= 0");
  if (!(v.b > 0) || !std::isfinite(v.b)) throw DomainError("V(r,b;nu): b must be > 0");
}

}  // namespace detail

struct IntegralValue {
  double value = 0.0;
  double error = 0.0;
};

struct ComplexIntegralValue {
  std::complex<double> value{};
  double error = 0.0;
};

/// integral over R of (1 + i tau)^{-nu} exp(-b tau^2 + i r tau + r / (1 + i tau)) dtau,
/// principal branch for the power.
inline ComplexIntegralValue plancherel_lhs(const VParams& vp, double tol = 1e-12) {
  detail::check_vparams(vp);
  using cplx = std::complex<double>;
  const double nu = vp.nu, r = vp.r, b = vp.b;
  // |integrand| = (1 + tau^2)^{-nu/2} exp(-b tau^2 + r / (1 + tau^2)) <= e^r
  auto f = [=](double tau) {
    const cplx w{1.0, tau};
    return std::exp(-nu * std::log(w) - b * tau * tau + cplx{0.0, r * tau} + r / w - r);
  };
  const double T = std::sqrt((60.0 + r) / b) + 1.0;
  std::vector<double> pts{-T, 0.0, T};
  const double scale = std::min({1.0, 1.0 / std::sqrt(b)});
  for (double x = 0.25 * scale; x < T; x *= 2) {
    pts.push_back(x);
    pts.push_back(-x);
  }
  if (r > 0) {
    const double period = 2 * 3.14159265358979323846 / r;
    for (double x = period; x < T; x += period) {
      pts.push_back(x);
      pts.push_back(-x);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  quad::Options o;
  o.rel_tol = tol;
  o.l1_floor = 64 * std::numeric_limits<double>::epsilon();
  auto res = quad::integrate(f, pts, o);
  const double er = std::exp(r);
  return {res.value * er, (res.error + 20 * std::numeric_limits<double>::epsilon() * res.l1) * er};
}

/// sqrt(pi / b) int_0^inf e^{-s} (s/r)^{(nu-1)/2} I_{nu-1}(2 sqrt(r s)) e^{-(s-r)^2 / (4b)} ds,
/// written with the reduced kernel as s^{nu-1} Bt_nu(r s) so that r = 0 needs no
/// special case. For nu < 1, s = sigma^{1/nu} removes the endpoint singularity.
inline IntegralValue plancherel_rhs(const VParams& vp, double tol = 1e-12) {
  detail::check_vparams(vp);
  const double nu = vp.nu, r = vp.r, b = vp.b;
  auto log_g = [=](double s) {  // log of e^{-s} Bt(r s) e^{-(s-r)^2/4b}
    return -s + log_bessel_reduced(nu, r * s) - (s - r) * (s - r) / (4 * b);
  };
  const bool sub = nu < 1;
  // In the substituted variable the power s^{nu-1} is absorbed by the Jacobian.
  auto log_f = [=](double s) { return sub ? log_g(s) : log_g(s) + (nu - 1) * std::log(s); };
  // Upper limit: past the Gaussian peak, where the exponent has fallen by 60.
  // The Gaussian can be far narrower than 1, so the peak search is seeded at r.
  double S = r + 2 * std::sqrt(b);
  double peak = r > 0 ? log_f(r) : -1e300;
  for (int i = 1; i <= 64; ++i) peak = std::max(peak, log_f(S * i / 64.0));
  while (log_f(S) > peak - 60) S *= 1.5;
  auto integrand = [=](double x) {
    if (sub) {
      const double s = std::pow(x, 1.0 / nu);
      return std::exp(log_g(s) - peak) / nu;
    }
    if (x == 0) return nu == 1 ? std::exp(log_g(0.0) - peak) : 0.0;
    return std::exp(log_g(x) + (nu - 1) * std::log(x) - peak);
  };
  // Breakpoints in s: a fine comb across the Gaussian at r, doubling gaps away
  // from it, and a coarse uniform grid for the broad cases.
  const double sd = std::sqrt(2 * b);
  std::vector<double> spts{0.0, S};
  for (int j = -12; j <= 12; ++j) spts.push_back(r + j * sd);
  for (double g = 16 * sd; g < S; g *= 2) {
    spts.push_back(r + g);
    spts.push_back(r - g);
  }
  for (int i = 1; i < 64; ++i) spts.push_back(S * i / 64.0);
  std::vector<double> pts;
  for (double x : spts)
    if (x >= 0 && x <= S) pts.push_back(sub ? std::pow(x, nu) : x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  quad::Options o;
  o.rel_tol = tol;
  auto res = quad::integrate(integrand, pts, o);
  const double front = std::sqrt(3.14159265358979323846 / b) * std::exp(peak);
  return {front * res.value, front * res.error};
}

struct Ke1Ratio {
  double V = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

/// V(r, b; nu) against its envelope (r + sqrt b)^{nu-1} on the box r, b <= gamma0.
inline Ke1Ratio ke1_ratio(const VParams& vp, double gamma0) {
  detail::check_vparams(vp);
  if (!(vp.r <= gamma0 && vp.b <= gamma0)) throw DomainError("ke1_ratio: (r, b) outside the box [0, gamma0]");
  Ke1Ratio k;
  k.V = plancherel_rhs(vp).value;
  k.bound = std::pow(vp.r + std::sqrt(vp.b), vp.nu - 1);
  k.ratio = k.V / k.bound;
  return k;
}

/// Upper comparison integral (1/sqrt b) int_0^inf s^{nu-1} e^{-(s-r)^2/4b} ds split at
/// r + sqrt b into Lambda1 + Lambda2, plus the simple bound on Lambda2.
struct Ke1Split {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda2_bound = 0.0;  // (r + sqrt b)^{nu-1} sqrt(pi) erfc(1/2), valid for nu <= 1
};

inline Ke1Split ke1_split(const VParams& vp) {
  detail::check_vparams(vp);
  const double nu = vp.nu, r = vp.r, b = vp.b;
  const double cut = r + std::sqrt(b);
  auto& ts = detail::tanh_sinh_rule();
  auto g = [=](double s) { return std::exp((nu - 1) * std::log(s) - (s - r) * (s - r) / (4 * b)); };
  Ke1Split k;
  k.lambda1 = ts.integrate(g, 0.0, cut, 1e-13) / std::sqrt(b);
  boost::math::quadrature::exp_sinh<double> es;
  k.lambda2 = es.integrate([&](double u) { return g(cut + u); }, 1e-13) / std::sqrt(b);
  k.lambda2_bound = std::pow(cut, nu - 1) * detail::kSqrtPi * std::erfc(0.5);
  return k;
}

/// S_k = V(D1, D2; k)
inline double s_factor(int kl, double D1, double D2) {
  if (kl < 1) throw DomainError("s_factor: k_l must be >= 1");
  if (!(D2 > 0)) throw DomainError("s_factor: D2 must be > 0");
  return plancherel_rhs({double(kl), D1, D2}).value;
}

}  // namespace heisenberg
