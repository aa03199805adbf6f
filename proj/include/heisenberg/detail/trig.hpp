#pragma once

// Elementary trigonometric building blocks shared by the geometry and phase
// code. Every function is templated on double / std::complex<double>.
// Near the origin the closed forms cancel catastrophically, so a Taylor
// series (coefficients below, generated symbolically) takes over for
// |w| < kSeriesRadius. Near pi the *_near_pi variants take the complement
// e = pi - w so that no precision is lost forming pi - w.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace heisenberg::detail {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSeriesRadius = 1.0;

// mu(w) = sum c[m] w^(2m+1)
inline constexpr std::array<double, 17> kMuOdd = {
    6.66666666666666630e-01, 8.88888888888888923e-02, 1.26984126984126984e-02,
    1.69312169312169319e-03, 2.13777991555769332e-04, 2.59728513696767650e-05,
    3.06963269926232900e-06, 3.55433740639674850e-07, 4.05141237302561850e-08,
    4.56103024091843616e-09, 5.08341517178057699e-10, 5.61880963675797238e-11,
    6.16746452406074999e-12, 6.72963629332615806e-13, 7.30558620875501122e-14,
    7.89558017445506393e-15, 8.49988874221507526e-16,
};
inline constexpr std::array<double, 17> kMuPrimeEven = {
    6.66666666666666630e-01, 2.66666666666666663e-01, 6.34920634920634885e-02,
    1.18518518518518513e-02, 1.92400192400192407e-03, 2.85701365066444435e-04,
    3.99052250904102779e-05, 5.33150610959512338e-06, 6.88740103414355139e-07,
    8.66595745774502986e-08, 1.06751718607392121e-08, 1.29232621645433367e-09,
    1.54186613101518755e-10, 1.81700179919806272e-11, 2.11862000053895312e-12,
    2.44762985408106999e-13, 2.80496328493097491e-14,
};
inline constexpr std::array<double, 17> kMuSecondOdd = {
    5.33333333333333326e-01, 2.53968253968253954e-01, 7.11111111111111110e-02,
    1.53920153920153926e-02, 2.85701365066444446e-03, 4.78862701084923281e-04,
    7.46410855343317256e-05, 1.10198416546296822e-05, 1.55987234239410530e-06,
    2.13503437214784235e-07, 2.84311767619953407e-08, 3.70047871443644990e-09,
    4.72420467791496248e-10, 5.93213600150906873e-11, 7.34288956224320987e-12,
    8.97588251177911972e-13, 1.08513567307128798e-13,
};
inline constexpr std::array<double, 17> kSincInvSqEven = {
    1.00000000000000000e+00, 3.33333333333333315e-01, 6.66666666666666657e-02,
    1.05820105820105814e-02, 1.48148148148148141e-03, 1.92400192400192391e-04,
    2.38084470888703707e-05, 2.85037322074359128e-06, 3.33219131849695211e-07,
    3.82633390785752848e-08, 4.33297872887251477e-09, 4.85235084579055124e-10,
    5.38469256855972340e-11, 5.93025435005841376e-12, 6.48929213999308069e-13,
    7.06206666846317680e-14, 7.64884329400334372e-15,
};
inline constexpr std::array<double, 17> kCotMinusInvOdd = {
    -3.33333333333333315e-01, -2.22222222222222231e-02, -2.11640211640211654e-03,
    -2.11640211640211649e-04, -2.13777991555769346e-05, -2.16440428080639722e-06,
    -2.19259478518737778e-07, -2.22146087899796781e-08, -2.25078465168089944e-09,
    -2.28051512045921834e-10, -2.31064325990026242e-11, -2.34117068198248822e-12,
    -2.37210174002336530e-13, -2.40344153333077046e-14, -2.43519540291833673e-15,
    -2.46736880451720748e-16, -2.49996727712208099e-17,
};

template <class T>
inline double magnitude(const T& x) {
  return std::abs(x);
}

template <class T, std::size_t N>
inline T even_series(const std::array<double, N>& c, const T& w) {
  const T w2 = w * w;
  T acc = T(c[N - 1]);
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * w2 + T(c[i]);
  return acc;
}

template <class T, std::size_t N>
inline T odd_series(const std::array<double, N>& c, const T& w) {
  return w * even_series(c, w);
}

// Derivative of order `order` of sum c[m] w^(2m+1+offset), offset in {0,1}.
template <class T, std::size_t N>
inline T series_derivative(const std::array<double, N>& c, const T& w, int offset, int order) {
  T acc(0.0);
  for (std::size_t m = 0; m < N; ++m) {
    const int p = static_cast<int>(2 * m) + 1 - offset;
    if (p < order) continue;
    double fall = 1.0;
    for (int q = 0; q < order; ++q) fall *= static_cast<double>(p - q);
    acc += T(c[m] * fall) * std::pow(w, p - order);
  }
  return acc;
}

// mu(w) = w / sin^2 w - cot w
template <class T>
inline T mu(const T& w) {
  if (magnitude(w) < kSeriesRadius) return odd_series(kMuOdd, w);
  const T s = std::sin(w);
  return w / (s * s) - std::cos(w) / s;
}

// mu'(w) = 2 (sin w - w cos w) / sin^3 w
template <class T>
inline T mu_prime(const T& w) {
  if (magnitude(w) < kSeriesRadius) return even_series(kMuPrimeEven, w);
  const T s = std::sin(w);
  return T(2.0) * (s - w * std::cos(w)) / (s * s * s);
}

// mu''(w) = 2 (w sin^2 w - 3 (sin w - w cos w) cos w) / sin^4 w
template <class T>
inline T mu_second(const T& w) {
  if (magnitude(w) < kSeriesRadius) return odd_series(kMuSecondOdd, w);
  const T s = std::sin(w);
  const T c = std::cos(w);
  const T s2 = s * s;
  return T(2.0) * (w * s2 - T(3.0) * (s - w * c) * c) / (s2 * s2);
}

// (w / sin w)^2
template <class T>
inline T sinc_inv_sq(const T& w) {
  if (magnitude(w) < kSeriesRadius) return even_series(kSincInvSqEven, w);
  const T q = w / std::sin(w);
  return q * q;
}

// w / sin w
template <class T>
inline T sinc_inv(const T& w) {
  if (magnitude(w) < 1e-4) {
    const T w2 = w * w;
    return T(1.0) + w2 / T(6.0) + T(7.0 / 360.0) * w2 * w2;
  }
  return w / std::sin(w);
}

// w cot w
template <class T>
inline T w_cot(const T& w) {
  if (magnitude(w) < kSeriesRadius) return T(1.0) + w * odd_series(kCotMinusInvOdd, w);
  return w * std::cos(w) / std::sin(w);
}

// cot w - 1/w, analytic at 0
template <class T>
inline T cot_minus_inv(const T& w) {
  if (magnitude(w) < kSeriesRadius) return odd_series(kCotMinusInvOdd, w);
  return std::cos(w) / std::sin(w) - T(1.0) / w;
}

// Derivatives of cot w - 1/w of order 1..3.
template <class T>
inline T cot_minus_inv_derivative(const T& w, int order) {
  if (magnitude(w) < kSeriesRadius) return series_derivative(kCotMinusInvOdd, w, 0, order);
  const T s = std::sin(w);
  const T c = std::cos(w);
  const T s2 = s * s;
  switch (order) {
    case 1:
      return -T(1.0) / s2 + T(1.0) / (w * w);
    case 2:
      return T(2.0) * c / (s2 * s) - T(2.0) / (w * w * w);
    default:
      return -T(2.0) * (T(1.0) + T(2.0) * c * c) / (s2 * s2) + T(6.0) / (w * w * w * w);
  }
}

// Same quantities at w = pi - e, written in terms of e.
template <class T>
inline T mu_near_pi(const T& e) {
  const T s = std::sin(e);
  return (T(kPi) - e) / (s * s) + std::cos(e) / s;
}

template <class T>
inline T mu_prime_near_pi(const T& e) {
  const T s = std::sin(e);
  return T(2.0) * (s + (T(kPi) - e) * std::cos(e)) / (s * s * s);
}

template <class T>
inline T mu_second_near_pi(const T& e) {
  const T s = std::sin(e);
  const T c = std::cos(e);
  const T s2 = s * s;
  const T w = T(kPi) - e;
  return T(2.0) * (w * s2 + T(3.0) * (s + w * c) * c) / (s2 * s2);
}

template <class T>
inline T sinc_inv_near_pi(const T& e) {
  return (T(kPi) - e) / std::sin(e);
}

template <class T>
inline T w_cot_near_pi(const T& e) {
  return -(T(kPi) - e) * std::cos(e) / std::sin(e);
}

}  // namespace heisenberg::detail
