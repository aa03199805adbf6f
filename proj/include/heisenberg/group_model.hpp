#pragma once

// Group parameters H(K, A), points in full and reduced (radial) form, and the
// dilation / reflection maps.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "heisenberg/errors.hpp"

namespace heisenberg {

/// Parameters (K, A) of the Heisenberg group H(K, A) = C^{k_1} x ... x C^{k_l} x R.
///
/// Frequencies must ascend strictly with the last one exactly 1. The check is
/// exact: callers holding a_l ~ 1 must renormalize themselves.
class GroupSignature {
 public:
  GroupSignature(std::vector<int> k, std::vector<double> a) : k_(std::move(k)), a_(std::move(a)) {
    if (k_.empty()) throw DomainError("signature needs at least one block");
    if (k_.size() != a_.size()) throw DomainError("signature: k and a must have equal length");
    for (int kj : k_)
      if (kj < 1) throw DomainError("signature: block dimensions must be >= 1");
    for (std::size_t j = 0; j < a_.size(); ++j) {
      if (!std::isfinite(a_[j]) || a_[j] <= 0.0) throw DomainError("signature: frequencies must be positive");
      if (j > 0 && !(a_[j - 1] < a_[j])) throw DomainError("signature: frequencies must ascend strictly");
    }
    if (a_.back() != 1.0) throw DomainError("signature: last frequency must equal 1");
    n_ = std::accumulate(k_.begin(), k_.end(), 0);
  }

  /// H(n, 1).
  static GroupSignature isotropic(int n) { return GroupSignature({n}, {1.0}); }

  std::size_t blocks() const noexcept { return k_.size(); }
  std::span<const int> k() const noexcept { return k_; }
  std::span<const double> a() const noexcept { return a_; }
  int k(std::size_t j) const { return k_.at(j); }
  double a(std::size_t j) const { return a_.at(j); }
  int k_last() const noexcept { return k_.back(); }
  int n() const noexcept { return n_; }
  int homogeneous_dimension() const noexcept { return 2 * n_ + 2; }
  bool is_isotropic() const noexcept { return k_.size() == 1; }

  std::string to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << "H((";
    for (std::size_t j = 0; j < k_.size(); ++j) os << (j ? "," : "") << k_[j];
    os << "),(";
    for (std::size_t j = 0; j < a_.size(); ++j) os << (j ? "," : "") << a_[j];
    os << "))";
    return os.str();
  }

  friend bool operator==(const GroupSignature&, const GroupSignature&) = default;

 private:
  std::vector<int> k_;
  std::vector<double> a_;
  int n_ = 0;
};

/// Reduced coordinates: block moduli r_j = |z_j| and the vertical coordinate.
/// Distance and heat kernel depend on a point only through these.
struct RadialPoint {
  std::vector<double> r;
  double t = 0.0;

  double r_total_sq() const noexcept {
    double s = 0.0;
    for (double rj : r) s += rj * rj;
    return s;
  }
  double r_total() const noexcept { return std::sqrt(r_total_sq()); }
  double r_last() const { return r.back(); }
  bool is_origin() const noexcept { return t == 0.0 && r_total_sq() == 0.0; }
};

inline RadialPoint make_radial(const GroupSignature& sig, std::vector<double> r, double t) {
  if (r.size() != sig.blocks()) throw DomainError("point has wrong number of blocks for signature");
  for (double rj : r)
    if (!(rj >= 0.0) || !std::isfinite(rj)) throw DomainError("block moduli must be finite and >= 0");
  if (!std::isfinite(t)) throw DomainError("vertical coordinate must be finite");
  return RadialPoint{std::move(r), t};
}

/// delta_rho(z, t) = (rho z, rho^2 t)
inline RadialPoint dilate(const RadialPoint& p, double rho) {
  if (!(rho > 0.0)) throw DomainError("dilation factor must be positive");
  RadialPoint q = p;
  for (double& rj : q.r) rj *= rho;
  q.t *= rho * rho;
  return q;
}

inline RadialPoint reflect_t(const RadialPoint& p) {
  RadialPoint q = p;
  q.t = -q.t;
  return q;
}

/// Full coordinates: z_j in C^{k_j} (x + i y per complex coordinate) and t.
struct FullPoint {
  std::vector<std::vector<std::complex<double>>> z;
  double t = 0.0;
};

inline FullPoint make_full(const GroupSignature& sig, std::vector<std::vector<std::complex<double>>> z,
                           double t) {
  if (z.size() != sig.blocks()) throw DomainError("full point has wrong number of blocks");
  for (std::size_t j = 0; j < z.size(); ++j)
    if (static_cast<int>(z[j].size()) != sig.k(j)) throw DomainError("full point block has wrong dimension");
  return FullPoint{std::move(z), t};
}

inline RadialPoint reduce(const FullPoint& g) {
  RadialPoint p;
  p.t = g.t;
  p.r.reserve(g.z.size());
  for (const auto& block : g.z) {
    double s = 0.0;
    for (const auto& c : block) s += std::norm(c);
    p.r.push_back(std::sqrt(s));
  }
  return p;
}

inline FullPoint dilate(const FullPoint& g, double rho) {
  if (!(rho > 0.0)) throw DomainError("dilation factor must be positive");
  FullPoint q = g;
  for (auto& block : q.z)
    for (auto& c : block) c *= rho;
  q.t *= rho * rho;
  return q;
}

/// (z, t)(z', t') = (z + z', t + t' + 2 sum_i a_i Im <z_i, z_i'>), <u, v> = sum u conj(v).
inline FullPoint multiply(const GroupSignature& sig, const FullPoint& g, const FullPoint& h) {
  FullPoint out = g;
  double twist = 0.0;
  for (std::size_t i = 0; i < g.z.size(); ++i) {
    std::complex<double> inner{0.0, 0.0};
    for (std::size_t j = 0; j < g.z[i].size(); ++j) {
      out.z[i][j] += h.z[i][j];
      inner += g.z[i][j] * std::conj(h.z[i][j]);
    }
    twist += sig.a(i) * inner.imag();
  }
  out.t = g.t + h.t + 2.0 * twist;
  return out;
}

/// Horizontal direction X_{i,j} (imaginary = false) or Y_{i,j} (imaginary = true).
struct HorizontalField {
  std::size_t block = 0;
  std::size_t coord = 0;
  bool imaginary = false;
};

/// exp(s U) for a horizontal field U: the point (s e_U, 0).
inline FullPoint exp_horizontal(const GroupSignature& sig, const HorizontalField& u, double s) {
  FullPoint e;
  e.z.resize(sig.blocks());
  for (std::size_t i = 0; i < sig.blocks(); ++i) e.z[i].assign(static_cast<std::size_t>(sig.k(i)), {0.0, 0.0});
  e.z.at(u.block).at(u.coord) = u.imaginary ? std::complex<double>{0.0, s} : std::complex<double>{s, 0.0};
  return e;
}

inline std::vector<HorizontalField> horizontal_fields(const GroupSignature& sig) {
  std::vector<HorizontalField> out;
  for (std::size_t i = 0; i < sig.blocks(); ++i)
    for (std::size_t j = 0; j < static_cast<std::size_t>(sig.k(i)); ++j) {
      out.push_back({i, j, false});
      out.push_back({i, j, true});
    }
  return out;
}

}  // namespace heisenberg
