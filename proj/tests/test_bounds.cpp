#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "heisenberg/bounds.hpp"

using namespace heisenberg;
constexpr double pi = std::numbers::pi;

namespace {

GroupSignature h5() { return GroupSignature({1, 1}, {0.5, 1.0}); }

GridSpec small_grid(double h) {
  GridSpec g;
  g.thetas = {0.0, 0.8, 2.2, 3.1};
  g.distances = {0.1, 1.0, 4.0, 12.0};
  g.times = {h};
  return g;
}

}  // namespace

TEST(Comparator, HeatEstimateAtOrigin) {
  const auto h11 = GroupSignature::isotropic(1);
  EXPECT_EQ(comparator_value(Comparator::HEB1, h11, {{0.0}, 0.0}, 1.0), 1.0);
  EXPECT_NEAR(comparator_value(Comparator::HEB1, h11, {{0.0}, 0.0}, 2.0), 0.25, 1e-15);
}

TEST(Comparator, IsotropicFarForm) {
  // (1 + d)^{2(n-1)} (1 + |z| d)^{1/2-n} e^{-d^2/4} -> d^{2(n-1)} (|z| d)^{1/2-n} e^{-d^2/4}
  const auto sig = GroupSignature::isotropic(2);
  double prev = 1.0;
  for (double d : {50.0, 500.0, 5000.0}) {
    const auto p = ray_point(sig, 1.0, d);
    const double z = p.r_total();
    const double want = 2 * std::log(d) - 1.5 * std::log(z * d) - d * d / 4;
    const double dev = std::abs(log_comparator_value(Comparator::IHE, sig, p, 1.0) - want);
    EXPECT_LT(dev, prev);
    prev = dev;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Comparator, PehkOnH11HasNoBracket) {
  // k_l = 1: PEHK is HEB1 up to a bounded factor
  const auto h11 = GroupSignature::isotropic(1);
  double lo = 1e300, hi = 0.0;
  for (double th : {0.0, 0.8, 2.2, 3.1}) {
    for (double d : {0.1, 1.0, 10.0, 100.0}) {
      const auto p = ray_point(h11, th, d);
      const double q = std::exp(log_comparator_value(Comparator::PEHK, h11, p, 1.0) -
                                log_comparator_value(Comparator::HEB1, h11, p, 1.0));
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 30.0);
}

TEST(Comparator, DomainErrors) {
  const auto sig = h5();
  const auto h11 = GroupSignature::isotropic(1);
  EXPECT_THROW(log_comparator_value(Comparator::IHE, sig, {{1.0, 1.0}, 1.0}, 1.0), DomainError);
  EXPECT_THROW(log_comparator_value(Comparator::HEB1, GroupSignature::isotropic(2), {{1.0}, 1.0}, 1.0), DomainError);
  EXPECT_THROW(log_comparator_value(Comparator::PEHK, sig, {{1.0, 0.0}, 5.0}, 1.0), DomainError);
  EXPECT_THROW(log_comparator_value(Comparator::PEHK, h11, {{0.0}, 5.0}, 1.0), DomainError);
  EXPECT_THROW(log_comparator_value(Comparator::HL1, h11, {{1.0}, 1.0}, 1.0, 0.0), DomainError);
  EXPECT_THROW(log_comparator_value(Comparator::HL1, h11, {{1.0}, 1.0}, 1.0, 4.0), DomainError);
  EXPECT_THROW(log_comparator_value(Comparator::HU1, h11, {{1.0}, 1.0}, 0.0), DomainError);
}

TEST(Sandwich, Heb1StandardGrid) {
  const auto rep = sandwich_sweep(Comparator::HEB1, GroupSignature::isotropic(1), standard_grid());
  EXPECT_EQ(rep.grid.size() + rep.skipped.size(), 200u);
  EXPECT_TRUE(rep.skipped.empty());
  EXPECT_GT(rep.ratioMin, 0.0);
  EXPECT_LT(rep.spread(), 50.0);
  EXPECT_EQ(rep.grid[rep.argmin].ratio(), rep.ratioMin);
  EXPECT_EQ(rep.grid[rep.argmax].ratio(), rep.ratioMax);
  RecordProperty("spread", std::to_string(rep.spread()));
}

TEST(Sandwich, IsotropicSpreadGrowsWithDimension) {
  const auto r2 = sandwich_sweep(Comparator::IHE, GroupSignature::isotropic(2), small_grid(1.0));
  const auto r3 = sandwich_sweep(Comparator::IHE, GroupSignature::isotropic(3), small_grid(1.0));
  ASSERT_TRUE(r2.skipped.empty());
  ASSERT_TRUE(r3.skipped.empty());
  EXPECT_TRUE(std::isfinite(r3.spread()));
  EXPECT_GT(r3.spread(), r2.spread());
}

TEST(Sandwich, LowerAndUpperBounds) {
  const auto sig = h5();
  const auto lo = sandwich_sweep(Comparator::HL1, sig, small_grid(1.0));
  const auto hi = sandwich_sweep(Comparator::HU1, sig, small_grid(1.0));
  EXPECT_GT(lo.ratioMin, 0.0);
  EXPECT_TRUE(std::isfinite(hi.ratioMax));
  for (const auto& pt : lo.grid) EXPECT_GE(std::exp(pt.log_kernel), std::exp(pt.log_comparator) * lo.ratioMin);
}

TEST(Sandwich, PehkSkipsCutLocus) {
  auto g = small_grid(1.0);
  g.thetas.push_back(pi);
  const auto rep = sandwich_sweep(Comparator::PEHK, h5(), g);
  EXPECT_EQ(rep.skipped.size(), g.distances.size());
  EXPECT_EQ(rep.grid.size(), 16u);
  for (const auto& s : rep.skipped) EXPECT_NE(s.find("eps*"), std::string::npos) << s;
}

TEST(Sandwich, ScaleCovariant) {
  const auto sig = h5();
  for (Comparator c : {Comparator::PEHK, Comparator::HU1, Comparator::HL1}) {
    const auto a = sandwich_sweep(c, sig, small_grid(1.0));
    const auto b = sandwich_sweep(c, sig, small_grid(4.0));
    ASSERT_EQ(a.grid.size(), b.grid.size());
    for (std::size_t i = 0; i < a.grid.size(); ++i)
      EXPECT_NEAR(b.grid[i].ratio() / a.grid[i].ratio(), 1.0, 1e-6) << to_string(c) << " point " << i;
  }
}

TEST(Lm4, Examples) {
  const auto r2 = lm4_bound_check(2, {0.0});
  EXPECT_NEAR(r2.grid[0].ratio(), pi * pi / 2, 1e-10);
  std::vector<double> s;
  for (int i = 0; i <= 40; ++i) s.push_back(0.25 * i);
  const auto r4 = lm4_bound_check(4, s);
  EXPECT_LT(r4.spread(), 20.0);
  std::vector<double> neg;
  for (double v : s) neg.push_back(-v);
  const auto r4n = lm4_bound_check(4, neg);
  for (std::size_t i = 0; i < s.size(); ++i)
    EXPECT_NEAR(r4n.grid[i].log_kernel, r4.grid[i].log_kernel, 1e-12 * (1 + std::abs(r4.grid[i].log_kernel)));
  EXPECT_THROW(lm4_bound_check(1, s), DomainError);
}

TEST(Gradient, VanishesAlongCenter) {
  const auto sig = h5();
  const FullPoint g = make_full(sig, {{{0.0, 0.0}}, {{0.0, 0.0}}}, 2.0);
  for (const auto& u : horizontal_fields(sig)) EXPECT_NEAR(log_derivative(sig, g, u, 1.0), 0.0, 1e-6);
}

TEST(Gradient, SupIsFinite) {
  const auto h11 = GroupSignature::isotropic(1);
  const auto grid = grad_grid(h11, 12, 5);
  const auto s = grad_sup(h11, grid);
  EXPECT_TRUE(std::isfinite(s.sup));
  EXPECT_GT(s.sup, 0.0);
  for (double r : s.ratios) EXPECT_FALSE(std::isnan(r));
  RecordProperty("sup", std::to_string(s.sup));
}

TEST(Gradient, BoundScalesWithTime) {
  // ln p_h(g) = ln p_1(delta_{1/sqrt h} g) - (n+1) ln h, so h |grad ln p_h| / d is invariant
  const auto h11 = GroupSignature::isotropic(1);
  const auto g = grad_grid(h11, 1, 9).front();
  const auto a = grad_log_check(h11, g, 1.0);
  const auto b = grad_log_check(h11, dilate(g, 2.0), 4.0);
  EXPECT_NEAR(4.0 * b.gradNorm / b.d, a.gradNorm / a.d, 1e-6 * a.gradNorm / a.d);
  EXPECT_THROW(grad_log_check(h11, make_full(h11, {{{0.0, 0.0}}}, 0.0), 1.0), DomainError);
}

TEST(Gradient, MixedDerivativeExpansion) {
  const auto sig = h5();
  for (const auto& g : grad_grid(sig, 3, 11)) {
    const double a = xy_mixed_expansion(sig, g);
    const double b = xy_mixed_fd(sig, g);
    EXPECT_NEAR(a, b, 1e-5 * std::abs(b));
  }
}
