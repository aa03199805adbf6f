// Distances along a few rays of H((1,1),(1/2,1)), up to and past the cut locus.

#include <cstdio>

#include "heisenberg/heisenberg.hpp"

using namespace heisenberg;

int main() {
  const GroupSignature sig({1, 1}, {0.5, 1.0});
  std::printf("%8s %8s %10s %12s %12s  %s\n", "r1", "r2", "t", "theta", "d", "branch");
  for (double r2 : {1.0, 0.1, 0.0}) {
    for (double t : {0.0, 0.5, 2.0, 10.0}) {
      const RadialPoint p{{1.0, r2}, t};
      const auto g = solve_geodesic(sig, p);
      std::printf("%8.2f %8.2f %10.2f %12.8f %12.8f  %s\n", p.r[0], r2, t, g.theta, std::sqrt(g.dSq),
                  to_string(g.branch));
    }
  }
  // past the cut threshold the distance grows like sqrt(4 pi |t|)
  RadialPoint q{{1.0, 0.0}, 0.0};
  const double tc = cut_threshold(sig, q);
  std::printf("\ncut threshold at r1 = 1: %.12f\n", tc);
  for (double t : {tc, 2 * tc, 100.0, 1e4}) {
    q.t = t;
    std::printf("t = %-12.6g d^2 / (4 pi t) = %.10f\n", t, cc_distance_sq(sig, q) / (4 * kPi * t));
  }
}
