// The same heat kernel value by each integration route, moving out along a ray.

#include <cstdio>

#include "heisenberg/heisenberg.hpp"

using namespace heisenberg;

int main() {
  const GroupSignature sig({1, 1}, {0.5, 1.0});
  std::printf("%6s %6s %-10s %22s %10s\n", "theta", "d", "method", "log p", "rel. err");
  for (double theta : {0.5, 2.5, 3.1}) {
    for (double d : {1.0, 4.0, 8.0}) {
      const RadialPoint p = ray_point(sig, theta, d);
      auto show = [&](const char* name, auto&& f) {
        try {
          const KernelValue v = f();
          std::printf("%6.2f %6.1f %-10s %22.15f %10.2e\n", theta, d, name, v.log_value, v.relError);
        } catch (const std::exception& e) {
          std::printf("%6.2f %6.1f %-10s %s\n", theta, d, name, e.what());
        }
      };
      show("direct", [&] { return kernel_direct(sig, p, 1.0); });
      show("shifted", [&] { return kernel_shifted(sig, p, 1.0, {}); });
      show("conv", [&] { return kernel_convolution(sig, p, 1.0); });
      show("auto", [&] { return kernel_auto(sig, p, 1.0); });
    }
  }
}
