// One line per acceptance check. Exit status is nonzero only when a check
// fails that is not a documented limitation (see README).

#include <iostream>
#include <string>
#include <vector>

#include "heisenberg/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> which;
  bool verbose = false;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "-v") verbose = true;
    else which.push_back(std::stoi(a));
  }
  namespace acc = heisenberg::acceptance;
  std::vector<acc::Result> all;
  for (const auto& r : acc::run(which)) {
    std::cout << acc::line(r) << std::endl;
    if (verbose || !r.pass)
      for (const auto& l : r.log) std::cout << "       " << l << "\n";
    all.push_back(r);
  }
  int passed = 0, known = 0;
  for (const auto& r : all) {
    passed += r.pass;
    known += !r.pass && r.expected_failure;
  }
  std::cout << passed << "/" << all.size() << " passed";
  if (known) std::cout << ", " << known << " known limitation" << (known > 1 ? "s" : "");
  std::cout << (acc::green(all) ? "" : ", unexpected failures") << "\n";
  return acc::green(all) ? 0 : 1;
}
