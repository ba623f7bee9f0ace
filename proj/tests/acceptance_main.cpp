// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "qdrep/params.hpp"
#include "qdrep/validation.hpp"

int main(int argc, char** argv) {
  qdrep::AcceptanceOptions options;
  if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);

  const auto results = qdrep::run_acceptance(qdrep::default_parameters(), options);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << r.summary() << "\n";
    if (!r.pass()) {
      ++failed;
      for (const auto& c : r.checks) {
        if (!c.pass) {
          std::cout << "    " << c.name << " = " << c.value << " expected " << c.expected << " +/- "
                    << c.tolerance << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
        }
      }
    }
  }
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
