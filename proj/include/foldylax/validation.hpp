#pragma once

#include <string>
#include <vector>

namespace foldylax {

struct ValidationCheck {
  std::string name;
  double observed = 0.0;   // observed error (or value) for the check
  double tolerance = 0.0;  // pass iff observed <= tolerance
  bool passed = false;
  std::string detail;
};

// Built-in oracle suite on fixed configurations: sphere spectrum and tensors,
// single-body closed form, Mie far field, near-to-far consistency, solver
// cross-checks, constants and kernel invariants. Deterministic.
std::vector<ValidationCheck> run_validation_suite();

}  // namespace foldylax
