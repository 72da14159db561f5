#pragma once

#include "bregmax/bbar.hpp"

namespace bregmax {

struct CheckRecord {
  std::string name;
  int tested = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<CheckRecord> checks;
  std::uint64_t seed = 0;
  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return !checks.empty();
  }
};

/// Runs the full theorem-verification suite on one instance: the global
/// equivalence of the two maximization problems, the Bbar inequalities,
/// the Psi/Phi round trips at found maximizers, and every module-level
/// numerical invariant (normalizer residuals, gradient checks, projection
/// laws, conjugation identities).
VerifyReport cmd_verify(const Instance& inst, std::uint64_t seed, int budget,
                        const Tolerances& tol = {});

}  // namespace bregmax
