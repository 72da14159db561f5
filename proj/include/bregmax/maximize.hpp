#pragma once

#include <cstdint>

#include "bregmax/projection.hpp"

namespace bregmax {

struct ViolatedNecessaryCondition : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LocalOptimum {
  Pm point{Vec()};
  double value = 0.0;
  double criticality = 0.0;
};

struct MaxReport {
  double global_value = 0.0;
  Pm global_argmax{Vec()};
  std::vector<LocalOptimum> local_optima;  // sorted by value desc
  int starts = 0;
  std::uint64_t seed = 0;
};

struct MaximizeOptions {
  int starts = 32;
  std::uint64_t seed = 0;
  int enumeration_cap = 8;  // exhaustive support refinement up to this |Z|
  int max_iter = 400;
  bool fixed_starts = true;  // include vertex and midpoint starts
};

/// First-order residual of Thm-style criticality: deviation of
/// z -> l(P(z)) - l(Pi_P(z)) from constancy on supp(P).
double criticality_residual(const Instance& inst, const Pm& p,
                            const Tolerances& tol = {});

struct PositiveGapCheck {
  bool support_ok = false;
  double c = 0.0;
  bool vacuous = false;  // P in closure(E), u = 0
};

/// Necessary conditions at a reported maximizer: supp((P-Pi)^+) = supp(P)
/// and the normalizing shift c is positive.
PositiveGapCheck check_positive_gap(const Instance& inst, const Pm& p,
                                    const Tolerances& tol = {});

/// Multistart projected ascent of P -> H(P) - H(Pi_P) over the simplex,
/// plus exhaustive support refinement for small Z.
MaxReport maximize_divergence(const Instance& inst,
                              const MaximizeOptions& opt = {},
                              const Tolerances& tol = {});

}  // namespace bregmax
