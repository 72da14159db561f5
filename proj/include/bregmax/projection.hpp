#pragma once

#include <optional>

#include "bregmax/family.hpp"

namespace bregmax {

struct NegativeInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProjectionResult {
  Pm pi{Vec()};
  std::optional<Vec> theta;  // dual parameter on the facial sub-instance
  FacialSet face;
  double value = 0.0;        // B(P, E)
  double dual_gap = 0.0;
};

/// B(u, v) = sum beta(u) - beta(v) - l(v)(u - v). Returns +inf when some
/// v(z) = 0 with u(z) > 0; 0-0 terms contribute their continuous limit 0.
double bregman_div(const BetaSystem& sys, const Vec& u, const Vec& v);

/// H(P) = sum_z beta_z(P(z)), boundary handled by continuous extension.
double h_energy(const BetaSystem& sys, const Pm& p);

/// Optional warm start for repeated projections of nearby points: the face
/// is reused only when the support matches, the dual parameter seeds the
/// Newton ascent.
struct ProjectionHint {
  std::vector<int> support;
  FacialSet face;
  std::optional<Vec> theta;
};

/// Reverse Bregman projection of P onto closure(E): facial restriction
/// followed by a damped Newton ascent of theta -> <theta, mu(P)> - Upsilon.
ProjectionResult rb_project(const Instance& inst, const Pm& p,
                            const Tolerances& tol = {},
                            const ProjectionHint* hint = nullptr);

double div_from_family(const Instance& inst, const Pm& p,
                       const Tolerances& tol = {});

}  // namespace bregmax
