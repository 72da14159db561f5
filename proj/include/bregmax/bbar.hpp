#pragma once

#include <cstdint>

#include "bregmax/maximize.hpp"

namespace bregmax {

struct ZeroDirection : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonKernelSum : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct TrivialKernel : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MemberOfClosure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A direction u with sum u = 0, stored with sum u+ = sum u- = 1.
struct Direction {
  Vec u;
  Vec u_plus;
  Vec u_minus;

  int size() const { return static_cast<int>(u.size()); }
};

Direction normalize_direction(const Vec& u_raw, double sum_tol = 1e-10);

/// The codimension-one family F_u: statistic rows span {u, 1}^perp, so
/// its kernel is exactly the line R u.
Instance family_from_direction(const BetaSystem& beta, const Direction& u);

enum class Side { plus, boundary, minus };

Side classify_side(const Instance& inst_u, const Pm& p, const Direction& u,
                   const Tolerances& tol = {});

struct BbarResult {
  double value = 0.0;
  Pm argmax{Vec()};
  Pm base{Vec()};  // Pi_{F_u, argmax}
  int n_local = 0;
};

struct BbarOptions {
  int starts = 24;
  std::uint64_t seed = 0;
  int face_cap = 8;  // enumerate facial subfamilies of F_u up to this |Z|
};

/// Bbar(u) = max of B(P, F_u) over the closed positive side. Exploits the
/// fiber structure P = q + t u, q in closure(F_u): the fiber optimum sits at
/// the simplex boundary t_max(q), so the search runs over q alone
/// (multistart Nelder-Mead in the theta chart plus facial subfamilies).
BbarResult bbar_eval(const BetaSystem& beta, const Direction& u,
                     const BbarOptions& opt = {}, const Tolerances& tol = {});

/// Closed form for classical systems: ln(1 + exp(Dbar(u))) with
/// Dbar(u) = sum u(z) ln|u(z)| on the normalized direction.
double bbar_classical(const BetaSystem& beta, const Direction& u);

double dbar(const Direction& u);

struct MaxBbarReport {
  Direction argmax;
  double value = 0.0;
  std::vector<std::pair<Vec, double>> local;  // kernel coords, value
};

/// Maximize u in N(f) \ {0} -> Bbar(u); Nelder-Mead over the kernel sphere.
MaxBbarReport maximize_bbar(const Instance& inst, const BbarOptions& opt = {},
                            const Tolerances& tol = {});

/// Psi(P) = normalized P - Pi_P; throws MemberOfClosure when the difference
/// vanishes.
Direction psi(const Instance& inst, const Pm& p, const Tolerances& tol = {});

/// Phi(u) = argmax of B(., F_u) over the positive side.
Pm phi(const BetaSystem& beta, const Direction& u, const BbarOptions& opt = {},
       const Tolerances& tol = {});

struct ScanTrial {
  Vec u_raw;
  double value = 0.0;
  int n_local = 0;
  std::uint64_t trial_seed = 0;
};

struct ScanReport {
  std::vector<ScanTrial> trials;
  int multimodal_count = 0;  // trials with n_local > 1
};

/// Evidence gathering for the uniqueness conjecture: random directions,
/// high start budget, record the local-maximizer count per trial.
ScanReport conjecture_scan(const BetaSystem& beta, int zsize, int trials,
                           int starts, std::uint64_t seed,
                           const Tolerances& tol = {});

}  // namespace bregmax
