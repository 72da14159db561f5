#pragma once

#include <stdexcept>

namespace bregmax {

struct Tolerances {
  double root_abs = 1e-12;    // residual bound for scalar root solves
  double grad_norm = 1e-9;    // Newton stopping criterion for projections
  double lp_feas = 1e-9;      // LP feasibility / facial-set threshold
  double fd_step = 1e-6;      // finite-difference step
  double cluster_tv = 1e-5;   // total-variation radius for deduping optima

  void validate() const {
    if (root_abs <= 0 || grad_norm <= 0 || lp_feas <= 0 || fd_step <= 0 ||
        cluster_tv <= 0) {
      throw std::invalid_argument("Tolerances: all fields must be positive");
    }
  }
};

}  // namespace bregmax
