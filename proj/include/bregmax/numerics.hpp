#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bregmax/tolerances.hpp"

namespace bregmax {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct NoBracket : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Solve g(r) = target for a strictly decreasing continuous g.
/// Brackets by doubling expansion around `hint` (width capped at 1e9),
/// then bisects until the residual is within tol.root_abs.
double solve_decreasing_root(const std::function<double(double)>& g,
                             double target, double hint,
                             const Tolerances& tol = {});

/// Invert a strictly increasing h defined on (0,+inf): find x with h(x) = y.
/// Brackets multiplicatively inside (1e-300, 1e300).
double invert_increasing(const std::function<double(double)>& h, double y,
                         const Tolerances& tol = {});

/// Same, but h is defined on all of R (additive bracketing around `hint`).
double invert_increasing_real(const std::function<double(double)>& h, double y,
                              double hint, const Tolerances& tol = {});

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpProblem {
  Vec objective;       // maximize objective . x
  Mat eq_matrix;       // eq_matrix x = eq_rhs
  Vec eq_rhs;
  Vec lower_bounds;    // empty means all zeros
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vec solution;
  double objective = 0.0;
};

/// Dense two-phase simplex with Bland's pivot rule.
LpResult lp_solve(const LpProblem& p, const Tolerances& tol = {});

/// Rows form an orthonormal basis of the orthogonal complement of
/// span(vectors) in R^n. Row count = n - rank.
Mat orthocomplement_basis(const std::vector<Vec>& vectors, int n,
                          double rank_eps = 1e-10);

/// Central-difference gradient.
Vec fd_gradient(const std::function<double(const Vec&)>& fn, const Vec& x,
                double step);

struct NelderMeadResult {
  Vec x;
  double value = 0.0;  // minimized value
  int evals = 0;
};

/// Plain Nelder-Mead minimization with restarts handled by the caller.
NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& fn,
                             const Vec& x0, double initial_step,
                             int max_evals = 2000, double ftol = 1e-12,
                             double xtol = 1e-10);

}  // namespace bregmax
