#include "bregmax/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bregmax {

namespace {

// Bisection on [lo, hi] for a decreasing g with g(lo) >= target >= g(hi).
double bisect_decreasing(const std::function<double(double)>& g, double target,
                         double lo, double hi, double root_abs) {
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::abs(gm - target) <= root_abs) return mid;
    if (gm > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(mid))) {
      break;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double solve_decreasing_root(const std::function<double(double)>& g,
                             double target, double hint,
                             const Tolerances& tol) {
  double width = 1.0;
  double lo = hint - width, hi = hint + width;
  // g decreasing: need g(lo) >= target and g(hi) <= target.
  while (g(lo) < target) {
    width *= 2.0;
    if (width > 1e9) throw NoBracket("solve_decreasing_root: no lower bracket");
    lo = hint - width;
  }
  width = 1.0;
  while (g(hi) > target) {
    width *= 2.0;
    if (width > 1e9) throw NoBracket("solve_decreasing_root: no upper bracket");
    hi = hint + width;
  }
  return bisect_decreasing(g, target, lo, hi, tol.root_abs);
}

double invert_increasing(const std::function<double(double)>& h, double y,
                         const Tolerances& tol) {
  double lo = 1.0, hi = 1.0;
  while (h(lo) > y) {
    lo *= 0.25;
    if (lo < 1e-300) throw OutOfRange("invert_increasing: y below range");
  }
  while (h(hi) < y) {
    hi *= 4.0;
    if (hi > 1e300) throw OutOfRange("invert_increasing: y above range");
  }
  // h increasing; reuse the decreasing bisection on -h.
  return bisect_decreasing([&](double x) { return -h(x); }, -y, lo, hi,
                           tol.root_abs);
}

double invert_increasing_real(const std::function<double(double)>& h, double y,
                              double hint, const Tolerances& tol) {
  return solve_decreasing_root([&](double x) { return -h(x); }, -y, hint, tol);
}

namespace {

// Simplex on the standard form max c.x, A x = b, x >= 0.
// Tableau-free revised form is overkill at this scale; keep a dense tableau.
LpResult simplex_standard(const Vec& c, Mat A, Vec b, double eps) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0) {
      A.row(i) *= -1.0;
      b(i) = -b(i);
    }
  }

  // Phase 1: artificials.
  Mat T(m + 1, n + m + 1);
  T.setZero();
  T.block(0, 0, m, n) = A;
  T.block(0, n, m, m) = Mat::Identity(m, m);
  T.col(n + m).head(m) = b;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  // Phase-1 objective row: minimize sum of artificials (stored as max of
  // negated sum, reduced against the basis).
  for (int j = 0; j <= n + m; ++j) {
    double s = 0;
    for (int i = 0; i < m; ++i) s += T(i, j);
    T(m, j) = (j < n) ? s : (j < n + m ? 0.0 : s);
  }
  T(m, n + m) = b.sum();

  auto pivot = [&](int pr, int pc) {
    T.row(pr) /= T(pr, pc);
    for (int i = 0; i <= m; ++i) {
      if (i == pr) continue;
      const double f = T(i, pc);
      if (f != 0.0) T.row(i) -= f * T.row(pr);
    }
    basis[pr] = pc;
  };

  auto run = [&](int ncols) -> bool {
    // Bland's rule: smallest eligible column index, smallest-index row tie
    // break. Returns false on unboundedness.
    for (int iter = 0; iter < 100000; ++iter) {
      int pc = -1;
      for (int j = 0; j < ncols; ++j) {
        if (T(m, j) > eps) {
          pc = j;
          break;
        }
      }
      if (pc < 0) return true;
      int pr = -1;
      double best = 0;
      for (int i = 0; i < m; ++i) {
        if (T(i, pc) > eps) {
          const double ratio = T(i, n + m) / T(i, pc);
          if (pr < 0 || ratio < best - 1e-15 ||
              (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[pr])) {
            pr = i;
            best = ratio;
          }
        }
      }
      if (pr < 0) return false;
      pivot(pr, pc);
    }
    return true;
  };

  run(n + m);
  if (T(m, n + m) > 1e-7) {
    return {LpStatus::Infeasible, Vec(), 0.0};
  }
  // Drive artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n) {
      int pc = -1;
      for (int j = 0; j < n; ++j) {
        if (std::abs(T(i, j)) > eps) {
          pc = j;
          break;
        }
      }
      if (pc >= 0) pivot(i, pc);
    }
  }

  // Phase 2 objective row.
  for (int j = 0; j < n; ++j) T(m, j) = c(j);
  for (int j = n; j <= n + m; ++j) T(m, j) = 0.0;
  T(m, n + m) = 0.0;
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) T.row(m) -= c(basis[i]) * T.row(i);
  }
  // Redundant rows may keep an artificial basic at value 0; phase 2 only
  // enters structural columns, so those stay put.
  if (!run(n)) {
    return {LpStatus::Unbounded, Vec(), 0.0};
  }

  Vec x = Vec::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) x(basis[i]) = T(i, n + m);
  }
  return {LpStatus::Optimal, x, c.dot(x)};
}

}  // namespace

LpResult lp_solve(const LpProblem& p, const Tolerances& tol) {
  const int n = static_cast<int>(p.objective.size());
  if (p.eq_matrix.cols() != n) {
    throw std::invalid_argument("lp_solve: objective/eq_matrix size mismatch");
  }
  Vec lb = p.lower_bounds.size() ? p.lower_bounds : Vec::Zero(n);
  // Shift x = lb + y, y >= 0.
  Vec b = p.eq_rhs - p.eq_matrix * lb;
  LpResult r = simplex_standard(p.objective, p.eq_matrix, b, tol.lp_feas);
  if (r.status == LpStatus::Optimal) {
    r.solution += lb;
    r.objective = p.objective.dot(r.solution);
  }
  return r;
}

Mat orthocomplement_basis(const std::vector<Vec>& vectors, int n,
                          double rank_eps) {
  Mat M(static_cast<int>(vectors.size()), n);
  for (size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != n) {
      throw std::invalid_argument("orthocomplement_basis: dimension mismatch");
    }
    M.row(static_cast<int>(i)) = vectors[i].transpose();
  }
  if (M.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thresh = rank_eps * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > thresh) ++rank;
  }
  Mat B(n - rank, n);
  for (int i = rank; i < n; ++i) {
    B.row(i - rank) = svd.matrixV().col(i).transpose();
  }
  return B;
}

NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& fn,
                             const Vec& x0, double initial_step, int max_evals,
                             double ftol, double xtol) {
  const int n = static_cast<int>(x0.size());
  NelderMeadResult res;
  if (n == 0) {
    res.x = x0;
    res.value = fn(x0);
    res.evals = 1;
    return res;
  }
  std::vector<Vec> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  int evals = 0;
  for (int i = 1; i <= n; ++i) pts[i](i - 1) += initial_step;
  for (int i = 0; i <= n; ++i) {
    vals[i] = fn(pts[i]);
    ++evals;
  }
  auto order = [&] {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return vals[a] < vals[b]; });
    std::vector<Vec> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (int i = 0; i <= n; ++i) {
      p2[i] = pts[idx[i]];
      v2[i] = vals[idx[i]];
    }
    pts.swap(p2);
    vals.swap(v2);
  };
  while (evals < max_evals) {
    order();
    double spread = 0;
    for (int i = 1; i <= n; ++i) {
      spread = std::max(spread, (pts[i] - pts[0]).lpNorm<Eigen::Infinity>());
    }
    if (std::abs(vals[n] - vals[0]) <= ftol * (1 + std::abs(vals[0])) &&
        spread <= xtol) {
      break;
    }
    Vec centroid = Vec::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[i];
    centroid /= n;
    const Vec xr = centroid + (centroid - pts[n]);
    const double fr = fn(xr);
    ++evals;
    if (fr < vals[0]) {
      const Vec xe = centroid + 2.0 * (centroid - pts[n]);
      const double fe = fn(xe);
      ++evals;
      if (fe < fr) {
        pts[n] = xe;
        vals[n] = fe;
      } else {
        pts[n] = xr;
        vals[n] = fr;
      }
    } else if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
    } else {
      const Vec xc = centroid + 0.5 * (pts[n] - centroid);
      const double fc = fn(xc);
      ++evals;
      if (fc < vals[n]) {
        pts[n] = xc;
        vals[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          vals[i] = fn(pts[i]);
          ++evals;
        }
      }
    }
  }
  order();
  res.x = pts[0];
  res.value = vals[0];
  res.evals = evals;
  return res;
}

Vec fd_gradient(const std::function<double(const Vec&)>& fn, const Vec& x,
                double step) {
  Vec g(x.size());
  Vec xp = x;
  for (int i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    xp(i) = xi + step;
    const double fp = fn(xp);
    xp(i) = xi - step;
    const double fm = fn(xp);
    xp(i) = xi;
    g(i) = (fp - fm) / (2.0 * step);
  }
  return g;
}

}  // namespace bregmax
