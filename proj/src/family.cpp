#include "bregmax/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace bregmax {

std::vector<int> Pm::support(double eps) const {
  std::vector<int> s;
  for (int z = 0; z < size(); ++z) {
    if (weights(z) > eps) s.push_back(z);
  }
  return s;
}

void Pm::validate(double eps) const {
  for (int z = 0; z < size(); ++z) {
    if (weights(z) < -eps) {
      throw std::invalid_argument("Pm: negative weight");
    }
  }
  if (std::abs(weights.sum() - 1.0) > eps) {
    throw std::invalid_argument("Pm: weights do not sum to 1");
  }
}

Pm Pm::uniform(int n) { return Pm(Vec::Constant(n, 1.0 / n)); }

Pm Pm::delta(int n, int z) {
  Vec w = Vec::Zero(n);
  w(z) = 1.0;
  return Pm(w);
}

double tv_distance(const Pm& a, const Pm& b) {
  return 0.5 * (a.weights - b.weights).lpNorm<1>();
}

Instance::Instance(std::vector<std::string> z_labels, Mat f, BetaSystem beta)
    : labels_(std::move(z_labels)), f_(std::move(f)), beta_(std::move(beta)) {
  if (labels_.empty()) throw std::invalid_argument("Instance: empty Z");
  if (f_.size() == 0 && f_.cols() != static_cast<int>(labels_.size())) {
    f_.resize(0, static_cast<int>(labels_.size()));
  }
  if (f_.cols() != static_cast<int>(labels_.size())) {
    throw std::invalid_argument("Instance: f column count != |Z|");
  }
  if (beta_.size() != static_cast<int>(labels_.size())) {
    throw std::invalid_argument("Instance: beta size != |Z|");
  }
}

Instance Instance::restrict(const std::vector<int>& members) const {
  std::vector<std::string> labels;
  Mat f(dim(), static_cast<int>(members.size()));
  for (size_t i = 0; i < members.size(); ++i) {
    labels.push_back(labels_.at(members[i]));
    f.col(static_cast<int>(i)) = f_.col(members[i]);
  }
  return Instance(std::move(labels), std::move(f), beta_.restrict(members));
}

int Instance::family_dim() const {
  const int n = zsize();
  if (n <= 1 || dim() == 0) return 0;
  Mat centered(dim(), n - 1);
  for (int j = 1; j < n; ++j) centered.col(j - 1) = f_.col(j) - f_.col(0);
  if (centered.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(centered);
  const auto& sv = svd.singularValues();
  const double thr = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > thr) ++r;
  }
  return r;
}

Mat Instance::kernel_basis() const {
  const int n = zsize();
  std::vector<Vec> rows;
  for (int i = 0; i < dim(); ++i) rows.push_back(f_.row(i).transpose());
  rows.push_back(Vec::Ones(n));
  Mat B = orthocomplement_basis(rows, n);  // rows orthonormal
  return B.transpose();                    // columns span N(f)
}

double lambda_of_theta(const Instance& inst, const Vec& theta,
                       const Tolerances& tol, std::optional<double> hint) {
  const int n = inst.zsize();
  Vec s(n);
  for (int z = 0; z < n; ++z) {
    s(z) = inst.dim() ? theta.dot(inst.f().col(z)) : 0.0;
  }
  if (inst.beta().all_classical()) {
    // sum nu_z exp(s_z - r) = 1  <=>  r = log sum nu_z exp(s_z).
    const Vec nu = inst.beta().classical_nu();
    const double shift = s.maxCoeff();
    double acc = 0;
    for (int z = 0; z < n; ++z) acc += nu(z) * std::exp(s(z) - shift);
    return shift + std::log(acc);
  }
  const double h = hint ? *hint : s.maxCoeff();
  auto g = [&](double r) {
    double total = 0;
    for (int z = 0; z < n; ++z) total += inst.beta().at(z).e(s(z) - r);
    return total;
  };
  // Safeguarded Newton: g is strictly decreasing with g' = -sum e'.
  double lo = h, hi = h, width = 1.0;
  while (g(lo) < 1.0) {
    width *= 2.0;
    if (width > 1e9) throw NoBracket("lambda_of_theta: no lower bracket");
    lo = h - width;
  }
  width = 1.0;
  while (g(hi) > 1.0) {
    width *= 2.0;
    if (width > 1e9) throw NoBracket("lambda_of_theta: no upper bracket");
    hi = h + width;
  }
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    double gr = -1.0, slope = 0.0;
    for (int z = 0; z < n; ++z) {
      const auto& gen = inst.beta().at(z);
      const double ex = gen.e(s(z) - r);
      gr += ex;
      slope += gen.e_prime_from(s(z) - r, ex);
    }
    if (std::abs(gr) <= tol.root_abs) return r;
    if (gr > 0) {
      lo = r;
    } else {
      hi = r;
    }
    double rn = (slope > 0) ? r + gr / slope : 0.5 * (lo + hi);
    if (!(rn > lo && rn < hi)) rn = 0.5 * (lo + hi);
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(r))) {
      return 0.5 * (lo + hi);
    }
    r = rn;
  }
  return r;
}

Pm pm_of_theta(const Instance& inst, const Vec& theta, const Tolerances& tol) {
  const double lam = lambda_of_theta(inst, theta, tol);
  Vec w(inst.zsize());
  for (int z = 0; z < inst.zsize(); ++z) {
    const double s = inst.dim() ? theta.dot(inst.f().col(z)) : 0.0;
    w(z) = inst.beta().at(z).e(s - lam);
  }
  return Pm(std::move(w));
}

Vec moment_map(const Instance& inst, const Pm& p) {
  return inst.f() * p.weights;
}

double upsilon(const Instance& inst, const Vec& theta, const Tolerances& tol) {
  const double lam = lambda_of_theta(inst, theta, tol);
  double total = lam;
  for (int z = 0; z < inst.zsize(); ++z) {
    const double s = inst.dim() ? theta.dot(inst.f().col(z)) : 0.0;
    total += inst.beta().at(z).conjugate(s - lam);
  }
  return total;
}

Vec upsilon_grad(const Instance& inst, const Vec& theta,
                 const Tolerances& tol) {
  return moment_map(inst, pm_of_theta(inst, theta, tol));
}

Mat upsilon_hess(const Instance& inst, const Vec& theta,
                 const Tolerances& tol) {
  const int d = inst.dim();
  const double lam = lambda_of_theta(inst, theta, tol);
  Vec ep(inst.zsize());
  for (int z = 0; z < inst.zsize(); ++z) {
    const double s = d ? theta.dot(inst.f().col(z)) : 0.0;
    ep(z) = inst.beta().at(z).e_prime(s - lam);
  }
  const double ep_sum = ep.sum();
  // grad Lambda = sum e' f / sum e'
  Vec grad_lam = Vec::Zero(d);
  if (ep_sum > 0) grad_lam = (inst.f() * ep) / ep_sum;
  Mat H = Mat::Zero(d, d);
  for (int z = 0; z < inst.zsize(); ++z) {
    const Vec c = inst.f().col(z) - grad_lam;
    H += ep(z) * c * c.transpose();
  }
  return H;
}

FacialSet facial_set(const Instance& inst, const std::vector<int>& s,
                     const Tolerances& tol) {
  if (s.empty()) throw std::invalid_argument("facial_set: empty S");
  const int n = inst.zsize();
  std::set<int> members(s.begin(), s.end());
  if (inst.dim() == 0) {
    FacialSet all;
    for (int z = 0; z < n; ++z) all.members.push_back(z);
    return all;
  }
  // mu0 = moment of the uniform pm on S.
  Vec q0 = Vec::Zero(n);
  for (int z : members) q0(z) = 1.0 / static_cast<double>(members.size());
  const Vec mu0 = inst.f() * q0;

  Mat eq(inst.dim() + 1, n);
  eq.topRows(inst.dim()) = inst.f();
  eq.bottomRows(1).setOnes();
  Vec rhs(inst.dim() + 1);
  rhs.head(inst.dim()) = mu0;
  rhs(inst.dim()) = 1.0;

  FacialSet out;
  for (int z = 0; z < n; ++z) {
    if (members.count(z)) {
      out.members.push_back(z);
      continue;
    }
    LpProblem lp;
    lp.objective = Vec::Zero(n);
    lp.objective(z) = 1.0;
    lp.eq_matrix = eq;
    lp.eq_rhs = rhs;
    const LpResult r = lp_solve(lp, tol);
    if (r.status == LpStatus::Optimal && r.objective > tol.lp_feas) {
      out.members.push_back(z);
    }
  }
  return out;
}

}  // namespace bregmax
