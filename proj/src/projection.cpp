#include "bregmax/projection.hpp"

#include <cmath>
#include <limits>

namespace bregmax {

double bregman_div(const BetaSystem& sys, const Vec& u, const Vec& v) {
  if (u.size() != sys.size() || v.size() != sys.size()) {
    throw std::invalid_argument("bregman_div: size mismatch");
  }
  double total = 0;
  for (int z = 0; z < sys.size(); ++z) {
    const double uz = u(z), vz = v(z);
    if (uz < 0 || vz < 0) throw NegativeInput("bregman_div: negative input");
    if (vz == 0.0) {
      if (uz > 0.0) return std::numeric_limits<double>::infinity();
      continue;  // 0-0 term vanishes in the limit
    }
    const auto& g = sys.at(z);
    total += g.beta(uz) - g.beta(vz) - g.l(vz) * (uz - vz);
  }
  return total;
}

double h_energy(const BetaSystem& sys, const Pm& p) {
  double total = 0;
  for (int z = 0; z < sys.size(); ++z) {
    total += sys.at(z).beta(p.weights(z));
  }
  return total;
}

namespace {

// One fused pass per theta: normalizer, member weights, link derivatives,
// and the potential, with a single link inversion per coordinate (Lemma-2.2
// form of the conjugate: beta*(r) = r e(r) - beta(e(r))).
struct ThetaEval {
  double lambda = 0.0;
  double ups = 0.0;
  Vec p;   // member weights e(s - lambda)
  Vec ep;  // e'(s - lambda)
};

ThetaEval eval_theta(const Instance& inst, const Vec& theta,
                     const Tolerances& tol,
                     std::optional<double> lam_hint = std::nullopt) {
  const int n = inst.zsize();
  ThetaEval fe;
  fe.lambda = lambda_of_theta(inst, theta, tol, lam_hint);
  fe.p.resize(n);
  fe.ep.resize(n);
  fe.ups = fe.lambda;
  for (int z = 0; z < n; ++z) {
    const double s = inst.dim() ? theta.dot(inst.f().col(z)) : 0.0;
    const double r = s - fe.lambda;
    const auto& gen = inst.beta().at(z);
    const double ex = gen.e(r);
    fe.p(z) = ex;
    fe.ep(z) = gen.e_prime_from(r, ex);
    fe.ups += r * ex - gen.beta(ex);
  }
  return fe;
}

// Maximize theta -> <theta, mu> - Upsilon(theta) on an instance whose mu is
// interior to its convex support. Damped Newton with Armijo backtracking.
Vec dual_ascend(const Instance& inst, const Vec& mu, const Tolerances& tol,
                const Vec* theta0 = nullptr) {
  const int d = inst.dim();
  Vec theta = Vec::Zero(d);
  if (d == 0) return theta;
  if (theta0 && theta0->size() == d && theta0->allFinite()) theta = *theta0;
  ThetaEval fe = eval_theta(inst, theta, tol);
  double fval = theta.dot(mu) - fe.ups;
  for (int it = 0; it < 200; ++it) {
    const Vec grad = mu - inst.f() * fe.p;
    if (grad.lpNorm<Eigen::Infinity>() <= tol.grad_norm) return theta;
    const double ep_sum = fe.ep.sum();
    Vec grad_lam = Vec::Zero(d);
    if (ep_sum > 0) grad_lam = (inst.f() * fe.ep) / ep_sum;
    Mat H = Mat::Zero(d, d);
    for (int z = 0; z < inst.zsize(); ++z) {
      const Vec c = inst.f().col(z) - grad_lam;
      H += fe.ep(z) * c * c.transpose();
    }
    H.diagonal().array() += 1e-10;
    Vec step = H.ldlt().solve(grad);
    if (!step.allFinite() || step.dot(grad) <= 0) step = grad;
    double t = 1.0;
    const double slope = grad.dot(step);
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Vec cand = theta + t * step;
      ThetaEval ce = eval_theta(inst, cand, tol, fe.lambda);
      const double fc = cand.dot(mu) - ce.ups;
      if (std::isfinite(fc) && fc >= fval + 1e-4 * t * slope) {
        theta = cand;
        fe = std::move(ce);
        fval = fc;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) {
      // Step direction exhausted; accept current point if the gradient is
      // already small at a looser scale, otherwise fail.
      if (grad.lpNorm<Eigen::Infinity>() <= 1e3 * tol.grad_norm) return theta;
      throw NonConvergence("rb_project: line search stalled");
    }
  }
  const Vec grad = mu - inst.f() * fe.p;
  if (grad.lpNorm<Eigen::Infinity>() <= 1e3 * tol.grad_norm) return theta;
  throw NonConvergence("rb_project: Newton did not converge");
}

}  // namespace

ProjectionResult rb_project(const Instance& inst, const Pm& p,
                            const Tolerances& tol,
                            const ProjectionHint* hint) {
  p.validate(1e-9);
  ProjectionResult res;
  const std::vector<int> supp = p.support();
  const bool hint_face = hint && hint->support == supp;
  res.face = hint_face ? hint->face : facial_set(inst, supp, tol);
  const Instance sub = inst.restrict(res.face.members);

  Vec p_sub(static_cast<int>(res.face.members.size()));
  for (size_t i = 0; i < res.face.members.size(); ++i) {
    p_sub(static_cast<int>(i)) = p.weights(res.face.members[i]);
  }
  const Vec mu = sub.f() * p_sub;

  const Vec* theta0 =
      (hint_face && hint->theta) ? &*hint->theta : nullptr;
  const Vec theta = [&] {
    if (theta0) {
      try {
        return dual_ascend(sub, mu, tol, theta0);
      } catch (const NonConvergence&) {
        // Fall through to a cold start; hints are best-effort only.
      }
    }
    return dual_ascend(sub, mu, tol);
  }();
  const ThetaEval fe = eval_theta(sub, theta, tol);
  const Pm pi_sub(fe.p);

  Vec pi = Vec::Zero(inst.zsize());
  for (size_t i = 0; i < res.face.members.size(); ++i) {
    pi(res.face.members[i]) = pi_sub.weights(static_cast<int>(i));
  }
  res.pi = Pm(std::move(pi));
  res.theta = theta;
  res.value = h_energy(inst.beta(), p) - h_energy(inst.beta(), res.pi);
  // Dual estimate of Upsilon*(mu(P)) on the facial sub-instance.
  const double ups_star = theta.dot(mu) - fe.ups;
  const double h_sub = [&] {
    double total = 0;
    for (int i = 0; i < p_sub.size(); ++i) {
      total += sub.beta().at(i).beta(p_sub(i));
    }
    return total;
  }();
  res.dual_gap = std::abs(res.value - (h_sub - ups_star));
  return res;
}

double div_from_family(const Instance& inst, const Pm& p,
                       const Tolerances& tol) {
  return rb_project(inst, p, tol).value;
}

}  // namespace bregmax
