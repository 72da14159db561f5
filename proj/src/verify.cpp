#include "bregmax/verify.hpp"

#include <cmath>
#include <random>

namespace bregmax {

namespace {

Pm random_pm(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> expo(1.0);
  Vec w(n);
  for (int z = 0; z < n; ++z) w(z) = expo(rng);
  w /= w.sum();
  return Pm(w);
}

Vec random_theta(std::mt19937_64& rng, int d, double scale = 2.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Vec th(d);
  for (int i = 0; i < d; ++i) th(i) = gauss(rng);
  return th;
}

}  // namespace

VerifyReport cmd_verify(const Instance& inst, std::uint64_t seed, int budget,
                        const Tolerances& tol) {
  VerifyReport rep;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  const int n = inst.zsize();
  const int d = inst.dim();

  auto add = [&](const std::string& name, int tested, double viol,
                 double tolerance) {
    rep.checks.push_back({name, tested, viol, tolerance, viol <= tolerance});
  };

  // --- Lambda residual ----------------------------------------------------
  {
    double worst = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
      const Vec th = random_theta(rng, d);
      const double lam = lambda_of_theta(inst, th, tol);
      double total = 0;
      for (int z = 0; z < n; ++z) {
        const double s = d ? th.dot(inst.f().col(z)) : 0.0;
        total += inst.beta().at(z).e(s - lam);
      }
      worst = std::max(worst, std::abs(total - 1.0));
    }
    add("lambda_residual", trials, worst, 1e-10);
  }

  // --- pm_of_theta sums to one, strictly positive -------------------------
  {
    double worst = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
      const Pm p = pm_of_theta(inst, random_theta(rng, d), tol);
      worst = std::max(worst, std::abs(p.weights.sum() - 1.0));
      if (p.weights.minCoeff() <= 0) worst = std::max(worst, 1.0);
    }
    add("pm_of_theta_valid", trials, worst, 1e-10);
  }

  // --- gradient of Upsilon vs central differences -------------------------
  if (d > 0) {
    double worst = 0;
    const int trials = 25;
    for (int t = 0; t < trials; ++t) {
      const Vec th = random_theta(rng, d, 1.0);
      const Vec g = upsilon_grad(inst, th, tol);
      const Vec gfd = fd_gradient(
          [&](const Vec& x) { return upsilon(inst, x, tol); }, th,
          tol.fd_step);
      const double rel =
          (g - gfd).norm() / std::max(1.0, std::max(g.norm(), gfd.norm()));
      worst = std::max(worst, rel);
    }
    add("upsilon_grad_fd", trials, worst, 1e-5);
  }

  // --- Hessian of Upsilon positive semidefinite ---------------------------
  if (d > 0) {
    double worst = 0;
    const int trials = 25;
    for (int t = 0; t < trials; ++t) {
      const Mat H = upsilon_hess(inst, random_theta(rng, d, 1.0), tol);
      const Eigen::SelfAdjointEigenSolver<Mat> es(H);
      worst = std::max(worst, -es.eigenvalues().minCoeff());
    }
    add("upsilon_hess_psd", trials, worst, 1e-8);
  }

  // --- conjugation identity (Lemma-style) ---------------------------------
  {
    double worst = 0;
    const int trials = 100;
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    for (int t = 0; t < trials; ++t) {
      const int z = static_cast<int>(rng() % n);
      const double r = unif(rng);
      const auto& g = inst.beta().at(z);
      worst = std::max(
          worst, std::abs(g.beta(g.e(r)) - (r * g.e(r) - g.conjugate(r))));
      worst = std::max(worst, std::abs(g.l(g.e(r)) - r));
    }
    add("conjugation_identity", trials, worst, 1e-8);
  }

  // --- projection laws ----------------------------------------------------
  {
    double worst_moment = 0, worst_idem = 0, worst_pyth = 0;
    double worst_support = 0;
    const int trials = 25;
    for (int t = 0; t < trials; ++t) {
      const Pm p = random_pm(rng, n);
      const ProjectionResult pr = rb_project(inst, p, tol);
      worst_moment = std::max(
          worst_moment, d ? (moment_map(inst, pr.pi) - moment_map(inst, p))
                                .lpNorm<Eigen::Infinity>()
                          : 0.0);
      const ProjectionResult pr2 = rb_project(inst, pr.pi, tol);
      worst_idem = std::max(worst_idem, std::abs(pr2.value));
      worst_pyth = std::max(worst_pyth, pr.dual_gap);
      const FacialSet fs = facial_set(inst, p.support(), tol);
      if (fs.members != pr.pi.support()) worst_support = 1.0;
    }
    add("projection_moment_match", trials, worst_moment, 1e-8);
    add("projection_idempotent", trials, worst_idem, 1e-8);
    add("projection_pythagorean", trials, worst_pyth, 1e-7);
    add("projection_support_law", trials, worst_support, 0.5);
  }

  // --- facial set idempotence / monotonicity ------------------------------
  {
    double worst = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
      std::vector<int> s;
      for (int z = 0; z < n; ++z) {
        if (rng() % 2) s.push_back(z);
      }
      if (s.empty()) s.push_back(static_cast<int>(rng() % n));
      const FacialSet f1 = facial_set(inst, s, tol);
      const FacialSet f2 = facial_set(inst, f1.members, tol);
      bool contains = true;
      for (int z : s) {
        if (!std::binary_search(f1.members.begin(), f1.members.end(), z)) {
          contains = false;
        }
      }
      if (!contains || f1.members != f2.members) worst = 1.0;
    }
    add("facial_set_closure", trials, worst, 0.5);
  }

  // --- the two maximization problems --------------------------------------
  MaximizeOptions mopt;
  mopt.starts = budget;
  mopt.seed = seed;
  const MaxReport mrep = maximize_divergence(inst, mopt, tol);
  {
    double worst = 0;
    for (const auto& o : mrep.local_optima) {
      worst = std::max(worst, o.criticality);
    }
    add("maximizer_criticality", static_cast<int>(mrep.local_optima.size()),
        worst, 1e-6);
  }
  {
    double worst = 0;
    for (const auto& o : mrep.local_optima) {
      if (o.value <= 1e-9) continue;
      try {
        check_positive_gap(inst, o.point, tol);
      } catch (const ViolatedNecessaryCondition&) {
        worst = 1.0;
      }
    }
    add("maximizer_positive_gap", static_cast<int>(mrep.local_optima.size()),
        worst, 0.5);
  }

  BbarOptions bopt;
  bopt.starts = std::max(8, budget / 2);
  bopt.seed = seed;
  double bbar_max = 0.0;
  bool trivial_kernel = false;
  try {
    const MaxBbarReport brep = maximize_bbar(inst, bopt, tol);
    bbar_max = brep.value;
  } catch (const TrivialKernel&) {
    trivial_kernel = true;
  }
  add("global_equivalence", 1, std::abs(mrep.global_value - bbar_max), 1e-3);
  (void)trivial_kernel;

  // --- Bbar inequalities (random P and random kernel u) -------------------
  {
    const Mat K = inst.kernel_basis();
    double worst = 0;
    int tested = 0;
    const int trials = 20;
    std::normal_distribution<double> gauss(0.0, 1.0);
    BbarOptions small = bopt;
    small.starts = 8;
    for (int t = 0; t < trials && K.cols() > 0; ++t) {
      const Pm p = random_pm(rng, n);
      const ProjectionResult pr = rb_project(inst, p, tol);
      if (pr.value > 1e-9) {
        const Direction up = psi(inst, p, tol);
        const double lhs = bbar_eval(inst.beta(), up, small, tol).value;
        worst = std::max(worst, pr.value - lhs);
        ++tested;
      }
      Vec c(K.cols());
      for (int i = 0; i < c.size(); ++i) c(i) = gauss(rng);
      if (c.norm() < 1e-8) continue;
      const Direction u = normalize_direction(Vec(K * c), 1e-6);
      const BbarResult br = bbar_eval(inst.beta(), u, small, tol);
      const double bphi = div_from_family(inst, br.argmax, tol);
      worst = std::max(worst, br.value - bphi);
      ++tested;
    }
    add("bbar_inequalities", tested, worst, 1e-7);
  }

  // --- Psi/Phi round trip at the found global maximizer -------------------
  {
    double worst = 0;
    int tested = 0;
    if (mrep.global_value > 1e-9) {
      try {
        const Direction u = psi(inst, mrep.global_argmax, tol);
        const Pm back = phi(inst.beta(), u, bopt, tol);
        worst = std::max(worst, tv_distance(back, mrep.global_argmax));
        tested = 1;
      } catch (const MemberOfClosure&) {
      }
    }
    add("phi_psi_roundtrip", tested, worst, 1e-4);
  }

  return rep;
}

}  // namespace bregmax
