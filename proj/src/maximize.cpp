#include "bregmax/maximize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bregmax {

namespace {

struct AscentResult {
  Pm point{Vec()};
  double value = 0.0;
  double residual = 0.0;
};

// Projected gradient of H(P) - H(Pi_P) on the current support: the
// directional derivative along w (sum w = 0, supp w in supp P) is
// sum [l(P) - l(Pi)] w, so the steepest feasible direction is the
// mean-centered gradient on the support.
Vec support_gradient(const Instance& inst, const Pm& p,
                     const ProjectionResult& proj,
                     const std::vector<int>& supp) {
  Vec g = Vec::Zero(p.size());
  double mean = 0;
  for (int z : supp) {
    g(z) = inst.beta().at(z).l(p.weights(z)) -
           inst.beta().at(z).l(proj.pi.weights(z));
    mean += g(z);
  }
  mean /= static_cast<double>(supp.size());
  for (int z : supp) g(z) -= mean;
  return g;
}

AscentResult ascend(const Instance& inst, Pm p, int max_iter,
                    const Tolerances& tol) {
  // Clean the start: clip and renormalize.
  for (int z = 0; z < p.size(); ++z) p.weights(z) = std::max(p.weights(z), 0.0);
  p.weights /= p.weights.sum();

  ProjectionResult proj = rb_project(inst, p, tol);
  double value = proj.value;
  ProjectionHint hint{p.support(), proj.face, std::nullopt};
  auto project_warm = [&](const Pm& q) {
    return rb_project(inst, q, tol, &hint);
  };
  for (int it = 0; it < max_iter; ++it) {
    const std::vector<int> supp = p.support();
    const Vec w = support_gradient(inst, p, proj, supp);
    const double wn = w.lpNorm<Eigen::Infinity>();
    if (wn <= 1e-9) break;

    // Largest step staying in the simplex.
    double t_max = std::numeric_limits<double>::infinity();
    for (int z : supp) {
      if (w(z) < 0) t_max = std::min(t_max, p.weights(z) / (-w(z)));
    }
    if (!std::isfinite(t_max)) break;  // w >= 0 with sum 0 means w = 0
    const double slope = w.squaredNorm();
    // Probe the boundary first: along an ascent ray the objective keeps
    // growing toward the face, so full steps drop coordinates quickly.
    double t = t_max;
    bool moved = false;
    for (int ls = 0; ls < 50; ++ls) {
      Vec cand = p.weights + t * w;
      for (int z = 0; z < cand.size(); ++z) {
        if (cand(z) < kSupportEps) cand(z) = 0.0;  // face drop
      }
      cand /= cand.sum();
      Pm pc(cand);
      ProjectionResult pr = project_warm(pc);
      if (pr.value >= value + 1e-4 * t * slope) {
        p = std::move(pc);
        proj = std::move(pr);
        value = proj.value;
        hint = {p.support(), proj.face, std::nullopt};
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  AscentResult out;
  out.point = p;
  out.value = value;
  const std::vector<int> supp = p.support();
  out.residual =
      support_gradient(inst, p, proj, supp).lpNorm<Eigen::Infinity>();
  return out;
}

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

void merge_optimum(std::vector<LocalOptimum>& optima, const AscentResult& r,
                   double cluster_tv) {
  for (auto& o : optima) {
    if (tv_distance(o.point, r.point) <= cluster_tv) {
      if (r.value > o.value) {
        o = {r.point, r.value, r.residual};
      }
      return;
    }
  }
  optima.push_back({r.point, r.value, r.residual});
}

}  // namespace

double criticality_residual(const Instance& inst, const Pm& p,
                            const Tolerances& tol) {
  const ProjectionResult proj = rb_project(inst, p, tol);
  if (proj.value <= 1e-12) return 0.0;  // P in closure(E)
  const std::vector<int> supp = p.support();
  return support_gradient(inst, p, proj, supp).lpNorm<Eigen::Infinity>();
}

PositiveGapCheck check_positive_gap(const Instance& inst, const Pm& p,
                                    const Tolerances& tol) {
  const ProjectionResult proj = rb_project(inst, p, tol);
  const Vec u = p.weights - proj.pi.weights;
  PositiveGapCheck out;
  if (u.lpNorm<Eigen::Infinity>() <= 1e-9) {
    out.vacuous = true;
    out.support_ok = true;
    return out;
  }
  const std::vector<int> supp_p = p.support();
  std::vector<int> supp_uplus;
  for (int z = 0; z < p.size(); ++z) {
    if (u(z) > 1e-9) supp_uplus.push_back(z);
  }
  out.support_ok = (supp_uplus == supp_p);
  auto total = [&](double c) {
    double s = 0;
    for (int z : supp_p) {
      s += inst.beta().at(z).e(inst.beta().at(z).l(proj.pi.weights(z)) + c);
    }
    return s;
  };
  out.c = invert_increasing_real(total, 1.0, 0.0, tol);
  if (!out.support_ok || !(out.c > 0)) {
    throw ViolatedNecessaryCondition(
        "reported maximizer fails the support/positivity conditions");
  }
  return out;
}

MaxReport maximize_divergence(const Instance& inst, const MaximizeOptions& opt,
                              const Tolerances& tol) {
  if (opt.starts < 1) throw std::invalid_argument("maximize: starts < 1");
  const int n = inst.zsize();
  std::mt19937_64 rng(opt.seed);
  std::exponential_distribution<double> expo(1.0);

  std::vector<LocalOptimum> optima;
  auto run_start = [&](const Vec& start) {
    AscentResult r = ascend(inst, Pm(start), opt.max_iter, tol);
    merge_optimum(optima, r, tol.cluster_tv);
  };

  // Deterministic starts: vertices and vertex-pair midpoints.
  if (opt.fixed_starts) {
    for (int z = 0; z < n; ++z) run_start(Pm::delta(n, z).weights);
    for (int y = 0; y < n; ++y) {
      for (int z = y + 1; z < n; ++z) {
        Vec w = Vec::Zero(n);
        w(y) = w(z) = 0.5;
        run_start(w);
      }
    }
  }
  // Dirichlet(1,...,1) random interior starts.
  for (int s = 0; s < opt.starts; ++s) {
    Vec w(n);
    for (int z = 0; z < n; ++z) w(z) = expo(rng);
    w /= w.sum();
    run_start(w);
  }
  // Support enumeration: global maximizers have |supp| <= dim(E) + 1.
  // Each support gets a uniform start plus corner-biased starts, since
  // maximizers often sit near a vertex of the face and the ascent cannot
  // re-enter coordinates it has dropped.
  if (n <= opt.enumeration_cap) {
    const int max_supp = std::min(n, inst.family_dim() + 1);
    const double eps = 0.02;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      const int bits = __builtin_popcount(mask);
      if (bits < 2 || bits > max_supp) continue;
      std::vector<int> members;
      for (int z = 0; z < n; ++z) {
        if (mask & (1u << z)) members.push_back(z);
      }
      Vec w = Vec::Zero(n);
      for (int z : members) w(z) = 1.0 / bits;
      run_start(w);
      for (int zc : members) {
        Vec v = Vec::Zero(n);
        for (int z : members) v(z) = (z == zc) ? 1.0 - eps * (bits - 1) : eps;
        run_start(v);
      }
    }
  }

  // Keep critical points only; sort by value desc, then lexicographic argmax.
  std::vector<LocalOptimum> kept;
  for (const auto& o : optima) {
    if (o.criticality <= 1e-6) kept.push_back(o);
  }
  if (kept.empty()) kept = optima;
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.value != b.value) return a.value > b.value;
    return lex_less(a.point.weights, b.point.weights);
  });

  MaxReport rep;
  rep.local_optima = std::move(kept);
  rep.global_value = rep.local_optima.front().value;
  rep.global_argmax = rep.local_optima.front().point;
  rep.starts = opt.starts;
  rep.seed = opt.seed;
  return rep;
}

}  // namespace bregmax
