#include "bregmax/bbar.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace bregmax {

Direction normalize_direction(const Vec& u_raw, double sum_tol) {
  if (u_raw.size() < 1 || u_raw.lpNorm<Eigen::Infinity>() == 0.0) {
    throw ZeroDirection("normalize_direction: zero vector");
  }
  const double scale = u_raw.lpNorm<1>();
  if (std::abs(u_raw.sum()) > sum_tol * std::max(1.0, scale)) {
    throw NonKernelSum("normalize_direction: coordinates do not sum to 0");
  }
  Vec u = u_raw;
  u.array() -= u.sum() / u.size();  // remove rounding drift
  double plus_sum = 0;
  for (int z = 0; z < u.size(); ++z) plus_sum += std::max(u(z), 0.0);
  if (plus_sum == 0.0) throw ZeroDirection("normalize_direction: zero vector");
  u /= plus_sum;
  Direction d;
  d.u = u;
  d.u_plus = u.cwiseMax(0.0);
  d.u_minus = (-u).cwiseMax(0.0);
  return d;
}

Instance family_from_direction(const BetaSystem& beta, const Direction& u) {
  const int n = u.size();
  if (n < 2) throw std::invalid_argument("family_from_direction: |Z| < 2");
  if (beta.size() != n) {
    throw std::invalid_argument("family_from_direction: beta size mismatch");
  }
  const Mat rows = orthocomplement_basis({u.u, Vec::Ones(n)}, n);
  std::vector<std::string> labels(n);
  for (int z = 0; z < n; ++z) labels[z] = std::to_string(z);
  return Instance(std::move(labels), rows, beta);
}

Side classify_side(const Instance& inst_u, const Pm& p, const Direction& u,
                   const Tolerances& tol) {
  const ProjectionResult proj = rb_project(inst_u, p, tol);
  const double s = (p.weights - proj.pi.weights).dot(u.u);
  if (s > 1e-10) return Side::plus;
  if (s < -1e-10) return Side::minus;
  return Side::boundary;
}

namespace {

struct FiberPoint {
  Pm p{Vec()};
  Pm base{Vec()};
  double value = 0.0;
};

// On the fiber through q in closure(F_u), H(q + t u) - H(q) is maximal at
// the simplex boundary t_max(q) since H is convex and minimized at t = 0.
FiberPoint fiber_endpoint(const BetaSystem& beta, const Direction& u,
                          const Vec& q) {
  FiberPoint out;
  double t_max = std::numeric_limits<double>::infinity();
  for (int z = 0; z < u.size(); ++z) {
    if (u.u_minus(z) > 0) t_max = std::min(t_max, q(z) / u.u_minus(z));
  }
  if (!std::isfinite(t_max)) t_max = 0.0;  // cannot happen for normalized u
  Vec p = q + t_max * u.u;
  for (int z = 0; z < p.size(); ++z) p(z) = std::max(p(z), 0.0);
  out.p = Pm(p);
  out.base = Pm(q);
  if (t_max <= 0.0) {
    out.value = 0.0;
    return out;
  }
  out.value = h_energy(beta, out.p) - h_energy(beta, out.base);
  return out;
}

// Enumerate the facial sets of inst that are proper subsets of Z.
std::vector<std::vector<int>> proper_faces(const Instance& inst,
                                           const Tolerances& tol) {
  const int n = inst.zsize();
  std::set<std::vector<int>> seen;
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<int> s;
    for (int z = 0; z < n; ++z) {
      if (mask & (1u << z)) s.push_back(z);
    }
    std::vector<int> face = facial_set(inst, s, tol).members;
    if (static_cast<int>(face.size()) < n) seen.insert(std::move(face));
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

BbarResult bbar_eval(const BetaSystem& beta, const Direction& u,
                     const BbarOptions& opt, const Tolerances& tol) {
  if (u.u.lpNorm<Eigen::Infinity>() == 0.0) {
    throw ZeroDirection("bbar_eval: zero direction");
  }
  const int n = u.size();
  const Instance inst_u = family_from_direction(beta, u);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 2.0);

  std::vector<FiberPoint> found;
  auto search_chart = [&](const Instance& sub, const std::vector<int>& members,
                          int n_random) {
    auto q_of_theta = [&](const Vec& theta) {
      const Pm qs = pm_of_theta(sub, theta, tol);
      Vec q = Vec::Zero(n);
      for (size_t i = 0; i < members.size(); ++i) {
        q(members[i]) = qs.weights(static_cast<int>(i));
      }
      return q;
    };
    auto negval = [&](const Vec& theta) {
      return -fiber_endpoint(beta, u, q_of_theta(theta)).value;
    };
    const int d = sub.dim();
    std::vector<Vec> starts{Vec::Zero(d)};
    for (int s = 0; s < n_random; ++s) {
      Vec th(d);
      for (int i = 0; i < d; ++i) th(i) = gauss(rng);
      starts.push_back(th);
    }
    for (const Vec& th0 : starts) {
      const NelderMeadResult nm = nelder_mead(negval, th0, 0.5, 4000);
      found.push_back(fiber_endpoint(beta, u, q_of_theta(nm.x)));
      if (d == 0) break;
    }
  };

  std::vector<int> all(n);
  for (int z = 0; z < n; ++z) all[z] = z;
  search_chart(inst_u, all, opt.starts);

  if (n <= opt.face_cap) {
    for (const auto& face : proper_faces(inst_u, tol)) {
      // Faces missing part of supp(u-) pin the fiber at t = 0; skip them.
      bool covers_minus = true;
      for (int z = 0; z < n; ++z) {
        if (u.u_minus(z) > 0 &&
            !std::binary_search(face.begin(), face.end(), z)) {
          covers_minus = false;
          break;
        }
      }
      if (!covers_minus) continue;
      search_chart(inst_u.restrict(face), face, 2);
    }
  }

  // Cluster by the fiber endpoint; keep the best representative per cluster.
  std::vector<FiberPoint> clusters;
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.value > b.value; });
  for (const auto& fp : found) {
    if (fp.value <= 1e-9) continue;  // degenerate t_max = 0 chart point
    bool merged = false;
    for (const auto& c : clusters) {
      if (tv_distance(c.p, fp.p) <= tol.cluster_tv) {
        merged = true;
        break;
      }
    }
    if (!merged) clusters.push_back(fp);
  }

  BbarResult res;
  if (clusters.empty()) {
    // u != 0 guarantees a positive value from the interior chart; reaching
    // this branch means every search collapsed, so report the raw best.
    const auto& best = found.front();
    res.value = best.value;
    res.argmax = best.p;
    res.base = best.base;
    res.n_local = 1;
    return res;
  }
  res.value = clusters.front().value;
  res.argmax = clusters.front().p;
  res.base = clusters.front().base;
  res.n_local = static_cast<int>(clusters.size());
  return res;
}

double dbar(const Direction& u) {
  double s = 0;
  for (int z = 0; z < u.size(); ++z) {
    if (u.u(z) != 0.0) s += u.u(z) * std::log(std::abs(u.u(z)));
  }
  return s;
}

double bbar_classical(const BetaSystem& beta, const Direction& u) {
  if (!beta.all_classical()) {
    throw NonClassicalSystem("bbar_classical needs a classical system");
  }
  const Vec nu = beta.classical_nu();
  // With a non-counting reference the exponent picks up ln(1/nu) weights:
  // the projection of u+ onto F_u solves
  // sum_z u(z) ln(Pi(z)/nu(z)) = 0, which shifts Dbar by sum u ln(1/nu).
  double s = 0;
  for (int z = 0; z < u.size(); ++z) {
    if (u.u(z) != 0.0) {
      s += u.u(z) * (std::log(std::abs(u.u(z))) - std::log(nu(z)));
    }
  }
  if (s > 700) return s;  // log1p(exp(s)) up to 1e-300 relative error
  return std::log1p(std::exp(s));
}

MaxBbarReport maximize_bbar(const Instance& inst, const BbarOptions& opt,
                            const Tolerances& tol) {
  const Mat K = inst.kernel_basis();
  const int k = static_cast<int>(K.cols());
  if (k == 0) throw TrivialKernel("maximize_bbar: N(f) = {0}");
  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Candidate-and-polish search over kernel coordinates, scored by the
  // theta-chart evaluation of Bbar.
  BbarOptions score_opt = opt;
  score_opt.starts = std::max(8, opt.starts / 8);
  auto eval_coords = [&](const Vec& c) -> double {
    const double norm = c.norm();
    if (norm < 1e-8) return 0.0;
    const Direction u = normalize_direction(K * (c / norm));
    return bbar_eval(inst.beta(), u, score_opt, tol).value;
  };

  // Candidate directions: psi images of the primal local maximizers (the
  // exchange maps pair up the two problems' critical points), the kernel
  // basis rays, and random unit coordinates.
  std::vector<Vec> candidates;
  std::size_t n_seeded = 0;
  {
    MaximizeOptions mo;
    mo.starts = std::max(8, opt.starts / 2);
    mo.seed = opt.seed;
    const MaxReport primal = maximize_divergence(inst, mo, tol);
    for (const auto& o : primal.local_optima) {
      if (o.value <= 1e-9) continue;
      try {
        const Direction u = psi(inst, o.point, tol);
        Vec c = K.transpose() * u.u;
        if (c.norm() > 1e-8) candidates.push_back(c / c.norm());
      } catch (const MemberOfClosure&) {
      }
      if (candidates.size() >= 8) break;
    }
    n_seeded = candidates.size();
  }
  for (int i = 0; i < k; ++i) {
    Vec e = Vec::Zero(k);
    e(i) = 1.0;
    candidates.push_back(e);
    candidates.push_back(-e);
  }
  const int n_random = std::max(2, opt.starts / 8);
  for (int s = 0; s < n_random; ++s) {
    Vec c(k);
    for (int i = 0; i < k; ++i) c(i) = gauss(rng);
    if (c.norm() < 1e-8) c(0) = 1.0;
    candidates.push_back(c / c.norm());
  }

  // Drop near-duplicate candidates (seeded directions often coincide with
  // each other or with a basis ray).
  {
    std::vector<Vec> unique;
    std::size_t uniq_seeded = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      bool dup = false;
      for (const Vec& c : unique) {
        if ((candidates[i] - c).norm() < 1e-4) {
          dup = true;
          break;
        }
      }
      if (dup) continue;
      unique.push_back(candidates[i]);
      if (i < n_seeded) uniq_seeded = unique.size();
    }
    candidates = std::move(unique);
    n_seeded = uniq_seeded;
  }

  MaxBbarReport rep;
  double best = -1;
  Vec best_c;
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Vec& c0 = candidates[i];
    const double val = eval_coords(c0);
    rep.local.emplace_back(c0, val);
    if (val > best) {
      best = val;
      best_c = c0;
      best_idx = i;
    }
  }
  // Local polish of the leading candidate in kernel coordinates. A winning
  // seeded candidate equals the argmax of the exchanged problem already and
  // needs no refinement; only basis/random leaders get polished.
  if (k > 1 && best_idx >= n_seeded) {
    auto neg = [&](const Vec& c) {
      // Small radial pull keeps the simplex off the scale-invariant ray.
      return -eval_coords(c) + 1e-3 * std::pow(c.norm() - 1.0, 2);
    };
    const NelderMeadResult nm = nelder_mead(neg, best_c, 0.2, 40 * k,
                                            1e-9, 1e-6);
    const double val = eval_coords(nm.x);
    if (val > best && nm.x.norm() > 1e-8) {
      best = val;
      best_c = nm.x;
    }
  }
  rep.argmax = normalize_direction(K * (best_c / best_c.norm()));
  // Accurate chart evaluation at the selected direction; the surrogate
  // value is kept when the chart search lands short of it.
  BbarOptions full = opt;
  full.starts = std::max(opt.starts, 8);
  rep.value = std::max(bbar_eval(inst.beta(), rep.argmax, full, tol).value,
                       best);
  return rep;
}

Direction psi(const Instance& inst, const Pm& p, const Tolerances& tol) {
  const ProjectionResult proj = rb_project(inst, p, tol);
  const Vec diff = p.weights - proj.pi.weights;
  if (diff.lpNorm<Eigen::Infinity>() <= 1e-10) {
    throw MemberOfClosure("psi: P lies in closure(E)");
  }
  return normalize_direction(diff, 1e-6);
}

Pm phi(const BetaSystem& beta, const Direction& u, const BbarOptions& opt,
       const Tolerances& tol) {
  return bbar_eval(beta, u, opt, tol).argmax;
}

ScanReport conjecture_scan(const BetaSystem& beta, int zsize, int trials,
                           int starts, std::uint64_t seed,
                           const Tolerances& tol) {
  if (trials < 1) throw std::invalid_argument("conjecture_scan: trials < 1");
  if (beta.size() != zsize) {
    throw std::invalid_argument("conjecture_scan: beta size != zsize");
  }
  ScanReport rep;
  std::mt19937_64 master(seed);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = master();
    std::mt19937_64 rng(trial_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec u_raw(zsize);
    do {
      for (int z = 0; z < zsize; ++z) u_raw(z) = gauss(rng);
      u_raw.array() -= u_raw.mean();
    } while (u_raw.lpNorm<Eigen::Infinity>() < 1e-6);
    const Direction u = normalize_direction(u_raw, 1e-6);
    BbarOptions opt;
    opt.starts = starts;
    opt.seed = trial_seed;
    const BbarResult r = bbar_eval(beta, u, opt, tol);
    rep.trials.push_back({u.u, r.value, r.n_local, trial_seed});
    if (r.n_local > 1) ++rep.multimodal_count;
  }
  return rep;
}

}  // namespace bregmax
