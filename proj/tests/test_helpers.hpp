#pragma once

#include <random>

#include "bregmax/family.hpp"
#include "bregmax/numerics.hpp"

namespace bregmax::testing {

/// 2x2 independence model: Z = {00, 01, 10, 11}, statistics are the two
/// bit indicators, counting reference.
inline Instance independence_instance() {
  Mat f(2, 4);
  f << 0, 0, 1, 1,   // first bit
       0, 1, 0, 1;   // second bit
  return Instance({"00", "01", "10", "11"}, f,
                  make_classical(Vec::Ones(4)));
}

/// Point family (d = 0) over n outcomes with uniform classical reference.
inline Instance point_instance(int n) {
  std::vector<std::string> labels;
  for (int z = 0; z < n; ++z) labels.push_back(std::to_string(z));
  return Instance(labels, Mat(0, n), make_classical(Vec::Constant(n, 1.0 / n)));
}

/// Full family on n outcomes: affinely independent columns (the standard
/// simplex vertices), so E = P(Z) and B(., E) vanishes.
inline Instance full_instance(int n) {
  std::vector<std::string> labels;
  for (int z = 0; z < n; ++z) labels.push_back(std::to_string(z));
  Mat f = Mat::Identity(n, n).topRows(n - 1);
  return Instance(labels, f, make_classical(Vec::Constant(n, 1.0 / n)));
}

inline Pm random_pm(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> expo(1.0);
  Vec w(n);
  for (int z = 0; z < n; ++z) w(z) = expo(rng);
  w /= w.sum();
  return Pm(w);
}

inline Vec random_theta(std::mt19937_64& rng, int d, double scale = 2.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Vec th(d);
  for (int i = 0; i < d; ++i) th(i) = gauss(rng);
  return th;
}

/// Oracle: S is facial iff some hyperplane supports conv{f(z)} exactly at
/// the points of S. Checked as LP feasibility of
///   a.f(y) = b (y in S),  a.f(w) <= b - 1 (w outside S).
inline bool is_facial_oracle(const Instance& inst, const std::vector<int>& s) {
  const int n = inst.zsize();
  const int d = inst.dim();
  if (static_cast<int>(s.size()) == n) return true;
  if (s.empty()) return false;
  std::vector<int> outside;
  {
    std::vector<bool> in(n, false);
    for (int z : s) in[z] = true;
    for (int z = 0; z < n; ++z) {
      if (!in[z]) outside.push_back(z);
    }
  }
  const int nv = 2 * d + 2 + static_cast<int>(outside.size());
  LpProblem p;
  p.objective = Vec::Zero(nv);
  p.eq_matrix = Mat::Zero(static_cast<int>(s.size() + outside.size()), nv);
  p.eq_rhs = Vec::Zero(p.eq_matrix.rows());
  int row = 0;
  auto fill = [&](int z, int r) {
    for (int i = 0; i < d; ++i) {
      p.eq_matrix(r, i) = inst.f()(i, z);
      p.eq_matrix(r, d + i) = -inst.f()(i, z);
    }
    p.eq_matrix(r, 2 * d) = -1.0;
    p.eq_matrix(r, 2 * d + 1) = 1.0;
  };
  for (int z : s) {
    fill(z, row);
    p.eq_rhs(row) = 0.0;
    ++row;
  }
  for (size_t i = 0; i < outside.size(); ++i) {
    fill(outside[i], row);
    p.eq_matrix(row, 2 * d + 2 + static_cast<int>(i)) = 1.0;
    p.eq_rhs(row) = -1.0;
    ++row;
  }
  return lp_solve(p).status == LpStatus::Optimal;
}

/// Oracle for the smallest facial superset: enumerate every facial subset
/// and intersect those containing S.
inline std::vector<int> smallest_facial_oracle(const Instance& inst,
                                               const std::vector<int>& s) {
  const int n = inst.zsize();
  std::vector<bool> want(n, false);
  for (int z : s) want[z] = true;
  std::vector<int> best;
  for (int z = 0; z < n; ++z) best.push_back(z);  // Z itself is facial
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<int> cand;
    bool covers = true;
    for (int z = 0; z < n; ++z) {
      if (mask & (1u << z)) cand.push_back(z);
    }
    for (int z = 0; z < n; ++z) {
      if (want[z] && !(mask & (1u << z))) covers = false;
    }
    if (!covers || cand.size() >= best.size()) continue;
    if (is_facial_oracle(inst, cand)) best = cand;
  }
  return best;
}

}  // namespace bregmax::testing
