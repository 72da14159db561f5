#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bregmax/beta.hpp"
#include "bregmax/numerics.hpp"

namespace bregmax {

inline constexpr double kSupportEps = 1e-12;

/// Probability measure on Z.
struct Pm {
  Vec weights;

  explicit Pm(Vec w = Vec()) : weights(std::move(w)) {}

  int size() const { return static_cast<int>(weights.size()); }
  std::vector<int> support(double eps = kSupportEps) const;
  void validate(double eps = 1e-12) const;

  static Pm uniform(int n);
  static Pm delta(int n, int z);
};

/// Total-variation distance (half the l1 distance).
double tv_distance(const Pm& a, const Pm& b);

struct FacialSet {
  std::vector<int> members;  // sorted, unique
};

/// Finite set Z, statistic f (design matrix with columns f(z)), and a
/// generator system; together they define the Bregman family E_f.
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<std::string> z_labels, Mat f, BetaSystem beta);

  int zsize() const { return static_cast<int>(labels_.size()); }
  int dim() const { return static_cast<int>(f_.rows()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Mat& f() const { return f_; }
  const BetaSystem& beta() const { return beta_; }

  /// Sub-instance on a subset of Z (columns and generators restricted).
  Instance restrict(const std::vector<int>& members) const;

  /// Affine dimension of cs(E) = conv{f(z)}.
  int family_dim() const;

  /// Orthonormal basis (columns) of N(f) = {u : A u = 0, sum u = 0}.
  Mat kernel_basis() const;

 private:
  std::vector<std::string> labels_;
  Mat f_;
  BetaSystem beta_;
};

/// Normalizer: the unique r with sum_z e_z(<theta, f(z)> - r) = 1.
double lambda_of_theta(const Instance& inst, const Vec& theta,
                       const Tolerances& tol = {},
                       std::optional<double> hint = std::nullopt);

Pm pm_of_theta(const Instance& inst, const Vec& theta,
               const Tolerances& tol = {});

Vec moment_map(const Instance& inst, const Pm& p);

double upsilon(const Instance& inst, const Vec& theta,
               const Tolerances& tol = {});
Vec upsilon_grad(const Instance& inst, const Vec& theta,
                 const Tolerances& tol = {});
Mat upsilon_hess(const Instance& inst, const Vec& theta,
                 const Tolerances& tol = {});

/// Smallest facial set containing S, via one bounded LP per candidate z.
FacialSet facial_set(const Instance& inst, const std::vector<int>& s,
                     const Tolerances& tol = {});

}  // namespace bregmax
