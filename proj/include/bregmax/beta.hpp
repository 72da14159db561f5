#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bregmax/numerics.hpp"

namespace bregmax {

struct NonPositiveReference : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NegativeAlpha : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonPositiveArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonClassicalSystem : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// One coordinate generator: a convex differentiable beta on (0,inf) whose
/// derivative runs from -inf at 0+ to +inf. Supplies the derivative l,
/// the link e = l^{-1}, the conjugate beta*, and the link derivative e'.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual double beta(double x) const = 0;        // continuous extension at 0
  virtual double l(double x) const = 0;           // beta'
  virtual double e(double r) const = 0;           // (beta*)' = l^{-1}
  virtual double e_prime(double r) const = 0;     // (beta*)''
  virtual double conjugate(double r) const = 0;   // beta*
  virtual std::string kind() const = 0;

  /// e'(r) given a precomputed ex = e(r); generators whose link derivative
  /// is a closed form of e(r) override this to skip a second inversion.
  virtual double e_prime_from(double r, double ex) const {
    (void)ex;
    return e_prime(r);
  }
};

/// Classical generator beta(x) = x ln(x/nu) - x. Link nu e^r; conjugate
/// nu e^r. Yields exponential families and KL divergence.
class ClassicalGenerator final : public Generator {
 public:
  explicit ClassicalGenerator(double nu);
  double beta(double x) const override;
  double l(double x) const override;
  double e(double r) const override;
  double e_prime(double r) const override;
  double conjugate(double r) const override;
  std::string kind() const override { return "classical"; }
  double e_prime_from(double, double ex) const override { return ex; }
  double nu() const { return nu_; }

 private:
  double nu_;
};

/// beta(x) = x ln x - x + (alpha/2) x^2; derivative ln x + alpha x.
/// The link has no closed form and is computed by monotone inversion.
class EntropyQuadraticGenerator final : public Generator {
 public:
  explicit EntropyQuadraticGenerator(double alpha);
  double beta(double x) const override;
  double l(double x) const override;
  double e(double r) const override;
  double e_prime(double r) const override;
  double conjugate(double r) const override;
  std::string kind() const override { return "entropy_quadratic"; }
  double e_prime_from(double, double ex) const override {
    return ex / (1.0 + alpha_ * ex);
  }
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

/// User-supplied generator; link and conjugate fall back to numeric
/// inversion and the identity beta*(r) = r e(r) - beta(e(r)).
class CustomGenerator final : public Generator {
 public:
  CustomGenerator(std::function<double(double)> beta_fn,
                  std::function<double(double)> l_fn);
  double beta(double x) const override;
  double l(double x) const override;
  double e(double r) const override;
  double e_prime(double r) const override;
  double conjugate(double r) const override;
  std::string kind() const override { return "custom"; }

 private:
  std::function<double(double)> beta_fn_, l_fn_;
};

/// The collection {beta_z} for a finite Z.
class BetaSystem {
 public:
  BetaSystem() = default;
  explicit BetaSystem(std::vector<std::shared_ptr<const Generator>> gens)
      : gens_(std::move(gens)) {}

  int size() const { return static_cast<int>(gens_.size()); }
  const Generator& at(int z) const { return *gens_.at(z); }
  std::shared_ptr<const Generator> share(int z) const { return gens_.at(z); }

  /// Restriction to a subset of Z (indices must be valid).
  BetaSystem restrict(const std::vector<int>& members) const;

  bool all_classical() const;
  /// Reference measure of an all-classical system.
  Vec classical_nu() const;

 private:
  std::vector<std::shared_ptr<const Generator>> gens_;
};

BetaSystem make_classical(const Vec& nu);
BetaSystem make_entropy_quadratic(const Vec& alpha);

double conjugate_eval(const BetaSystem& sys, int z, double r);
double link_eval(const BetaSystem& sys, int z, double r);
double inverse_link_eval(const BetaSystem& sys, int z, double y);

}  // namespace bregmax
