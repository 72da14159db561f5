#include "bregmax/beta.hpp"

#include <cmath>

namespace bregmax {

// ---- classical -----------------------------------------------------------

ClassicalGenerator::ClassicalGenerator(double nu) : nu_(nu) {
  if (!(nu > 0)) throw NonPositiveReference("classical generator needs nu > 0");
}

double ClassicalGenerator::beta(double x) const {
  if (x == 0.0) return 0.0;  // lim x->0+ of x ln(x/nu) - x
  return x * std::log(x / nu_) - x;
}

double ClassicalGenerator::l(double x) const { return std::log(x / nu_); }

double ClassicalGenerator::e(double r) const { return nu_ * std::exp(r); }

double ClassicalGenerator::e_prime(double r) const { return nu_ * std::exp(r); }

double ClassicalGenerator::conjugate(double r) const {
  return nu_ * std::exp(r);
}

// ---- entropy-quadratic ---------------------------------------------------

EntropyQuadraticGenerator::EntropyQuadraticGenerator(double alpha)
    : alpha_(alpha) {
  if (alpha < 0) throw NegativeAlpha("entropy_quadratic needs alpha >= 0");
}

double EntropyQuadraticGenerator::beta(double x) const {
  if (x == 0.0) return 0.0;
  return x * std::log(x) - x + 0.5 * alpha_ * x * x;
}

double EntropyQuadraticGenerator::l(double x) const {
  return std::log(x) + alpha_ * x;
}

double EntropyQuadraticGenerator::e(double r) const {
  if (alpha_ == 0.0) return std::exp(r);
  // Solve ln x + alpha x = r. The residual is increasing and concave in x,
  // so Newton converges monotonically from any positive start after the
  // first step; pick the dominant-term guess to land close immediately.
  double x = (r > 1.0 && alpha_ * std::exp(std::min(r, 700.0)) > r)
                 ? r / alpha_
                 : std::exp(std::min(r, 700.0));
  if (!(x > 0) || !std::isfinite(x)) x = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double fx = std::log(x) + alpha_ * x - r;
    if (std::abs(fx) < 1e-15 * std::max(1.0, std::abs(r))) break;
    const double xn = x - fx / (1.0 / x + alpha_);
    if (!(xn > 0) || !std::isfinite(xn)) {
      x *= 0.5;
      continue;
    }
    if (xn == x) break;
    x = xn;
  }
  return x;
}

double EntropyQuadraticGenerator::e_prime(double r) const {
  const double ex = e(r);
  // l'(x) = 1/x + alpha, so (beta*)'' = 1 / l'(e(r)).
  return ex / (1.0 + alpha_ * ex);
}

double EntropyQuadraticGenerator::conjugate(double r) const {
  const double ex = e(r);
  return r * ex - beta(ex);
}

// ---- custom --------------------------------------------------------------

CustomGenerator::CustomGenerator(std::function<double(double)> beta_fn,
                                 std::function<double(double)> l_fn)
    : beta_fn_(std::move(beta_fn)), l_fn_(std::move(l_fn)) {}

double CustomGenerator::beta(double x) const { return beta_fn_(x); }

double CustomGenerator::l(double x) const { return l_fn_(x); }

double CustomGenerator::e(double r) const {
  return invert_increasing(l_fn_, r);
}

double CustomGenerator::e_prime(double r) const {
  const double h = 1e-6 * std::max(1.0, std::abs(r));
  return (e(r + h) - e(r - h)) / (2.0 * h);
}

double CustomGenerator::conjugate(double r) const {
  const double ex = e(r);
  return r * ex - beta_fn_(ex);
}

// ---- system --------------------------------------------------------------

BetaSystem BetaSystem::restrict(const std::vector<int>& members) const {
  std::vector<std::shared_ptr<const Generator>> sub;
  sub.reserve(members.size());
  for (int z : members) sub.push_back(gens_.at(z));
  return BetaSystem(std::move(sub));
}

bool BetaSystem::all_classical() const {
  for (const auto& g : gens_) {
    if (g->kind() != "classical") return false;
  }
  return !gens_.empty();
}

Vec BetaSystem::classical_nu() const {
  if (!all_classical()) {
    throw NonClassicalSystem("classical_nu on non-classical system");
  }
  Vec nu(size());
  for (int z = 0; z < size(); ++z) {
    nu(z) = static_cast<const ClassicalGenerator&>(*gens_[z]).nu();
  }
  return nu;
}

BetaSystem make_classical(const Vec& nu) {
  std::vector<std::shared_ptr<const Generator>> gens;
  gens.reserve(nu.size());
  for (int z = 0; z < nu.size(); ++z) {
    gens.push_back(std::make_shared<ClassicalGenerator>(nu(z)));
  }
  return BetaSystem(std::move(gens));
}

BetaSystem make_entropy_quadratic(const Vec& alpha) {
  std::vector<std::shared_ptr<const Generator>> gens;
  gens.reserve(alpha.size());
  for (int z = 0; z < alpha.size(); ++z) {
    gens.push_back(std::make_shared<EntropyQuadraticGenerator>(alpha(z)));
  }
  return BetaSystem(std::move(gens));
}

double conjugate_eval(const BetaSystem& sys, int z, double r) {
  return sys.at(z).conjugate(r);
}

double link_eval(const BetaSystem& sys, int z, double r) {
  return sys.at(z).e(r);
}

double inverse_link_eval(const BetaSystem& sys, int z, double y) {
  if (!(y > 0)) throw NonPositiveArgument("inverse link needs y > 0");
  return sys.at(z).l(y);
}

}  // namespace bregmax
