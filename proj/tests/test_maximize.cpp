#include <doctest.h>

#include <cmath>

#include "bregmax/maximize.hpp"
#include "test_helpers.hpp"

using namespace bregmax;
using namespace bregmax::testing;

TEST_CASE("maximize on full family is zero") {
  MaximizeOptions opt;
  opt.starts = 4;
  opt.seed = 1;
  const MaxReport rep = maximize_divergence(full_instance(4), opt);
  CHECK(std::abs(rep.global_value) <= 1e-8);
}

TEST_CASE("maximize point family: KL to uniform at a vertex") {
  MaximizeOptions opt;
  opt.starts = 8;
  opt.seed = 2;
  const MaxReport rep = maximize_divergence(point_instance(3), opt);
  CHECK(rep.global_value == doctest::Approx(std::log(3.0)).epsilon(1e-6));
  CHECK(rep.global_argmax.support().size() == 1);
}

TEST_CASE("maximize independence instance") {
  MaximizeOptions opt;
  opt.starts = 16;
  opt.seed = 7;
  const MaxReport rep = maximize_divergence(independence_instance(), opt);
  CHECK(rep.global_value == doctest::Approx(std::log(2.0)).epsilon(1e-5));
  Vec w = Vec::Zero(4);
  w(0) = w(3) = 0.5;
  const Pm target(w);
  Vec w2 = Vec::Zero(4);
  w2(1) = w2(2) = 0.5;
  const Pm target2(w2);
  const double tv = std::min(tv_distance(rep.global_argmax, target),
                             tv_distance(rep.global_argmax, target2));
  CHECK(tv <= 1e-5);
}

TEST_CASE("reported optima are critical and pass the gap conditions") {
  MaximizeOptions opt;
  opt.starts = 16;
  opt.seed = 3;
  for (const Instance& inst : {independence_instance(), point_instance(4)}) {
    const MaxReport rep = maximize_divergence(inst, opt);
    for (const auto& o : rep.local_optima) {
      CHECK(o.criticality <= 1e-6);
      CHECK(criticality_residual(inst, o.point) <= 1e-6);
      if (o.value > 1e-9) {
        const PositiveGapCheck gc = check_positive_gap(inst, o.point);
        CHECK(gc.support_ok);
        CHECK(gc.c > 0.0);
      }
    }
    // support bound for the global maximizer
    CHECK(static_cast<int>(rep.global_argmax.support().size()) <=
          inst.family_dim() + 1);
  }
}

TEST_CASE("multistart agrees with support enumeration") {
  MaximizeOptions multistart;
  multistart.starts = 24;
  multistart.seed = 9;
  multistart.enumeration_cap = 0;  // disable enumeration
  MaximizeOptions enumerate;
  enumerate.starts = 1;
  enumerate.seed = 9;
  enumerate.enumeration_cap = 8;
  for (const Instance& inst : {independence_instance(), point_instance(4)}) {
    const double a = maximize_divergence(inst, multistart).global_value;
    const double b = maximize_divergence(inst, enumerate).global_value;
    CHECK(std::abs(a - b) <= 1e-5);
  }
}

TEST_CASE("criticality_residual behaviour") {
  const Instance inst = independence_instance();
  std::mt19937_64 rng(61);
  // members of the family have residual 0 by convention
  CHECK(criticality_residual(inst, pm_of_theta(inst, random_theta(rng, 2))) ==
        doctest::Approx(0.0));
  // a random interior pm is typically far from critical (reported only)
  const Pm p = random_pm(rng, 4);
  const double res = criticality_residual(inst, p);
  MESSAGE("random pm criticality residual: ", res);
  CHECK(res >= 0.0);
}

TEST_CASE("check_positive_gap flags perturbed non-optima") {
  const Instance inst = independence_instance();
  // vacuous pass for family members
  const PositiveGapCheck gc =
      check_positive_gap(inst, pm_of_theta(inst, Vec::Zero(2)));
  CHECK(gc.vacuous);
  // a deliberately lopsided pm violates the support condition
  Vec w(4);
  w << 0.6, 0.25, 0.1, 0.05;
  CHECK_THROWS_AS(check_positive_gap(inst, Pm(w)),
                  ViolatedNecessaryCondition);
}

TEST_CASE("maximize is deterministic given the seed") {
  MaximizeOptions opt;
  opt.starts = 8;
  opt.seed = 42;
  const MaxReport a = maximize_divergence(independence_instance(), opt);
  const MaxReport b = maximize_divergence(independence_instance(), opt);
  CHECK(a.global_value == b.global_value);
  CHECK((a.global_argmax.weights - b.global_argmax.weights)
            .lpNorm<Eigen::Infinity>() == 0.0);
}
