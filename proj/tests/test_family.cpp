#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"

using namespace bregmax;
using namespace bregmax::testing;

TEST_CASE("lambda_of_theta closed forms") {
  // classical with pm reference, theta = 0 -> Lambda = 0
  Mat f(1, 3);
  f << 0, 1, 2;
  Vec nu(3);
  nu << 0.2, 0.5, 0.3;
  const Instance inst({"a", "b", "c"}, f, make_classical(nu));
  CHECK(lambda_of_theta(inst, Vec::Zero(1)) ==
        doctest::Approx(0.0).epsilon(1e-10));

  // counting reference, |Z| = 2, theta = 0 -> Lambda = ln 2
  Mat f2(1, 2);
  f2 << 0, 1;
  const Instance inst2({"a", "b"}, f2, make_classical(Vec::Ones(2)));
  CHECK(lambda_of_theta(inst2, Vec::Zero(1)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-10));

  // entropy-quadratic: defining residual
  Mat f3(1, 3);
  f3 << -1, 0, 1;
  const Instance inst3({"a", "b", "c"}, f3,
                       make_entropy_quadratic(Vec::Ones(3)));
  const double lam = lambda_of_theta(inst3, Vec::Zero(1));
  double total = 0;
  for (int z = 0; z < 3; ++z) total += inst3.beta().at(z).e(-lam);
  CHECK(std::abs(total - 1.0) <= 1e-10);
}

TEST_CASE("lambda residual across random theta") {
  std::mt19937_64 rng(11);
  for (const Instance& inst : {independence_instance(), full_instance(4)}) {
    for (int t = 0; t < 100; ++t) {
      const Vec th = random_theta(rng, inst.dim());
      const double lam = lambda_of_theta(inst, th);
      double total = 0;
      for (int z = 0; z < inst.zsize(); ++z) {
        total += inst.beta().at(z).e(th.dot(inst.f().col(z)) - lam);
      }
      CHECK(std::abs(total - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("pm_of_theta") {
  Mat f(1, 3);
  f << 0, 1, 2;
  Vec nu(3);
  nu << 0.2, 0.5, 0.3;
  const Instance inst({"a", "b", "c"}, f, make_classical(nu));
  const Pm p0 = pm_of_theta(inst, Vec::Zero(1));
  CHECK((p0.weights - nu).lpNorm<Eigen::Infinity>() <= 1e-10);

  const Instance one({"x"}, Mat(0, 1), make_classical(Vec::Ones(1)));
  CHECK(pm_of_theta(one, Vec()).weights(0) == doctest::Approx(1.0));

  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Pm p = pm_of_theta(inst, random_theta(rng, 1));
    CHECK(std::abs(p.weights.sum() - 1.0) <= 1e-10);
    CHECK(p.weights.minCoeff() > 0.0);
  }
}

TEST_CASE("moment_map") {
  const Instance inst = independence_instance();
  CHECK((moment_map(inst, Pm::delta(4, 3)) - inst.f().col(3))
            .lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
  const Vec s = inst.f().rowwise().sum();
  CHECK((moment_map(inst, Pm::uniform(4)) - s / 4.0).lpNorm<Eigen::Infinity>() <=
        1e-15);
  Vec w = Vec::Zero(4);
  w(0) = w(3) = 0.5;
  const Vec mu = moment_map(inst, Pm(w));
  CHECK(mu(0) == doctest::Approx(0.5));
  CHECK(mu(1) == doctest::Approx(0.5));
}

TEST_CASE("upsilon and its derivatives") {
  std::mt19937_64 rng(21);
  const Instance inst = independence_instance();
  // classical: Upsilon = 1 + Lambda
  for (int t = 0; t < 20; ++t) {
    const Vec th = random_theta(rng, 2);
    CHECK(upsilon(inst, th) ==
          doctest::Approx(1.0 + lambda_of_theta(inst, th)).epsilon(1e-9));
  }
  // gradient matches central differences; also equals mu(P_theta)
  for (int t = 0; t < 20; ++t) {
    const Vec th = random_theta(rng, 2, 1.0);
    const Vec g = upsilon_grad(inst, th);
    const Vec gfd =
        fd_gradient([&](const Vec& x) { return upsilon(inst, x); }, th, 1e-6);
    CHECK((g - gfd).norm() / std::max(1.0, g.norm()) <= 1e-5);
    CHECK((g - moment_map(inst, pm_of_theta(inst, th)))
              .lpNorm<Eigen::Infinity>() <= 1e-12);
  }
  // Hessian PSD
  for (int t = 0; t < 20; ++t) {
    const Mat H = upsilon_hess(inst, random_theta(rng, 2, 1.0));
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  }
  // d = 0: constant Upsilon, empty gradient
  const Instance pt = point_instance(3);
  CHECK(upsilon_grad(pt, Vec()).size() == 0);
  CHECK(upsilon(pt, Vec()) == doctest::Approx(upsilon(pt, Vec())));
}

TEST_CASE("entropy-quadratic upsilon gradient check") {
  Mat f(1, 3);
  f << -1, 0, 1;
  Vec alpha(3);
  alpha << 0.5, 1.0, 2.0;
  const Instance inst({"a", "b", "c"}, f, make_entropy_quadratic(alpha));
  std::mt19937_64 rng(22);
  for (int t = 0; t < 10; ++t) {
    const Vec th = random_theta(rng, 1, 1.0);
    const Vec g = upsilon_grad(inst, th);
    const Vec gfd =
        fd_gradient([&](const Vec& x) { return upsilon(inst, x); }, th, 1e-6);
    CHECK((g - gfd).norm() / std::max(1.0, g.norm()) <= 1e-5);
    const Mat H = upsilon_hess(inst, th);
    const Vec hfd = fd_gradient(
        [&](const Vec& x) { return upsilon_grad(inst, x)(0); }, th, 1e-5);
    CHECK(std::abs(H(0, 0) - hfd(0)) <= 1e-4 * std::max(1.0, H(0, 0)));
  }
}

TEST_CASE("facial_set on standard shapes") {
  // simplex: every subset facial
  const Instance full = full_instance(4);
  CHECK(facial_set(full, {1, 2}).members == std::vector<int>{1, 2});
  // d = 0: single face Z
  const Instance pt = point_instance(3);
  CHECK(facial_set(pt, {1}).members == std::vector<int>{0, 1, 2});
  // independence model: the square's faces
  const Instance ind = independence_instance();
  CHECK(facial_set(ind, {0}).members == std::vector<int>{0});
  CHECK(facial_set(ind, {0, 3}).members == std::vector<int>{0, 1, 2, 3});
  CHECK(facial_set(ind, {0, 1}).members == std::vector<int>{0, 1});
}

TEST_CASE("facial_set idempotent and monotone") {
  std::mt19937_64 rng(31);
  const Instance ind = independence_instance();
  for (int t = 0; t < 20; ++t) {
    std::vector<int> s;
    for (int z = 0; z < 4; ++z) {
      if (rng() % 2) s.push_back(z);
    }
    if (s.empty()) s.push_back(0);
    const FacialSet f1 = facial_set(ind, s);
    for (int z : s) {
      CHECK(std::binary_search(f1.members.begin(), f1.members.end(), z));
    }
    CHECK(facial_set(ind, f1.members).members == f1.members);
  }
}

TEST_CASE("facial_set matches supporting-hyperplane oracle") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 12; ++t) {
    const int n = 3 + static_cast<int>(rng() % 4);  // 3..6
    const int d = 1 + static_cast<int>(rng() % 2);  // 1..2
    Mat f(d, n);
    for (int i = 0; i < d * n; ++i) f(i / n, i % n) = gauss(rng);
    std::vector<std::string> labels;
    for (int z = 0; z < n; ++z) labels.push_back(std::to_string(z));
    const Instance inst(labels, f, make_classical(Vec::Constant(n, 1.0)));
    for (int k = 0; k < 6; ++k) {
      std::vector<int> s;
      for (int z = 0; z < n; ++z) {
        if (rng() % 3 == 0) s.push_back(z);
      }
      if (s.empty()) s.push_back(static_cast<int>(rng() % n));
      CHECK(facial_set(inst, s).members == smallest_facial_oracle(inst, s));
    }
  }
}

TEST_CASE("kernel basis spans N(f)") {
  const Instance ind = independence_instance();
  const Mat K = ind.kernel_basis();
  REQUIRE(K.cols() == 1);
  CHECK((ind.f() * K).lpNorm<Eigen::Infinity>() <= 1e-10);
  CHECK(std::abs(K.col(0).sum()) <= 1e-10);
  const Instance full = full_instance(4);
  CHECK(full.kernel_basis().cols() == 0);
}

TEST_CASE("instance validation") {
  CHECK_THROWS(Instance({}, Mat(0, 0), BetaSystem()));
  Mat f(1, 2);
  f << 0, 1;
  CHECK_THROWS(Instance({"a", "b", "c"}, f, make_classical(Vec::Ones(3))));
}
