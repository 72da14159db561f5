#include <doctest.h>

#include <cmath>
#include <random>

#include "bregmax/numerics.hpp"

using namespace bregmax;

namespace {

// Independent bisection oracle for increasing h on (0, inf).
double bisect_oracle(const std::function<double(double)>& h, double y) {
  double lo = 1e-12, hi = 1e12;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (h(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

}  // namespace

TEST_CASE("solve_decreasing_root closed forms") {
  CHECK(solve_decreasing_root([](double r) { return 2.0 * std::exp(-r); }, 1.0,
                              0.0) == doctest::Approx(std::log(2)).epsilon(1e-10));
  CHECK(solve_decreasing_root([](double r) { return 1.0 - r; }, 0.0, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // nu a pm: sum nu e^{-r} = 1 at r = 0
  CHECK(solve_decreasing_root(
            [](double r) { return 0.3 * std::exp(-r) + 0.7 * std::exp(-r); },
            1.0, 5.0) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("solve_decreasing_root reports missing bracket") {
  CHECK_THROWS_AS(
      solve_decreasing_root([](double) { return 0.0; }, 1.0, 0.0),
      NoBracket);
}

TEST_CASE("solve_decreasing_root residual property") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unif(0.1, 3.0);
  for (int t = 0; t < 1000; ++t) {
    const double a = unif(rng), b = unif(rng), c = unif(rng) - 1.5;
    auto g = [&](double r) { return -a * r - b * r * r * r + c; };
    const double target = unif(rng) - 1.5;
    const double r = solve_decreasing_root(g, target, unif(rng));
    CHECK(std::abs(g(r) - target) <= 1e-12);
  }
}

TEST_CASE("invert_increasing") {
  CHECK(invert_increasing([](double x) { return std::log(x); }, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(invert_increasing([](double x) { return std::log(x) + x; }, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
  auto h = [](double x) { return std::log(x) + 2.0 * x; };
  const double expect = bisect_oracle(h, 0.5);
  CHECK(invert_increasing(h, 0.5) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("lp_solve basics") {
  {
    LpProblem p;
    p.objective = Vec::Zero(2);
    p.objective << 1, 0;
    p.eq_matrix = Mat::Ones(1, 2);
    p.eq_rhs = Vec::Ones(1);
    const LpResult r = lp_solve(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(1.0));
    CHECK(r.solution(0) == doctest::Approx(1.0));
    CHECK(r.solution(1) == doctest::Approx(0.0));
  }
  {
    LpProblem p;
    p.objective = Vec::Zero(3);
    p.objective << 0, 0, 1;
    p.eq_matrix = Mat(2, 3);
    p.eq_matrix << 1, 1, 1, 1, -1, 0;
    p.eq_rhs = Vec(2);
    p.eq_rhs << 1, 1;
    const LpResult r = lp_solve(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r.solution(0) == doctest::Approx(1.0));
  }
}

TEST_CASE("lp_solve infeasible and unbounded") {
  {
    LpProblem p;
    p.objective = Vec::Ones(1);
    p.eq_matrix = Mat::Ones(1, 1);
    p.eq_rhs = -Vec::Ones(1);  // x = -1 with x >= 0
    CHECK(lp_solve(p).status == LpStatus::Infeasible);
  }
  {
    LpProblem p;
    p.objective = Vec::Ones(2);
    p.eq_matrix = Mat(1, 2);
    p.eq_matrix << 1, -1;
    p.eq_rhs = Vec::Zero(1);
    CHECK(lp_solve(p).status == LpStatus::Unbounded);
  }
}

TEST_CASE("lp_solve matches vertex enumeration on random instances") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const int nvar = 5, neq = 3;
    LpProblem p;
    p.objective = Vec(nvar);
    for (int i = 0; i < nvar; ++i) p.objective(i) = unif(rng);
    p.eq_matrix = Mat(neq, nvar);
    for (int i = 0; i < neq * nvar; ++i) {
      p.eq_matrix(i / nvar, i % nvar) = unif(rng);
    }
    // Build rhs from a known nonnegative point so the problem is feasible.
    Vec x0(nvar);
    for (int i = 0; i < nvar; ++i) x0(i) = unif(rng) + 1.0;
    p.eq_rhs = p.eq_matrix * x0;

    // Enumerate basic solutions: all column triples.
    double best = -1e300;
    bool bounded_best = false;
    for (int a = 0; a < nvar; ++a) {
      for (int b = a + 1; b < nvar; ++b) {
        for (int c = b + 1; c < nvar; ++c) {
          Mat B(neq, 3);
          B.col(0) = p.eq_matrix.col(a);
          B.col(1) = p.eq_matrix.col(b);
          B.col(2) = p.eq_matrix.col(c);
          const Eigen::FullPivLU<Mat> lu(B);
          if (!lu.isInvertible()) continue;
          const Vec xb = lu.solve(p.eq_rhs);
          if ((B * xb - p.eq_rhs).lpNorm<Eigen::Infinity>() > 1e-8) continue;
          if (xb.minCoeff() < -1e-9) continue;
          const double obj = p.objective(a) * xb(0) + p.objective(b) * xb(1) +
                             p.objective(c) * xb(2);
          best = std::max(best, obj);
          bounded_best = true;
        }
      }
    }
    const LpResult r = lp_solve(p);
    if (r.status == LpStatus::Optimal && bounded_best) {
      CHECK(r.objective == doctest::Approx(best).epsilon(1e-7));
    }
  }
}

TEST_CASE("orthocomplement_basis") {
  {
    Vec a(2), b(2);
    a << 1, -1;
    b << 1, 1;
    CHECK(orthocomplement_basis({a, b}, 2).rows() == 0);
  }
  {
    Vec a(3), b(3);
    a << 1, -1, 0;
    b << 1, 1, 1;
    const Mat B = orthocomplement_basis({a, b}, 3);
    REQUIRE(B.rows() == 1);
    Vec expect(3);
    expect << 1, 1, -2;
    expect /= std::sqrt(6.0);
    const double dot = std::abs(B.row(0).dot(expect.transpose()));
    CHECK(dot == doctest::Approx(1.0).epsilon(1e-10));
  }
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int k = 1 + static_cast<int>(rng() % n);
    std::vector<Vec> vs;
    for (int i = 0; i < k; ++i) {
      Vec v(n);
      for (int j = 0; j < n; ++j) v(j) = gauss(rng);
      vs.push_back(v);
    }
    const Mat B = orthocomplement_basis(vs, n);
    if (B.rows() > 0) {
      CHECK((B * B.transpose() - Mat::Identity(B.rows(), B.rows()))
                .lpNorm<Eigen::Infinity>() <= 1e-12);
      for (const auto& v : vs) {
        CHECK((B * v).lpNorm<Eigen::Infinity>() <= 1e-10);
      }
    }
    Mat M(k, n);
    for (int i = 0; i < k; ++i) M.row(i) = vs[i].transpose();
    const int rank = static_cast<int>(
        Eigen::FullPivLU<Mat>(M).setThreshold(1e-8).rank());
    CHECK(static_cast<int>(B.rows()) == n - rank);
  }
}

TEST_CASE("fd_gradient") {
  {
    Vec x(2);
    x << 1, 2;
    const Vec g = fd_gradient(
        [](const Vec& v) { return v.squaredNorm(); }, x, 1e-6);
    CHECK(g(0) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(g(1) == doctest::Approx(4.0).epsilon(1e-6));
  }
  {
    const Vec g = fd_gradient([](const Vec&) { return 3.0; }, Vec::Ones(3),
                              1e-6);
    CHECK(g.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
  }
  {
    Vec x(3);
    x << 0.3, -0.1, 0.7;
    auto lse = [](const Vec& v) { return std::log(v.array().exp().sum()); };
    const Vec g = fd_gradient(lse, x, 1e-6);
    const Vec soft = x.array().exp() / x.array().exp().sum();
    CHECK((g - soft).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
}

TEST_CASE("nelder_mead minimizes a smooth bowl") {
  Vec x0 = Vec::Zero(3);
  const auto r = nelder_mead(
      [](const Vec& x) {
        Vec c(3);
        c << 1, -2, 0.5;
        return (x - c).squaredNorm();
      },
      x0, 0.5, 5000);
  CHECK(r.value <= 1e-12);
}
