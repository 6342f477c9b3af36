#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "support/test_support.hpp"
#include "tvtomo/objective.hpp"
#include "tvtomo/rng.hpp"
#include "tvtomo/sparse_matrix.hpp"

using namespace tvtomo;

TEST_CASE("project_box clamps componentwise") {
  const DenseVector x{-0.5, 0.0, 0.3, 1.0, 1.7};
  const DenseVector p = project_box(x);
  CHECK(p == DenseVector{0.0, 0.0, 0.3, 1.0, 1.0});
  CHECK(project_box(p) == p);  // idempotent
  DenseVector y = x;
  project_box_inplace(y);
  CHECK(y == p);
}

TEST_CASE("gradient_map hand values") {
  // Interior step: the map reduces to the gradient.
  const DenseVector g1 = gradient_map({0.5}, {0.2}, 10.0);
  CHECK(g1[0] == doctest::Approx(0.2).epsilon(1e-12));
  // Gradient pushing out of the box at an active bound: zero map.
  CHECK(gradient_map({0.0}, {1.0}, 1.0)[0] == 0.0);
  CHECK(gradient_map({1.0}, {-2.0}, 4.0)[0] == 0.0);
  // Step clipped by the far face: G = nu * (x - P(...)).
  CHECK(gradient_map({0.0}, {-3.0}, 2.0)[0] == -2.0);

  CHECK_THROWS_AS((void)gradient_map({0.5}, {0.1}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)gradient_map({0.5}, {0.1, 0.2}, 1.0), std::invalid_argument);
}

TEST_CASE("gradient_map objective overload matches the explicit form") {
  const auto q = testsup::make_rotated_quadratic(0.5, 4.0, 6, 101);
  Rng rng(7);
  for (int t = 0; t < 5; ++t) {
    const auto x = testsup::random_vector(6, rng, 0.0, 1.0);
    DenseVector grad;
    q.value_grad(x, grad);
    const double nu = 0.3 + 5.0 * rng.uniform();
    CHECK(gradient_map(q, x, nu) == gradient_map(x, grad, nu));
  }
}

TEST_CASE("gradient_map vanishes at a constrained minimizer") {
  const auto cq = testsup::make_clamped_diagonal_quadratic(0.2, 9.0, 8, 55);
  for (double nu : {0.5, 3.0, 100.0}) {
    const DenseVector g = gradient_map(cq.objective, cq.x_star, nu);
    CHECK(norm2(g) == 0.0);
  }
}

TEST_CASE("gradient_map norm is nondecreasing in nu") {
  const auto q = testsup::make_rotated_quadratic(0.1, 6.0, 5, 202);
  Rng rng(11);
  for (int t = 0; t < 5; ++t) {
    const auto x = testsup::random_vector(5, rng, 0.0, 1.0);
    double prev = 0.0;
    for (double nu : {0.01, 0.1, 1.0, 10.0, 1e3, 1e6}) {
      // The map computes nu*(x - (x - g/nu)); the inner cancellation leaves
      // roughly nu*ulp(x) of absolute noise, so the slack scales with nu.
      const double cur = norm2(gradient_map(q, x, nu));
      CHECK(cur >= prev - 1e-15 * nu);
      prev = cur;
    }
  }
}

TEST_CASE("local_mu recovers the curvature of an isotropic quadratic") {
  const std::size_t n = 4;
  const double mu = 0.75;
  testsup::DenseMatrix h(n, DenseVector(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) h[i][i] = mu;
  const testsup::QuadraticObjective q(h, DenseVector(n, 0.4), 2.0);
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    const auto x = testsup::random_vector(n, rng);
    const auto y = testsup::random_vector(n, rng);
    DenseVector gy;
    const double fy = q.value_grad(y, gy);
    CHECK(local_mu(q.value(x), fy, gy, x, y) == doctest::Approx(mu).epsilon(1e-9));
  }
}

TEST_CASE("local_mu is +inf at coincident points and sandwiched by [mu, L]") {
  const double mu = 0.5, L = 8.0;
  const auto q = testsup::make_rotated_quadratic(mu, L, 7, 303);
  Rng rng(17);
  const auto x0 = testsup::random_vector(7, rng);
  DenseVector g0;
  const double f0 = q.value_grad(x0, g0);
  CHECK(std::isinf(local_mu(f0, f0, g0, x0, x0)));

  for (int t = 0; t < 20; ++t) {
    const auto x = testsup::random_vector(7, rng);
    const auto y = testsup::random_vector(7, rng);
    DenseVector gy;
    const double fy = q.value_grad(y, gy);
    const double m = local_mu(q.value(x), fy, gy, x, y);
    CHECK(m >= mu * (1.0 - 1e-9));
    CHECK(m <= L * (1.0 + 1e-9));
  }
}

TEST_CASE("theory_params composes the smooth and TV terms") {
  const TheoryParams tp = theory_params(2.0, 0.5, 3.0, 0.1);
  CHECK(tp.mu == 0.5);
  CHECK(tp.L == doctest::Approx(362.0).epsilon(1e-15));
  REQUIRE(tp.q.has_value());
  CHECK(*tp.q == doctest::Approx(724.0).epsilon(1e-15));

  const TheoryParams tp0 = theory_params(2.0, 0.0, 3.0, 0.1);
  CHECK_FALSE(tp0.q.has_value());

  // Representative tomography magnitudes.
  const TheoryParams tr = theory_params(1.52e3, 2.19e-5, 1.0, 1e-4);
  CHECK(tr.L == doctest::Approx(1.2152e5).epsilon(1e-12));
  CHECK(tr.L == doctest::Approx(1.22e5).epsilon(1e-2));

  CHECK_THROWS_AS((void)theory_params(-1.0, 0.0, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS((void)theory_params(1.0, 0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)theory_params(1.0, 0.0, -1.0, 0.1), std::invalid_argument);
}

namespace {

SparseMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double density = 0.6) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (rng.uniform() < density) t.push_back({i, j, rng.uniform_pm1()});
  return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

}  // namespace

TEST_CASE("TvRegProblem validates its inputs") {
  Rng rng(19);
  SparseMatrix a = random_matrix(6, 8, rng);
  const DenseVector b = testsup::random_vector(6, rng);
  CHECK_NOTHROW(TvRegProblem(a, b, 0.5, 0.1, 2, 2, 2));
  CHECK_THROWS_AS(TvRegProblem(a, b, 0.5, 0.1, 2, 2, 3), std::invalid_argument);   // cols mismatch
  CHECK_THROWS_AS(TvRegProblem(a, testsup::random_vector(5, rng), 0.5, 0.1, 2, 2, 2),
                  std::invalid_argument);                                           // b length
  CHECK_THROWS_AS(TvRegProblem(a, b, -0.5, 0.1, 2, 2, 2), std::invalid_argument);  // alpha
  CHECK_THROWS_AS(TvRegProblem(a, b, 0.5, 0.0, 2, 2, 2), std::invalid_argument);   // tau
}

TEST_CASE("phi gradient matches finite differences") {
  Rng rng(23);
  SparseMatrix a = random_matrix(6, 8, rng);
  TvRegProblem p(a, testsup::random_vector(6, rng), 0.7, 0.3, 2, 2, 2);
  const TvRegObjective obj(p);
  const auto x = testsup::random_vector(8, rng, 0.0, 1.0);
  DenseVector grad;
  const double val = obj.value_grad(x, grad);
  CHECK(val == obj.value(x));
  const auto fd = testsup::fd_gradient(obj, x, 1e-6);
  CHECK(max_abs_diff(grad, fd) < 1e-5);
}

TEST_CASE("phi pieces are consistent and bit-stable") {
  Rng rng(29);
  SparseMatrix a = random_matrix(7, 8, rng);
  const DenseVector b = testsup::random_vector(7, rng);
  const auto x = testsup::random_vector(8, rng, 0.0, 1.0);

  TvRegProblem p(a, b, 0.4, 0.05, 2, 2, 2);
  const ObjEval ev = phi_value_grad(p, x);
  CHECK(ev.value == phi_value(p, x));  // identical accumulation order

  DenseVector r = spmv(a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  CHECK(ev.residual_norm_sq == norm2_sq(r));

  // alpha = 0 reduces to half the residual norm squared, gradient A^T r.
  TvRegProblem ls(a, b, 0.0, 0.05, 2, 2, 2);
  const ObjEval e0 = phi_value_grad(ls, x);
  CHECK(e0.value == 0.5 * norm2_sq(r));
  CHECK(max_abs_diff(e0.gradient, spmv_t(a, r)) == 0.0);

  // Same eval twice is bitwise identical.
  const ObjEval ev2 = phi_value_grad(p, x);
  CHECK(ev.value == ev2.value);
  CHECK(ev.gradient == ev2.gradient);
}

TEST_CASE("TvRegObjective adapter") {
  Rng rng(31);
  SparseMatrix a = random_matrix(5, 8, rng);
  TvRegProblem p(a, testsup::random_vector(5, rng), 1.0, 0.2, 2, 2, 2);
  const TvRegObjective obj(p);
  CHECK(obj.dim() == 8);
  const auto x = testsup::random_vector(8, rng, 0.0, 1.0);
  CHECK(obj.value(x) == phi_value(p, x));
  DenseVector g;
  CHECK(obj.value_grad(x, g) == phi_value_grad(p, x).value);
  CHECK(g == phi_value_grad(p, x).gradient);
}
