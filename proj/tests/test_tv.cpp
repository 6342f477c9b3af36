#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <utility>

#include "support/test_support.hpp"
#include "tvtomo/diff_operator.hpp"
#include "tvtomo/linear_operator.hpp"
#include "tvtomo/objective.hpp"
#include "tvtomo/rng.hpp"
#include "tvtomo/tv.hpp"

using namespace tvtomo;

TEST_CASE("huber piecewise values") {
  CHECK(huber({3.0, 4.0, 0.0}, 1.0) == doctest::Approx(4.5).epsilon(1e-15));   // ||z|| = 5 >= tau
  CHECK(huber({1.0, 0.0, 0.0}, 2.0) == doctest::Approx(0.25).epsilon(1e-15));  // quadratic branch
  CHECK(huber({0.0, 0.0, 0.0}, 0.5) == 0.0);
  // Continuity at ||z|| = tau: both branches give tau/2.
  const double tau = 0.3;
  CHECK(huber({tau, 0.0, 0.0}, tau) == doctest::Approx(tau / 2.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)huber({1.0, 0.0, 0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)huber({1.0, 0.0, 0.0}, -1.0), std::invalid_argument);
}

TEST_CASE("apply_D hand case on a 2x1x1 grid") {
  const DiffOperator d(2, 1, 1);
  const double a = 0.3, b = 0.9;
  const DenseVector u = apply_D(d, {a, b});
  CHECK(u == DenseVector{b - a, 0.0, 0.0, a - b, 0.0, 0.0});
  const DenseVector x = apply_D_t(d, u);
  // D^T D [a, b] = [2(a-b), 2(b-a)]
  CHECK(x[0] == doctest::Approx(2.0 * (a - b)).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(2.0 * (b - a)).epsilon(1e-15));
}

TEST_CASE("diff operator matches its dense definition") {
  const std::size_t m = 3, n = 4, l = 5;
  const DiffOperator d(m, n, l);
  const auto dense = testsup::dense_diff_matrix(m, n, l);
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto x = testsup::random_vector(d.vol_size(), rng);
    const auto u = testsup::random_vector(d.out_size(), rng);
    const auto dx = d.apply(x);
    const auto dx_ref = testsup::dense_apply(dense, x);
    CHECK(max_abs_diff(dx, dx_ref) < 1e-14);
    const auto dtu = d.apply_adjoint(u);
    const auto dtu_ref = testsup::dense_apply_t(dense, u);
    CHECK(max_abs_diff(dtu, dtu_ref) < 1e-13);
    // adjoint identity
    CHECK(dot(dx, u) == doctest::Approx(dot(x, dtu)).epsilon(1e-12));
  }
}

TEST_CASE("constant volumes have zero TV and zero gradient") {
  const DiffOperator d(4, 3, 2);
  const DenseVector x(d.vol_size(), 0.7);
  CHECK(tv_value(d, x, 1e-3) == 0.0);
  const TvEval ev = tv_value_grad(d, x, 1e-3);
  CHECK(ev.value == 0.0);
  for (double g : ev.gradient) CHECK(g == 0.0);
}

TEST_CASE("||D||^2 <= 12, attained on even grids") {
  for (auto dims : std::vector<std::array<std::size_t, 3>>{{2, 2, 2}, {4, 4, 4}, {3, 5, 2}}) {
    const DiffOperator d(dims[0], dims[1], dims[2]);
    const DiffOperatorView view(d);
    const double est = power_iter_norm_sq(view, 300, 5);
    CHECK(est <= 12.0 * (1.0 + 1e-12));
    if (dims[0] % 2 == 0 && dims[1] % 2 == 0 && dims[2] % 2 == 0)
      CHECK(est == doctest::Approx(12.0).epsilon(1e-9));
  }
}

TEST_CASE("tv gradient matches finite differences") {
  const DiffOperator d(3, 3, 3);
  Rng rng(23);

  // tau large: everything in the quadratic branch; tau small: generic points
  // sit in the linear branch. Both regions are smooth.
  for (double tau : {10.0, 1e-3}) {
    const auto x = testsup::random_vector(d.vol_size(), rng, 0.0, 1.0);
    const TvEval ev = tv_value_grad(d, x, tau);

    class TvObjective final : public Objective {
     public:
      TvObjective(const DiffOperator& dd, double t) : d_(&dd), tau_(t) {}
      std::size_t dim() const override { return d_->vol_size(); }
      double value(const DenseVector& xx) const override { return tv_value(*d_, xx, tau_); }
      double value_grad(const DenseVector& xx, DenseVector& g) const override {
        TvEval e = tv_value_grad(*d_, xx, tau_);
        g = std::move(e.gradient);
        return e.value;
      }

     private:
      const DiffOperator* d_;
      double tau_;
    } obj(d, tau);

    const auto fd = testsup::fd_gradient(obj, x, 1e-6);
    double scale = 1e-12;
    for (double g : ev.gradient) scale = std::max(scale, std::abs(g));
    CHECK(max_abs_diff(ev.gradient, fd) < 1e-5 * std::max(scale, 1.0));
  }
}

TEST_CASE("tv value equals the huber sum over difference blocks") {
  const DiffOperator d(4, 2, 3);
  Rng rng(29);
  const auto x = testsup::random_vector(d.vol_size(), rng);
  const double tau = 0.2;
  const auto u = apply_D(d, x);
  double expect = 0.0;
  for (std::size_t j = 0; j < u.size(); j += 3) expect += huber({u[j], u[j + 1], u[j + 2]}, tau);
  CHECK(tv_value(d, x, tau) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(tv_value_grad(d, x, tau).value == tv_value(d, x, tau));
}

TEST_CASE("tv gradient is (12/tau)-Lipschitz") {
  const DiffOperator d(3, 4, 2);
  Rng rng(41);
  const double tau = 0.05;
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = testsup::random_vector(d.vol_size(), rng, 0.0, 1.0);
    const auto y = testsup::random_vector(d.vol_size(), rng, 0.0, 1.0);
    const auto gx = tv_value_grad(d, x, tau).gradient;
    const auto gy = tv_value_grad(d, y, tau).gradient;
    CHECK(norm2(sub(gx, gy)) <= (12.0 / tau) * norm2(sub(x, y)) * (1.0 + 1e-10));
  }
}

TEST_CASE("tv convexity along segments") {
  const DiffOperator d(3, 3, 2);
  Rng rng(43);
  const double tau = 0.1;
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = testsup::random_vector(d.vol_size(), rng);
    const auto y = testsup::random_vector(d.vol_size(), rng);
    const double t = rng.uniform();
    DenseVector mid(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mid[i] = (1 - t) * x[i] + t * y[i];
    CHECK(tv_value(d, mid, tau) <=
          (1 - t) * tv_value(d, x, tau) + t * tv_value(d, y, tau) + 1e-12);
  }
}

TEST_CASE("volume overload validates the grid") {
  const DiffOperator d(2, 2, 2);
  Volume v(2, 2, 2, 0.5);
  CHECK(tv_value_grad(d, v, 0.1).value == 0.0);
  Volume wrong(2, 2, 3, 0.5);
  CHECK_THROWS_AS((void)tv_value_grad(d, wrong, 0.1), std::invalid_argument);
}
