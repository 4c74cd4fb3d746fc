// Copyright 2026 The postprice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "postprice/buyer_oracle.hpp"
#include "postprice/discount.hpp"
#include "postprice/error.hpp"
#include "postprice/optimizer.hpp"

using namespace postprice;
using doctest::Approx;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

double max_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("projection examples") {
  CHECK(max_abs(project_to_delta(vec({3, 1, 2})) - vec({2, 2, 2})) <= 1e-15);
  CHECK(max_abs(project_to_delta(vec({-1, -2, -3}))) == 0.0);
  CHECK(max_abs(project_to_delta(vec({0.1, 0.5, 0.9})) - vec({0.1, 0.5, 0.9})) == 0.0);
  CHECK(max_abs(project_to_delta(vec({-1, 0.5, 0.2})) - vec({0, 0.35, 0.35})) <= 1e-15);
  CHECK(project_to_delta(Eigen::VectorXd(0)).size() == 0);
}

TEST_CASE("projection is idempotent and closest") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 9;
    Eigen::VectorXd x(k);
    for (int i = 0; i < k; ++i) x(i) = n(rng);
    const Eigen::VectorXd p = project_to_delta(x);
    CHECK(is_ordered_nonnegative(p));
    CHECK(max_abs(project_to_delta(p) - p) <= 1e-15);
    for (int s = 0; s < 50; ++s) {
      Eigen::VectorXd y(k);
      for (int i = 0; i < k; ++i) y(i) = u(rng);
      std::sort(y.data(), y.data() + k);
      CHECK((x - p).norm() <= (x - y).norm() + 1e-12);
      // Obtuse-angle characterization of the projection.
      CHECK((x - p).dot(y - p) <= 1e-12);
    }
  }
}

TEST_CASE("discount rates") {
  CHECK(discount_rates(make_geometric_discount(0.5, 3)) == std::vector<double>{0.5, 0.5});
  CHECK(discount_rates(DiscountSequence::finite({1.0, 0.5, 0.0})) ==
        std::vector<double>{0.5, 0.0});
  CHECK(discount_rates(DiscountSequence::finite({1.0, 0.0, 0.0})) ==
        std::vector<double>{0.0, 0.0});
  CHECK(discount_rates(DiscountSequence::geometric(0.3), 3).size() == 2);
  CHECK_THROWS_AS(discount_rates(DiscountSequence::geometric(0.3)), InvalidParameter);

  const auto lo = make_geometric_discount(0.2, 3);
  const auto hi = make_geometric_discount(0.8, 3);
  CHECK(rates_dominated(lo, hi, 3));
  CHECK(rates_dominated(hi, hi, 3));
  CHECK_FALSE(rates_dominated(hi, lo, 3));
}

TEST_CASE("two-round optimum matches the exact quadratic program") {
  const auto sys = ReductionSystem::build(make_geometric_discount(0.2, 2),
                                          make_geometric_discount(0.8, 2), 2);
  const auto dist = ValuationDistribution::uniform(0.0, 1.0);
  OptimizerOptions opts;
  opts.keep_trace = true;
  const auto res = maximize_revenue_functional(sys, dist, opts);
  CHECK(res.converged);
  CHECK(res.kkt_residual <= 1e-9);
  CHECK(res.warnings.empty());
  CHECK(res.starts == 16);
  const auto qp = maximize_uniform_form(sys.revenue_form());
  CHECK(res.value == Approx(qp.value).epsilon(1e-12));
  CHECK(max_abs(res.v_star - qp.v) <= 1e-6);
  CHECK(res.value == Approx(0.484034).epsilon(1e-6));
  // Accepted steps never lower the objective.
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    CHECK(res.trace[i] >= res.trace[i - 1] - 1e-12);
  }
  // The returned tree earns the reported value against the strategic buyer.
  CHECK(expected_strategic_revenue(res.tree, dist, sys.buyer(), sys.seller()) ==
        Approx(res.value).epsilon(1e-9));
}

TEST_CASE("three-round optimum matches the exact quadratic program") {
  for (double buyer : {0.2, 0.5}) {
    const auto sys = ReductionSystem::build(make_geometric_discount(buyer, 3),
                                            make_geometric_discount(0.8, 3), 3);
    const auto res = maximize_revenue_functional(sys, ValuationDistribution::uniform(0.0, 1.0));
    const auto qp = maximize_uniform_form(sys.revenue_form());
    CHECK(res.converged);
    CHECK(res.value == Approx(qp.value).epsilon(1e-10));
    CHECK(max_abs(res.v_star - qp.v) <= 1e-5);
  }
}

TEST_CASE("shared discounts collapse to the constant Myerson price") {
  for (int horizon : {2, 3}) {
    const auto d = make_geometric_discount(0.6, horizon);
    const auto res = maximize_revenue_functional(ValuationDistribution::uniform(0.0, 1.0), d,
                                                 d, horizon);
    CHECK(res.value == Approx(0.25 * d.total()).epsilon(1e-12));
    CHECK(max_abs(res.v_star.array() - 0.5) <= 1e-6);
    for (const auto& n : consistent_node_order(horizon)) {
      CHECK(res.tree.price(n) == Approx(0.5).epsilon(1e-6));
    }
  }
}

TEST_CASE("optimum beats the constant Myerson baseline") {
  for (const auto& dist : {ValuationDistribution::uniform(0.0, 1.0),
                           ValuationDistribution::beta(4.0, 2.0),
                           ValuationDistribution::truncated_exponential(1.0, 1.0)}) {
    const auto gb = make_geometric_discount(0.3, 3);
    const auto gs = make_geometric_discount(0.8, 3);
    const auto res = maximize_revenue_functional(dist, gb, gs, 3);
    const double baseline = myerson_price(dist).revenue * gs.total();
    CHECK(res.value >= baseline - 1e-12);
    CHECK(res.value > baseline);
  }
}

TEST_CASE("rate warning and determinism") {
  const auto dist = ValuationDistribution::uniform(0.0, 1.0);
  const auto fast = make_geometric_discount(0.8, 2);
  const auto slow = make_geometric_discount(0.2, 2);
  const auto warned = maximize_revenue_functional(dist, fast, slow, 2);
  CHECK_FALSE(warned.warnings.empty());

  OptimizerOptions opts;
  opts.seed = 99;
  const auto a = maximize_revenue_functional(dist, slow, fast, 2, opts);
  const auto b = maximize_revenue_functional(dist, slow, fast, 2, opts);
  CHECK(a.v_star == b.v_star);
  CHECK(a.value == b.value);
}

TEST_CASE("option guards") {
  const auto sys = ReductionSystem::build(make_geometric_discount(0.2, 2),
                                          make_geometric_discount(0.8, 2), 2);
  const auto dist = ValuationDistribution::uniform(0.0, 1.0);
  OptimizerOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(maximize_revenue_functional(sys, dist, bad), InvalidParameter);
  OptimizerOptions wrong_start;
  wrong_start.extra_starts.push_back(vec({0.5, 0.5}));
  CHECK_THROWS_AS(maximize_revenue_functional(sys, dist, wrong_start), InvalidParameter);
  OptimizerOptions capped;
  capped.max_iter = 0;
  capped.starts = 1;
  const auto res = maximize_revenue_functional(sys, dist, capped);
  CHECK_FALSE(res.converged);
  CHECK_FALSE(res.warnings.empty());
}

TEST_CASE("exact quadratic program") {
  // Scalar: (1 - v) m v peaks at 1/2.
  Eigen::MatrixXd one(1, 1);
  one << 2.0;
  const auto q = maximize_uniform_form(one);
  CHECK(q.v(0) == Approx(0.5));
  CHECK(q.value == Approx(0.5));
  // Diagonal forms split into independent scalars.
  const Eigen::MatrixXd diag = vec({1, 2, 3}).asDiagonal();
  const auto qd = maximize_uniform_form(diag);
  CHECK(max_abs(qd.v.array() - 0.5) <= 1e-12);
  CHECK(qd.value == Approx(1.5));
  CHECK_THROWS_AS(maximize_uniform_form(Eigen::MatrixXd::Identity(11, 11)), InvalidParameter);
  CHECK_THROWS_AS(maximize_uniform_form(Eigen::MatrixXd::Zero(2, 3)), InvalidParameter);

  // Against a dense grid over the chain for a random 2x2 form.
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd m(2, 2);
    m << u(rng), u(rng), u(rng), u(rng);
    const auto exact = maximize_uniform_form(m);
    double grid_best = -1e300;
    for (int i = 0; i <= 400; ++i) {
      for (int j = i; j <= 400; ++j) {
        const Eigen::Vector2d v(i / 400.0, j / 400.0);
        grid_best = std::max(grid_best, (Eigen::Vector2d::Ones() - v).dot(m * v));
      }
    }
    CHECK(exact.value >= grid_best - 1e-12);
    CHECK(exact.value <= grid_best + 1e-4);
  }
}
