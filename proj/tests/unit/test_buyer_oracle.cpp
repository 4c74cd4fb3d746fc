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
#include <sstream>

#include "postprice/buyer_oracle.hpp"
#include "postprice/discount.hpp"
#include "postprice/error.hpp"

using namespace postprice;
using doctest::Approx;

namespace {

PricingTree random_tree(int horizon, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> heap(node_count(horizon));
  for (double& p : heap) p = u(rng);
  return PricingTree::from_heap_prices(horizon, heap);
}

// Midpoint Riemann sum of R(v) f(v), with its own per-point best response.
double riemann_revenue(const PricingTree& tree, const ValuationDistribution& dist,
                       const DiscountSequence& gb, const DiscountSequence& gs, int n) {
  const double lo = dist.support_lo();
  const double h = (dist.support_hi() - lo) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = lo + (i + 0.5) * h;
    double best_s = -1e300;
    double best_r = 0.0;
    for (std::uint32_t bits = 0; bits < (1u << tree.horizon()); ++bits) {
      const auto out = evaluate(tree, BuyerStrategy(bits, tree.horizon()), v, gb, gs);
      if (out.surplus > best_s + 1e-12 ||
          (std::abs(out.surplus - best_s) <= 1e-12 && out.revenue > best_r)) {
        best_s = std::max(best_s, out.surplus);
        best_r = out.revenue;
      }
    }
    sum += best_r * dist.pdf(v) * h;
  }
  return sum;
}

}  // namespace

TEST_CASE("big deal tree at three rounds") {
  const auto d = make_geometric_discount(0.5, 3);  // 1, 0.5, 0.25
  // Root charges the whole horizon at 0.5; acceptance makes the rest free,
  // rejection is punished above any valuation in [0, 1].
  std::map<std::string, double> prices = {{"", 0.875}, {"1", 0.0}, {"11", 0.0},
                                          {"10", 0.0}, {"0", 7.0 / 3.0},
                                          {"00", 7.0 / 3.0}, {"01", 7.0 / 3.0}};
  const auto tree = PricingTree::from_map(3, prices);
  const auto br = best_response(tree, 0.6, d, d);
  CHECK(br.strategy.to_string() == "111");
  CHECK(br.revenue == Approx(0.875));
  CHECK(br.surplus == Approx(1.75 * 0.6 - 0.875));
  CHECK(br.quantity == Approx(1.75));

  // Below the root price the buyer walks away.
  const auto low = best_response(tree, 0.4, d, d);
  CHECK(low.revenue == 0.0);
  CHECK(low.surplus == Approx(0.0));
}

TEST_CASE("myopic answer under a constant tree") {
  const auto d = make_geometric_discount(0.7, 3);
  const auto flat = PricingTree::constant(3, 0.5);
  CHECK(best_response(flat, 0.8, d, d).strategy.to_string() == "111");
  CHECK(best_response(flat, 0.3, d, d).strategy.to_string() == "000");
}

TEST_CASE("ties resolve toward seller revenue") {
  const auto d = make_geometric_discount(0.5, 2);
  const auto flat = PricingTree::constant(2, 0.5);
  const auto br = best_response(flat, 0.5, d, d);
  CHECK(br.tie_count == 4);
  CHECK(br.strategy.to_string() == "11");
  CHECK(br.revenue == Approx(0.75));
  CHECK(best_response(flat, 0.8, d, d).tie_count == 1);
}

TEST_CASE("oracle dominates every strategy") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.2);
  for (int horizon = 1; horizon <= 5; ++horizon) {
    const auto gb = make_geometric_discount(0.6, horizon);
    const auto gs = make_geometric_discount(0.8, horizon);
    for (int trial = 0; trial < 10; ++trial) {
      const auto tree = random_tree(horizon, rng);
      const BuyerOracle oracle(tree, gb, gs);
      CHECK(oracle.lines().size() == (std::size_t{1} << horizon));
      for (int k = 0; k < 5; ++k) {
        const double v = u(rng);
        const auto br = oracle.best_response(v);
        const auto own = evaluate(tree, br.strategy, v, gb, gs);
        CHECK(own.surplus == Approx(br.surplus).epsilon(1e-12));
        CHECK(own.revenue == Approx(br.revenue).epsilon(1e-12));
        for (std::uint32_t bits = 0; bits < (1u << horizon); ++bits) {
          CHECK(evaluate(tree, BuyerStrategy(bits, horizon), v, gb, gs).surplus <=
                br.surplus + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("surplus is convex and quantity is non-decreasing in the valuation") {
  std::mt19937_64 rng(5);
  const auto gb = make_geometric_discount(0.7, 4);
  const auto gs = make_geometric_discount(0.9, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto tree = random_tree(4, rng);
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(i / 400.0 * 1.5);
    const auto curve = strategic_revenue_curve(tree, gb, gs, grid);
    REQUIRE(curve.size() == grid.size());
    for (std::size_t i = 1; i < curve.size(); ++i) {
      CHECK(curve[i].quantity >= curve[i - 1].quantity - 1e-12);
      CHECK(curve[i].surplus >= curve[i - 1].surplus - 1e-12);
      if (i + 1 < curve.size()) {
        CHECK(curve[i - 1].surplus + curve[i + 1].surplus >= 2 * curve[i].surplus - 1e-12);
      }
    }
    CHECK(curve.front().surplus >= 0.0);
  }
}

TEST_CASE("same discounts give a non-decreasing revenue curve") {
  std::mt19937_64 rng(9);
  const auto d = make_geometric_discount(0.7, 3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto tree = random_tree(3, rng);
    const BuyerOracle oracle(tree, d, d);
    double prev = 0.0;
    for (int i = 0; i <= 300; ++i) {
      const double r = oracle.best_response(i / 300.0).revenue;
      CHECK(r >= prev - 1e-12);
      prev = r;
    }
  }
}

TEST_CASE("switch points mark strategy changes") {
  std::mt19937_64 rng(21);
  const auto gb = make_geometric_discount(0.6, 3);
  const auto gs = make_geometric_discount(0.6, 3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto tree = random_tree(3, rng);
    const BuyerOracle oracle(tree, gb, gs);
    const auto points = oracle.switch_points();
    CHECK(std::is_sorted(points.begin(), points.end()));
    // Scan: every quantity change on a fine grid brackets a switch point.
    const int n = 20000;
    double prev_q = oracle.best_response(0.0).quantity;
    for (int i = 1; i <= n; ++i) {
      const double a = (i - 1) * 2.0 / n;
      const double b = i * 2.0 / n;
      const double q = oracle.best_response(b).quantity;
      if (std::abs(q - prev_q) > 1e-9) {
        const bool found = std::any_of(points.begin(), points.end(), [&](double x) {
          return x >= a - 1e-9 && x <= b + 1e-9;
        });
        CHECK(found);
      }
      prev_q = q;
    }
  }
}

TEST_CASE("expected revenue against a Riemann sum") {
  std::mt19937_64 rng(3);
  const auto gb = make_geometric_discount(0.5, 3);
  const auto gs = make_geometric_discount(0.8, 3);
  for (const auto& dist :
       {ValuationDistribution::uniform(0.0, 1.0), ValuationDistribution::beta(4.0, 2.0)}) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto tree = random_tree(3, rng);
      const double quad = expected_strategic_revenue(tree, dist, gb, gs);
      CHECK(quad == Approx(riemann_revenue(tree, dist, gb, gs, 20000)).epsilon(1e-4));
    }
  }
  // Constant tree, shared discounts: p (1 - F(p)) times the weight total.
  const auto flat = PricingTree::constant(3, 0.3);
  CHECK(expected_strategic_revenue(flat, ValuationDistribution::uniform(0.0, 1.0), gs, gs) ==
        Approx(0.3 * 0.7 * gs.total()).epsilon(1e-12));
  CHECK_THROWS_AS(expected_strategic_revenue(flat, ValuationDistribution::uniform(0.0, 1.0),
                                             gs, gs, 4),
                  InvalidParameter);
}

TEST_CASE("brute force search") {
  const auto gb = make_geometric_discount(0.2, 2);
  const auto gs = make_geometric_discount(0.8, 2);
  const auto dist = ValuationDistribution::uniform(0.0, 1.0);
  const auto best = brute_force_optimal_tree(dist, gb, gs, 2, 12);
  CHECK(best.revenue == Approx(expected_strategic_revenue(best.tree, dist, gb, gs)));
  // No grid tree beats the reported one.
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> cell(0, 11);
  for (int k = 0; k < 50; ++k) {
    const auto tree = PricingTree::from_heap_prices(
        2, {(cell(rng) + 0.5) / 12, (cell(rng) + 0.5) / 12, (cell(rng) + 0.5) / 12});
    CHECK(expected_strategic_revenue(tree, dist, gb, gs) <= best.revenue + 1e-15);
  }
  // Beats the best constant price on the same grid.
  CHECK(best.revenue >= 0.25 * gs.total() - 0.01);
  CHECK_THROWS_AS(brute_force_optimal_tree(dist, gb, gs, 3, 12), InvalidParameter);
  CHECK_THROWS_AS(brute_force_optimal_tree(dist, gb, gs, 2, 0), InvalidParameter);
  CHECK_THROWS_AS(brute_force_optimal_tree(dist, gb, gs, 2, 61), InvalidParameter);
}

TEST_CASE("input guards") {
  const auto d = make_geometric_discount(0.5, 2);
  const auto flat = PricingTree::constant(2, 0.5);
  CHECK_THROWS_AS(best_response(flat, -0.1, d, d), InvalidParameter);
  CHECK_THROWS_AS(best_response(flat, 0.5, make_geometric_discount(0.5, 1), d),
                  InvalidParameter);
  const std::vector<double> unsorted = {0.5, 0.2};
  CHECK_THROWS_AS(strategic_revenue_curve(flat, d, d, unsorted), InvalidParameter);

  const auto big = PricingTree::constant(21, 0.5);
  const auto long_d = make_geometric_discount(0.5, 21);
  CHECK_THROWS_AS(BuyerOracle(big, long_d, long_d), ResourceLimit);
}

TEST_CASE("curve csv") {
  const auto d = make_geometric_discount(0.5, 2);
  const std::vector<double> grid = {0.25, 0.75};
  const auto curve = strategic_revenue_curve(PricingTree::constant(2, 0.5), d, d, grid);
  std::ostringstream out;
  write_curve_csv(out, curve);
  CHECK(out.str() == "v,strategy,S,R,Q\n0.25,00,0,0,0\n0.75,11,0.375,0.75,1.5\n");
}
