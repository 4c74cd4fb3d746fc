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

#include "postprice/buyer_oracle.hpp"
#include "postprice/discount.hpp"
#include "postprice/error.hpp"
#include "postprice/schemes.hpp"

using namespace postprice;
using doctest::Approx;

TEST_CASE("truncation folds the tail into the last round") {
  const auto inf = DiscountSequence::geometric(0.8);
  auto g = truncate(inf, inf, 3);
  CHECK(g.rounds == 3);
  CHECK(g.buyer.weight(1) == Approx(1.0));
  CHECK(g.buyer.weight(2) == Approx(0.8));
  CHECK(g.buyer.weight(3) == Approx(3.2));
  CHECK(g.buyer.total() == Approx(5.0));
  CHECK(g.seller_tail == Approx(0.512 / 0.2));
  CHECK(g.tail_bound(ValuationDistribution::uniform(0.0, 1.0)) == Approx(0.5 * 2.56));

  g = truncate(inf, inf, 1);
  CHECK(g.buyer.weights().size() == 1);
  CHECK(g.buyer.weight(1) == Approx(5.0));

  const auto fin = DiscountSequence::finite({1.0, 0.5, 0.25});
  g = truncate(fin, fin, 3);
  CHECK(g.seller_tail == 0.0);
  CHECK_THROWS_AS(truncate(fin, fin, 4), InvalidParameter);
  CHECK_THROWS_AS(truncate(inf, inf, 0), InvalidParameter);
}

TEST_CASE("constant Myerson pricing") {
  const auto u = ValuationDistribution::uniform(0.0, 1.0);
  auto r = constant_myerson(u, DiscountSequence::geometric(0.5));
  CHECK(r.revenue == Approx(0.5));
  CHECK(r.tree.horizon() == 1);
  CHECK(r.tree.price("") == Approx(0.5));

  r = constant_myerson(u, make_geometric_discount(0.8, 3));
  CHECK(r.revenue == Approx(0.61));
  CHECK(r.tree.horizon() == 3);
  const auto d = make_geometric_discount(0.8, 3);
  CHECK(expected_strategic_revenue(r.tree, u, d, d) == Approx(0.61).epsilon(1e-9));
}

TEST_CASE("big deal") {
  const auto u = ValuationDistribution::uniform(0.0, 1.0);
  const auto d = make_geometric_discount(0.5, 3);
  auto r = big_deal(u, d, d);
  CHECK(r.tree.price("") == Approx(0.875));
  CHECK(r.tree.price("1") == 0.0);
  CHECK(r.tree.price("11") == 0.0);
  CHECK(r.tree.price("0") == Approx(7.0 / 3.0));
  CHECK(r.tree.price("01") == Approx(7.0 / 3.0));
  CHECK(r.revenue == Approx(0.4375));
  CHECK(r.warnings.empty());
  CHECK(expected_strategic_revenue(r.tree, u, d, d) == Approx(r.revenue).epsilon(1e-9));

  // A more patient seller than buyer: formula still reported, with a warning.
  const auto patient = make_geometric_discount(0.8, 3);
  r = big_deal(u, d, patient);
  CHECK_FALSE(r.warnings.empty());
  CHECK(r.revenue == Approx(0.4375));

  // Impatient seller: the buyer's acceptance happens up front.
  const auto impatient = make_geometric_discount(0.2, 3);
  r = big_deal(u, d, impatient);
  CHECK(r.warnings.empty());
  CHECK(expected_strategic_revenue(r.tree, u, d, impatient) ==
        Approx(r.revenue).epsilon(1e-9));

  // Infinite discounts need a depth; one round is not a deal.
  const auto inf = DiscountSequence::geometric(0.5);
  CHECK_THROWS_AS(big_deal(u, inf, inf), InvalidParameter);
  CHECK(big_deal(u, inf, inf, 4).revenue == Approx(0.5));
  CHECK_THROWS_AS(big_deal(u, make_geometric_discount(0.5, 1), make_geometric_discount(0.5, 1)),
                  InvalidParameter);
}

TEST_CASE("one-step freezing is the Myerson price over the whole game") {
  const auto u = ValuationDistribution::uniform(0.0, 1.0);
  const auto gb = DiscountSequence::geometric(0.3);
  const auto gs = DiscountSequence::geometric(0.8);
  const auto r = tau_step_optimal(u, gb, gs, 1);
  CHECK(r.value == Approx(0.25 * gs.total()).epsilon(1e-10));
  CHECK(r.tree.price("") == Approx(0.5).epsilon(1e-6));
  CHECK(r.lower_bound == r.value);
  CHECK(r.upper_bound == Approx(r.value + 0.5 * 4.0));
}

TEST_CASE("shared discounts make freezing depth irrelevant") {
  const auto u = ValuationDistribution::uniform(0.0, 1.0);
  const auto d = DiscountSequence::geometric(0.6);
  for (const auto& r : tau_step_sequence(u, d, d, {1, 2, 3})) {
    CHECK(r.value == Approx(0.25 * d.total()).epsilon(1e-10));
  }
}

TEST_CASE("deeper freezing never loses revenue") {
  const auto u = ValuationDistribution::uniform(0.0, 1.0);
  const auto gb = DiscountSequence::geometric(0.2);
  const auto gs = DiscountSequence::geometric(0.8);
  const auto seq = tau_step_sequence(u, gb, gs, {1, 2, 3, 4});
  REQUIRE(seq.size() == 4);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].tree.horizon() == static_cast<int>(i) + 1);
    CHECK(seq[i].lower_bound <= seq[i].upper_bound);
    CHECK(seq[i].solve.converged);
    if (i > 0) {
      CHECK(seq[i].value >= seq[i - 1].value - 1e-10);
      CHECK(seq[i].upper_bound <= seq[i - 1].upper_bound + 1e-10);
    }
  }
  CHECK(seq[1].value == Approx(1.533804).epsilon(1e-6));
  // Warm starts do not change the answer.
  CHECK(tau_step_optimal(u, gb, gs, 3).value == Approx(seq[2].value).epsilon(1e-10));

  CHECK_THROWS_AS(tau_step_sequence(u, gb, gs, {3, 2}), InvalidParameter);
  CHECK_THROWS_AS(tau_step_optimal(u, gb, gs, 7), ResourceLimit);
}

TEST_CASE("freeze_extend copies parents") {
  const auto t = PricingTree::from_map(2, {{"", 0.6}, {"0", 0.3}, {"1", 0.9}});
  const auto e = freeze_extend(t, 2);
  CHECK(e.horizon() == 4);
  CHECK(e.price("") == 0.6);
  CHECK(e.price("0") == 0.3);
  CHECK(e.price("01") == 0.3);
  CHECK(e.price("011") == 0.3);
  CHECK(e.price("10") == 0.9);
  CHECK(e.price("111") == 0.9);
  CHECK(freeze_extend(t, 0) == t);
  CHECK_THROWS_AS(freeze_extend(t, -1), InvalidParameter);

  // Freezing keeps the revenue when the discount tail is folded in.
  const auto u = ValuationDistribution::uniform(0.0, 1.0);
  const auto gb = make_geometric_discount(0.4, 4);
  const auto gs = make_geometric_discount(0.7, 4);
  const auto folded = truncate(gb, gs, 2);
  CHECK(expected_strategic_revenue(e, u, gb, gs) ==
        Approx(expected_strategic_revenue(t, u, folded.buyer, folded.seller)).epsilon(1e-9));
}
