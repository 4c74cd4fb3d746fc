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

#include "postprice/schemes.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "postprice/error.hpp"
#include "postprice/reduction.hpp"

namespace postprice {

namespace {

DiscountSequence truncate_one(const DiscountSequence& d, int rounds,
                              const char* role) {
  if (d.is_finite() && *d.horizon() < rounds) {
    throw InvalidParameter(fmt::format(
        "{} discount has {} rounds, cannot truncate at {}", role, *d.horizon(),
        rounds));
  }
  std::vector<double> w(static_cast<std::size_t>(rounds));
  for (int t = 1; t < rounds; ++t) w[static_cast<std::size_t>(t - 1)] = d.weight(t);
  w.back() = d.tail_sum(rounds);
  return DiscountSequence::finite(std::move(w));
}

int tree_depth(const DiscountSequence& d, int depth, int fallback) {
  if (d.is_finite()) return *d.horizon();
  return depth > 0 ? depth : fallback;
}

}  // namespace

TruncatedGame truncate(const DiscountSequence& buyer,
                       const DiscountSequence& seller, int rounds) {
  if (rounds < 1) {
    throw InvalidParameter(fmt::format("truncation needs tau >= 1, got {}", rounds));
  }
  return TruncatedGame{rounds, truncate_one(buyer, rounds, "buyer"),
                       truncate_one(seller, rounds, "seller"),
                       seller.tail_sum(rounds + 1)};
}

SchemeResult constant_myerson(const ValuationDistribution& dist,
                              const DiscountSequence& seller, int depth) {
  const auto m = myerson_price(dist);
  return SchemeResult{PricingTree::constant(tree_depth(seller, depth, 1), m.price),
                      seller.total() * m.revenue,
                      {}};
}

SchemeResult big_deal(const ValuationDistribution& dist,
                      const DiscountSequence& buyer,
                      const DiscountSequence& seller, int depth) {
  if (!buyer.is_finite() && depth <= 0) {
    throw InvalidParameter("big deal over an infinite discount needs a tree depth");
  }
  const int rounds = tree_depth(buyer, depth, 2);
  if (rounds < 2) {
    throw InvalidParameter("big deal needs a game with at least two rounds");
  }
  const double first = buyer.weight(1);
  const double total = buyer.total();
  const auto m = myerson_price(dist);
  const double opening = total * m.price;
  const double penalty = 2.0 * first * opening / (total - first);

  std::vector<double> heap(node_count(rounds));
  for (std::size_t i = 0; i < heap.size(); ++i) {
    const auto name = node_name(i);
    heap[i] = name.empty() ? opening : (name[0] == '1' ? 0.0 : penalty);
  }

  SchemeResult out{PricingTree::from_heap_prices(rounds, std::move(heap)),
                   seller.weight(1) * total * m.revenue,
                   {}};
  const int check = std::max(rounds, 256);
  for (int t = 1; t <= check; ++t) {
    if (seller.weight(t) > buyer.weight(t) * (1.0 + 1e-12)) {
      out.warnings.push_back(fmt::format(
          "seller weight exceeds the buyer's at round {}; big deal is not "
          "guaranteed optimal",
          t));
      break;
    }
  }
  return out;
}

namespace {

TauStepResult solve_truncated(const ValuationDistribution& dist,
                              const DiscountSequence& buyer,
                              const DiscountSequence& seller, int rounds,
                              OptimizerOptions opts, const PricingTree* warm) {
  if (rounds > kMaxTruncationRounds) {
    throw ResourceLimit(fmt::format(
        "tau-step optimization supports tau <= {}, got {}", kMaxTruncationRounds,
        rounds));
  }
  const auto game = truncate(buyer, seller, rounds);
  const auto sys = ReductionSystem::build(game.buyer, game.seller, rounds);
  if (warm != nullptr && warm->horizon() <= rounds) {
    const auto lifted = freeze_extend(*warm, rounds - warm->horizon());
    opts.extra_starts.push_back(project_to_delta(sys.thresholds_from_tree(lifted)));
  }
  auto solve = maximize_revenue_functional(sys, dist, opts);
  if (!rates_dominated(game.buyer, game.seller, rounds)) {
    solve.warnings.insert(solve.warnings.begin(),
                          "buyer discount rates exceed the seller's");
  }
  const double value = solve.value;
  PricingTree tree = solve.tree;
  return TauStepResult{std::move(tree), value, value,
                       value + game.tail_bound(dist), std::move(solve)};
}

}  // namespace

TauStepResult tau_step_optimal(const ValuationDistribution& dist,
                               const DiscountSequence& buyer,
                               const DiscountSequence& seller, int rounds,
                               const OptimizerOptions& opts) {
  return solve_truncated(dist, buyer, seller, rounds, opts, nullptr);
}

std::vector<TauStepResult> tau_step_sequence(const ValuationDistribution& dist,
                                             const DiscountSequence& buyer,
                                             const DiscountSequence& seller,
                                             const std::vector<int>& rounds,
                                             const OptimizerOptions& opts) {
  if (!std::is_sorted(rounds.begin(), rounds.end())) {
    throw InvalidParameter("truncation rounds must be ascending");
  }
  std::vector<TauStepResult> out;
  for (int tau : rounds) {
    const PricingTree* warm = out.empty() ? nullptr : &out.back().tree;
    out.push_back(solve_truncated(dist, buyer, seller, tau, opts, warm));
  }
  return out;
}

PricingTree freeze_extend(const PricingTree& tree, int extra) {
  if (extra < 0) throw InvalidParameter("cannot extend a tree by negative rounds");
  const int from = tree.horizon();
  const int to = from + extra;
  std::vector<double> heap(node_count(to));
  for (std::size_t i = 0; i < heap.size(); ++i) {
    auto name = node_name(i);
    if (static_cast<int>(name.size()) >= from) name.resize(static_cast<std::size_t>(from - 1));
    heap[i] = tree.price(name);
  }
  return PricingTree::from_heap_prices(to, std::move(heap));
}

}  // namespace postprice
