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

#ifndef POSTPRICE_SCHEMES_HPP_
#define POSTPRICE_SCHEMES_HPP_

#include <string>
#include <vector>

#include "postprice/discount.hpp"
#include "postprice/distribution.hpp"
#include "postprice/optimizer.hpp"
#include "postprice/pricing_tree.hpp"

namespace postprice {

inline constexpr int kMaxTruncationRounds = kMaxReductionHorizon;

/// A game cut after `rounds` rounds; the last weight of each discount
/// absorbs the whole tail, which is exact for algorithms that freeze their
/// price from that round on.
struct TruncatedGame {
  int rounds = 0;
  DiscountSequence buyer;
  DiscountSequence seller;
  double seller_tail = 0.0;  // seller weight strictly after `rounds`

  /// Revenue the frozen tail can miss: seller_tail * E[V].
  double tail_bound(const ValuationDistribution& dist) const {
    return seller_tail * dist.mean();
  }
};

/// Throws InvalidParameter when rounds < 1 or a finite input is shorter.
TruncatedGame truncate(const DiscountSequence& buyer,
                       const DiscountSequence& seller, int rounds);

struct SchemeResult {
  PricingTree tree;
  double revenue = 0.0;
  std::vector<std::string> warnings;
};

/// Myerson price at every node. `depth` sizes the tree for infinite seller
/// discounts (default 1); finite discounts use their horizon.
SchemeResult constant_myerson(const ValuationDistribution& dist,
                              const DiscountSequence& seller, int depth = 0);

/// Round one asks total buyer weight times the Myerson price; acceptance is
/// followed by free goods, rejection by a prohibitive constant price.
/// Needs two or more rounds. Warns unless the seller weights never exceed
/// the buyer's. `depth` sizes the tree for infinite buyer discounts.
SchemeResult big_deal(const ValuationDistribution& dist,
                      const DiscountSequence& buyer,
                      const DiscountSequence& seller, int depth = 0);

struct TauStepResult {
  PricingTree tree;
  double value = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  OptimizationResult solve;
};

/// Optimal price-freezing algorithm over the first `rounds` rounds, with
/// bounds on the untruncated optimum.
TauStepResult tau_step_optimal(const ValuationDistribution& dist,
                               const DiscountSequence& buyer,
                               const DiscountSequence& seller, int rounds,
                               const OptimizerOptions& opts = {});

/// tau_step_optimal() for each entry of `rounds` (ascending), warm-starting
/// each solve from the previous tree frozen one level deeper.
std::vector<TauStepResult> tau_step_sequence(const ValuationDistribution& dist,
                                             const DiscountSequence& buyer,
                                             const DiscountSequence& seller,
                                             const std::vector<int>& rounds,
                                             const OptimizerOptions& opts = {});

/// Extends a tree by `extra` rounds, each new node copying its parent.
PricingTree freeze_extend(const PricingTree& tree, int extra);

}  // namespace postprice

#endif  // POSTPRICE_SCHEMES_HPP_
