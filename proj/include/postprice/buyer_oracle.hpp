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

#ifndef POSTPRICE_BUYER_ORACLE_HPP_
#define POSTPRICE_BUYER_ORACLE_HPP_

#include <ostream>
#include <span>
#include <vector>

#include "postprice/discount.hpp"
#include "postprice/distribution.hpp"
#include "postprice/game.hpp"
#include "postprice/pricing_tree.hpp"

namespace postprice {

// Exhaustive enumeration guard: at most 2^20 strategies.
inline constexpr int kMaxEnumerationHorizon = 20;
inline constexpr double kDefaultTieTolerance = 1e-12;
inline constexpr int kDefaultQuadratureNodes = 256;
inline constexpr int kQuadraturePanels = 8;

struct BestResponse {
  BuyerStrategy strategy;
  double surplus = 0.0;   // S(v), buyer discount
  double revenue = 0.0;   // seller revenue, seller discount
  double quantity = 0.0;  // Q(v), buyer discount
  double payment = 0.0;   // buyer-discounted payment, S = Q v - payment
  int tie_count = 1;      // optimal strategies before the tie-break
};

/// Surplus line S_a(v) = quantity * v - payment of one strategy.
struct StrategyLine {
  BuyerStrategy strategy;
  double quantity = 0.0;
  double payment = 0.0;
  double revenue = 0.0;
};

/// Trusted strategic-buyer model: enumerates every strategy of a finite tree
/// once and answers best-response queries against the cached lines.
///
/// Among surplus ties (|dS| <= tol * max(1, |S|)) the strategy with the
/// largest seller revenue wins; remaining ties go to the smallest binary
/// value.
class BuyerOracle {
 public:
  BuyerOracle(const PricingTree& tree, const DiscountSequence& buyer,
              const DiscountSequence& seller,
              double tie_tolerance = kDefaultTieTolerance);

  int horizon() const { return horizon_; }
  std::span<const StrategyLine> lines() const { return lines_; }

  BestResponse best_response(double valuation) const;

  /// Valuations in (0, inf) where the upper envelope of the surplus lines
  /// changes slope, ascending.
  std::vector<double> switch_points() const;

 private:
  int horizon_;
  double tie_tolerance_;
  std::vector<StrategyLine> lines_;
};

BestResponse best_response(const PricingTree& tree, double valuation,
                           const DiscountSequence& buyer,
                           const DiscountSequence& seller);

struct CurvePoint {
  double valuation = 0.0;
  double surplus = 0.0;
  double revenue = 0.0;
  double quantity = 0.0;
  BuyerStrategy strategy;
};

/// Best responses along a sorted, non-negative valuation grid.
std::vector<CurvePoint> strategic_revenue_curve(
    const PricingTree& tree, const DiscountSequence& buyer,
    const DiscountSequence& seller, std::span<const double> valuations);

/// Writes "v,strategy,S,R,Q" rows (12 significant digits, LF endings).
void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve);

/// E[R(V)] by composite Gauss-Legendre quadrature of R(v) f(v) over the
/// support. The support is cut into kQuadraturePanels equal panels, each
/// further split at the switch points of R so that every piece integrates
/// a smooth density. Every piece gets n_quadrature / kQuadraturePanels nodes.
double expected_strategic_revenue(const PricingTree& tree,
                                  const ValuationDistribution& dist,
                                  const DiscountSequence& buyer,
                                  const DiscountSequence& seller,
                                  int n_quadrature = kDefaultQuadratureNodes);

/// Same, reusing an already built oracle.
double expected_strategic_revenue(const BuyerOracle& oracle,
                                  const ValuationDistribution& dist,
                                  int n_quadrature = kDefaultQuadratureNodes);

struct BruteForceTree {
  PricingTree tree;
  double revenue = 0.0;
};

/// Grid search over every two-round tree whose three prices are cell
/// midpoints lo + (i + 1/2)(hi - lo)/resolution of the support. Only
/// horizon 2 and 1 <= resolution <= 60 are accepted.
BruteForceTree brute_force_optimal_tree(const ValuationDistribution& dist,
                                        const DiscountSequence& buyer,
                                        const DiscountSequence& seller,
                                        int horizon, int resolution);

}  // namespace postprice

#endif  // POSTPRICE_BUYER_ORACLE_HPP_
