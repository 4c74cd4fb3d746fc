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

#include "postprice/buyer_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "postprice/csv.hpp"
#include "postprice/error.hpp"
#include "postprice/quadrature.hpp"

namespace postprice {

BuyerOracle::BuyerOracle(const PricingTree& tree, const DiscountSequence& buyer,
                         const DiscountSequence& seller, double tie_tolerance)
    : horizon_(tree.horizon()), tie_tolerance_(tie_tolerance) {
  if (horizon_ > kMaxEnumerationHorizon) {
    throw ResourceLimit(fmt::format(
        "best-response enumeration is limited to {} rounds, tree has {}",
        kMaxEnumerationHorizon, horizon_));
  }
  require_horizon(buyer, horizon_, "buyer");
  require_horizon(seller, horizon_, "seller");
  const auto gb = buyer.weights();
  const auto gs = seller.weights();

  const std::uint32_t count = std::uint32_t{1} << horizon_;
  lines_.reserve(count);
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    StrategyLine line{BuyerStrategy(bits, horizon_)};
    for (int t = 1; t <= horizon_; ++t) {
      if (!line.strategy.accepts(t)) continue;
      const auto i = static_cast<std::size_t>(t - 1);
      const double p = tree.price(t - 1, line.strategy.history(t - 1));
      line.quantity += gb[i];
      line.payment += gb[i] * p;
      line.revenue += gs[i] * p;
    }
    lines_.push_back(line);
  }
}

BestResponse BuyerOracle::best_response(double valuation) const {
  if (!(valuation >= 0.0) || !std::isfinite(valuation)) {
    throw InvalidParameter(
        fmt::format("valuation must be non-negative, got {}", valuation));
  }
  double best_surplus = -std::numeric_limits<double>::infinity();
  for (const auto& line : lines_) {
    best_surplus =
        std::max(best_surplus, line.quantity * valuation - line.payment);
  }
  const double tol = tie_tolerance_ * std::max(1.0, std::abs(best_surplus));

  const StrategyLine* chosen = nullptr;
  int ties = 0;
  for (const auto& line : lines_) {
    const double s = line.quantity * valuation - line.payment;
    if (best_surplus - s > tol) continue;
    ++ties;
    if (chosen == nullptr || line.revenue > chosen->revenue) chosen = &line;
  }
  return BestResponse{chosen->strategy,
                      chosen->quantity * valuation - chosen->payment,
                      chosen->revenue, chosen->quantity, chosen->payment, ties};
}

std::vector<double> BuyerOracle::switch_points() const {
  // One candidate per distinct slope: the cheapest line dominates the rest.
  std::vector<const StrategyLine*> candidates;
  candidates.reserve(lines_.size());
  for (const auto& line : lines_) candidates.push_back(&line);
  std::sort(candidates.begin(), candidates.end(),
            [](const StrategyLine* a, const StrategyLine* b) {
              if (a->quantity != b->quantity) return a->quantity < b->quantity;
              return a->payment < b->payment;
            });
  std::vector<const StrategyLine*> slopes;
  for (const auto* line : candidates) {
    if (slopes.empty() || slopes.back()->quantity != line->quantity) {
      slopes.push_back(line);
    }
  }

  // Envelope owner at v = 0: the largest intercept, steepest among ties.
  std::size_t current = 0;
  for (std::size_t i = 1; i < slopes.size(); ++i) {
    if (slopes[i]->payment <= slopes[current]->payment) current = i;
  }

  std::vector<double> points;
  double v = 0.0;
  while (true) {
    std::size_t next = slopes.size();
    double next_v = std::numeric_limits<double>::infinity();
    for (std::size_t j = current + 1; j < slopes.size(); ++j) {
      const double x = (slopes[j]->payment - slopes[current]->payment) /
                       (slopes[j]->quantity - slopes[current]->quantity);
      if (x <= next_v) {  // later entries are steeper, so ties prefer them
        next_v = x;
        next = j;
      }
    }
    if (next == slopes.size()) break;
    v = std::max(v, next_v);
    if (v > 0.0) points.push_back(v);
    current = next;
  }
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

BestResponse best_response(const PricingTree& tree, double valuation,
                           const DiscountSequence& buyer,
                           const DiscountSequence& seller) {
  return BuyerOracle(tree, buyer, seller).best_response(valuation);
}

std::vector<CurvePoint> strategic_revenue_curve(
    const PricingTree& tree, const DiscountSequence& buyer,
    const DiscountSequence& seller, std::span<const double> valuations) {
  if (!std::is_sorted(valuations.begin(), valuations.end())) {
    throw InvalidParameter("valuation grid must be sorted");
  }
  const BuyerOracle oracle(tree, buyer, seller);
  std::vector<CurvePoint> curve;
  curve.reserve(valuations.size());
  for (double v : valuations) {
    const auto br = oracle.best_response(v);
    curve.push_back({v, br.surplus, br.revenue, br.quantity, br.strategy});
  }
  return curve;
}

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve) {
  out << "v,strategy,S,R,Q\n";
  for (const auto& p : curve) {
    out << format_real(p.valuation) << ',' << p.strategy.to_string() << ','
        << format_real(p.surplus) << ',' << format_real(p.revenue) << ','
        << format_real(p.quantity) << '\n';
  }
}

double expected_strategic_revenue(const BuyerOracle& oracle,
                                  const ValuationDistribution& dist,
                                  int n_quadrature) {
  if (n_quadrature < 16) {
    throw InvalidParameter("expected revenue quadrature needs >= 16 nodes");
  }
  const double lo = dist.support_lo();
  const double hi = dist.support_hi();
  std::vector<double> edges;
  for (int i = 0; i <= kQuadraturePanels; ++i) {
    edges.push_back(lo + (hi - lo) * i / kQuadraturePanels);
  }
  edges.back() = hi;
  for (double x : oracle.switch_points()) {
    if (x > lo && x < hi) edges.push_back(x);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const auto& rule =
      cached_gauss_legendre(std::max(2, n_quadrature / kQuadraturePanels));
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    total += integrate(rule, edges[i], edges[i + 1], [&](double v) {
      return oracle.best_response(v).revenue * dist.pdf(v);
    });
  }
  return total;
}

double expected_strategic_revenue(const PricingTree& tree,
                                  const ValuationDistribution& dist,
                                  const DiscountSequence& buyer,
                                  const DiscountSequence& seller,
                                  int n_quadrature) {
  return expected_strategic_revenue(BuyerOracle(tree, buyer, seller), dist,
                                    n_quadrature);
}

BruteForceTree brute_force_optimal_tree(const ValuationDistribution& dist,
                                        const DiscountSequence& buyer,
                                        const DiscountSequence& seller,
                                        int horizon, int resolution) {
  if (horizon != 2) {
    throw InvalidParameter(fmt::format(
        "brute-force tree search supports horizon 2 only, got {}", horizon));
  }
  if (resolution < 1 || resolution > 60) {
    throw InvalidParameter(fmt::format(
        "brute-force price grid resolution must lie in [1, 60], got {}",
        resolution));
  }
  const double lo = dist.support_lo();
  const double cell = (dist.support_hi() - lo) / resolution;
  std::vector<double> grid(static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i) {
    grid[static_cast<std::size_t>(i)] = lo + (i + 0.5) * cell;
  }

  // Heap order: root, "0", "1".
  BruteForceTree best{PricingTree::constant(2, grid[0]),
                      -std::numeric_limits<double>::infinity()};
  for (double root : grid) {
    for (double left : grid) {
      for (double right : grid) {
        auto tree = PricingTree::from_heap_prices(2, {root, left, right});
        const double revenue =
            expected_strategic_revenue(tree, dist, buyer, seller);
        if (revenue > best.revenue) best = {std::move(tree), revenue};
      }
    }
  }
  return best;
}

}  // namespace postprice
