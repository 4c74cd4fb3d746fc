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

#include "postprice/game.hpp"

#include <cmath>

#include <fmt/format.h>

#include "postprice/error.hpp"

namespace postprice {

BuyerStrategy::BuyerStrategy(std::uint32_t bits, int length)
    : bits_(bits), length_(length) {
  if (length < 0 || length > 31) {
    throw InvalidParameter(
        fmt::format("strategy length must lie in [0, 31], got {}", length));
  }
  if (length < 32 && (bits >> length) != 0) {
    throw InvalidParameter("strategy bits exceed its length");
  }
}

BuyerStrategy BuyerStrategy::from_string(std::string_view decisions) {
  std::uint32_t bits = 0;
  for (char c : decisions) {
    if (c != '0' && c != '1') {
      throw InvalidParameter(
          fmt::format("'{}' is not a strategy string", decisions));
    }
    bits = (bits << 1) | static_cast<std::uint32_t>(c == '1');
  }
  return BuyerStrategy(bits, static_cast<int>(decisions.size()));
}

BuyerStrategy BuyerStrategy::all_accept(int length) {
  return BuyerStrategy((std::uint32_t{1} << length) - 1, length);
}

std::string BuyerStrategy::prefix(int rounds) const {
  std::string s(static_cast<std::size_t>(rounds), '0');
  for (int t = 1; t <= rounds; ++t) {
    if (accepts(t)) s[static_cast<std::size_t>(t - 1)] = '1';
  }
  return s;
}

void require_horizon(const DiscountSequence& d, int horizon,
                     std::string_view role) {
  if (!d.is_finite() || *d.horizon() != horizon) {
    throw InvalidParameter(fmt::format(
        "{} discount must be finite with {} rounds, got {}", role, horizon,
        d.describe()));
  }
}

std::vector<double> price_path(const PricingTree& tree,
                               const BuyerStrategy& strategy) {
  if (strategy.length() != tree.horizon()) {
    throw InvalidParameter(fmt::format(
        "strategy has {} rounds but the tree has {}", strategy.length(),
        tree.horizon()));
  }
  std::vector<double> path(static_cast<std::size_t>(tree.horizon()));
  for (int t = 1; t <= tree.horizon(); ++t) {
    path[static_cast<std::size_t>(t - 1)] =
        tree.price(t - 1, strategy.history(t - 1));
  }
  return path;
}

GameOutcome evaluate(const PricingTree& tree, const BuyerStrategy& strategy,
                     double valuation, const DiscountSequence& buyer,
                     const DiscountSequence& seller) {
  if (!(valuation >= 0.0)) {
    throw InvalidParameter("valuation must be non-negative");
  }
  require_horizon(buyer, tree.horizon(), "buyer");
  require_horizon(seller, tree.horizon(), "seller");
  const auto path = price_path(tree, strategy);
  const auto gb = buyer.weights();
  const auto gs = seller.weights();

  GameOutcome out{strategy};
  for (int t = 1; t <= tree.horizon(); ++t) {
    if (!strategy.accepts(t)) continue;
    const auto i = static_cast<std::size_t>(t - 1);
    out.quantity += gb[i];
    out.payment += gb[i] * path[i];
    out.revenue += gs[i] * path[i];
  }
  out.surplus = out.quantity * valuation - out.payment;
  return out;
}

}  // namespace postprice
