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

#ifndef POSTPRICE_GAME_HPP_
#define POSTPRICE_GAME_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "postprice/discount.hpp"
#include "postprice/pricing_tree.hpp"

namespace postprice {

/// Accept/reject decisions of the buyer for every round of a finite game.
/// Packed most-significant-first: for "10", bits() == 0b10, so enumerating
/// 0 .. 2^T - 1 visits strategies in increasing binary value.
class BuyerStrategy {
 public:
  BuyerStrategy() = default;
  BuyerStrategy(std::uint32_t bits, int length);
  static BuyerStrategy from_string(std::string_view decisions);
  static BuyerStrategy all_accept(int length);

  int length() const { return length_; }
  std::uint32_t bits() const { return bits_; }
  /// Decision at round t in 1..length().
  bool accepts(int t) const {
    return ((bits_ >> (length_ - t)) & 1U) != 0;
  }
  /// Decisions of the first `rounds` rounds packed like bits().
  std::uint32_t history(int rounds) const {
    return rounds == 0 ? 0U : bits_ >> (length_ - rounds);
  }
  /// Node string reached before round `rounds + 1`.
  std::string prefix(int rounds) const;
  std::string to_string() const { return prefix(length_); }

  friend bool operator==(const BuyerStrategy&, const BuyerStrategy&) = default;

 private:
  std::uint32_t bits_ = 0;
  int length_ = 0;
};

/// Prices offered along the strategy's path; element t-1 is the price at
/// the node of its first t-1 decisions.
std::vector<double> price_path(const PricingTree& tree,
                               const BuyerStrategy& strategy);

struct GameOutcome {
  BuyerStrategy strategy;
  double surplus = 0.0;   // sum_t gB_t a_t (v - p_t)
  double revenue = 0.0;   // sum_t gS_t a_t p_t
  double quantity = 0.0;  // sum_t gB_t a_t
  double payment = 0.0;   // sum_t gB_t a_t p_t, so surplus = quantity v - payment
};

/// Plays one strategy against a tree. Both discounts must be finite with the
/// tree's horizon and v must be non-negative.
GameOutcome evaluate(const PricingTree& tree, const BuyerStrategy& strategy,
                     double valuation, const DiscountSequence& buyer,
                     const DiscountSequence& seller);

/// Throws InvalidParameter unless `d` is finite with exactly `horizon` rounds.
void require_horizon(const DiscountSequence& d, int horizon,
                     std::string_view role);

}  // namespace postprice

#endif  // POSTPRICE_GAME_HPP_
