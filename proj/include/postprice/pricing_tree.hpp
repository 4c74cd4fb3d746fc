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

#ifndef POSTPRICE_PRICING_TREE_HPP_
#define POSTPRICE_PRICING_TREE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace postprice {

// Largest horizon a materialized tree may have (2^24 - 1 nodes).
inline constexpr int kMaxTreeHorizon = 24;

/// Number of decision nodes in a horizon-T tree: 2^T - 1.
std::size_t node_count(int horizon);

/// Heap position of a node string ("" is the root, then "0", "1", "00", ...).
std::size_t node_index(std::string_view node);
std::string node_name(std::size_t index);

/// In-order node listing: left subtree, then the node, then the right
/// subtree, applied recursively from the root.
std::vector<std::string> consistent_node_order(int horizon);

/// A deterministic pricing algorithm for a T-round game: one non-negative
/// price per history node. The node for round t is the string of the
/// buyer's first t-1 decisions.
///
/// Serialized form: {"horizon": T, "prices": {"": p, "0": p, "1": p, ...}}.
class PricingTree {
 public:
  /// Every node gets `price`.
  static PricingTree constant(int horizon, double price);
  /// Prices listed in heap order (see node_index()).
  static PricingTree from_heap_prices(int horizon, std::vector<double> prices);
  static PricingTree from_map(int horizon,
                              const std::map<std::string, double>& prices);

  /// Throws ParseError carrying a JSON pointer on any schema violation.
  static PricingTree from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  int horizon() const { return horizon_; }
  std::size_t size() const { return prices_.size(); }

  double price(std::string_view node) const;
  /// Price offered at round `depth + 1` after the decisions packed in the
  /// low `depth` bits of `history` (most significant bit first).
  double price(int depth, std::uint32_t history) const {
    return prices_[(std::size_t{1} << depth) - 1 + history];
  }

  std::span<const double> heap_prices() const { return prices_; }

  friend bool operator==(const PricingTree&, const PricingTree&) = default;

 private:
  PricingTree(int horizon, std::vector<double> prices);

  int horizon_ = 0;
  std::vector<double> prices_;
};

}  // namespace postprice

#endif  // POSTPRICE_PRICING_TREE_HPP_
