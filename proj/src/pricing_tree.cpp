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

#include "postprice/pricing_tree.hpp"

#include <bit>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "postprice/error.hpp"

namespace postprice {

namespace {

void check_horizon(int horizon) {
  if (horizon < 1 || horizon > kMaxTreeHorizon) {
    throw InvalidParameter(fmt::format(
        "tree horizon must lie in [1, {}], got {}", kMaxTreeHorizon, horizon));
  }
}

bool is_node_string(std::string_view s) {
  for (char c : s) {
    if (c != '0' && c != '1') return false;
  }
  return true;
}

void append_in_order(std::string& prefix, int remaining,
                     std::vector<std::string>& out) {
  if (remaining == 0) return;
  prefix.push_back('0');
  append_in_order(prefix, remaining - 1, out);
  prefix.pop_back();
  out.push_back(prefix);
  prefix.push_back('1');
  append_in_order(prefix, remaining - 1, out);
  prefix.pop_back();
}

}  // namespace

std::size_t node_count(int horizon) {
  check_horizon(horizon);
  return (std::size_t{1} << horizon) - 1;
}

std::size_t node_index(std::string_view node) {
  if (!is_node_string(node) || node.size() >= 64) {
    throw InvalidParameter(fmt::format("'{}' is not a node string", node));
  }
  std::size_t value = 0;
  for (char c : node) value = (value << 1) | static_cast<std::size_t>(c == '1');
  return (std::size_t{1} << node.size()) - 1 + value;
}

std::string node_name(std::size_t index) {
  const auto depth = static_cast<int>(std::bit_width(index + 1)) - 1;
  const std::size_t value = index + 1 - (std::size_t{1} << depth);
  std::string name(static_cast<std::size_t>(depth), '0');
  for (int i = 0; i < depth; ++i) {
    if ((value >> (depth - 1 - i)) & 1U) name[static_cast<std::size_t>(i)] = '1';
  }
  return name;
}

std::vector<std::string> consistent_node_order(int horizon) {
  std::vector<std::string> out;
  out.reserve(node_count(horizon));
  std::string prefix;
  append_in_order(prefix, horizon, out);
  return out;
}

PricingTree::PricingTree(int horizon, std::vector<double> prices)
    : horizon_(horizon), prices_(std::move(prices)) {
  for (std::size_t i = 0; i < prices_.size(); ++i) {
    if (!std::isfinite(prices_[i]) || prices_[i] < 0.0) {
      throw InvalidParameter(fmt::format(
          "price at node '{}' must be a non-negative number, got {}",
          node_name(i), prices_[i]));
    }
  }
}

PricingTree PricingTree::constant(int horizon, double price) {
  return PricingTree(horizon, std::vector<double>(node_count(horizon), price));
}

PricingTree PricingTree::from_heap_prices(int horizon,
                                          std::vector<double> prices) {
  if (prices.size() != node_count(horizon)) {
    throw InvalidParameter(fmt::format(
        "a {}-round tree needs {} prices, got {}", horizon,
        node_count(horizon), prices.size()));
  }
  return PricingTree(horizon, std::move(prices));
}

PricingTree PricingTree::from_map(int horizon,
                                  const std::map<std::string, double>& prices) {
  const std::size_t n = node_count(horizon);
  std::vector<double> heap(n, 0.0);
  std::vector<bool> seen(n, false);
  for (const auto& [node, price] : prices) {
    if (!is_node_string(node) || node.size() >= static_cast<std::size_t>(horizon)) {
      throw InvalidParameter(fmt::format(
          "'{}' is not a node of a {}-round tree", node, horizon));
    }
    const std::size_t i = node_index(node);
    heap[i] = price;
    seen[i] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) {
      throw InvalidParameter(
          fmt::format("missing price for node '{}'", node_name(i)));
    }
  }
  return PricingTree(horizon, std::move(heap));
}

double PricingTree::price(std::string_view node) const {
  if (!is_node_string(node) || node.size() >= static_cast<std::size_t>(horizon_)) {
    throw InvalidParameter(fmt::format(
        "'{}' is not a node of a {}-round tree", node, horizon_));
  }
  return prices_[node_index(node)];
}

nlohmann::json PricingTree::to_json() const {
  nlohmann::json prices = nlohmann::json::object();
  for (std::size_t i = 0; i < prices_.size(); ++i) {
    prices[node_name(i)] = prices_[i];
  }
  return {{"horizon", horizon_}, {"prices", std::move(prices)}};
}

PricingTree PricingTree::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("", "tree document must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "horizon" && key != "prices") {
      throw ParseError("/" + key, "unexpected member");
    }
  }
  if (!doc.contains("horizon")) throw ParseError("/horizon", "missing member");
  const auto& h = doc["horizon"];
  if (!h.is_number_integer() || h.get<long long>() < 1 ||
      h.get<long long>() > kMaxTreeHorizon) {
    throw ParseError("/horizon",
                     fmt::format("horizon must be an integer in [1, {}]",
                                 kMaxTreeHorizon));
  }
  const int horizon = h.get<int>();
  if (!doc.contains("prices")) throw ParseError("/prices", "missing member");
  const auto& prices = doc["prices"];
  if (!prices.is_object()) throw ParseError("/prices", "must be an object");

  const std::size_t n = node_count(horizon);
  std::vector<double> heap(n, 0.0);
  std::vector<bool> seen(n, false);
  for (const auto& [node, value] : prices.items()) {
    const std::string pointer = "/prices/" + node;
    if (!is_node_string(node) ||
        node.size() >= static_cast<std::size_t>(horizon)) {
      throw ParseError(pointer, fmt::format("'{}' is not a node of a {}-round tree",
                                            node, horizon));
    }
    if (!value.is_number()) throw ParseError(pointer, "price must be a number");
    const double p = value.get<double>();
    if (!std::isfinite(p) || p < 0.0) {
      throw ParseError(pointer, "price must be non-negative");
    }
    heap[node_index(node)] = p;
    seen[node_index(node)] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) {
      throw ParseError("/prices/" + node_name(i), "missing node price");
    }
  }
  return PricingTree(horizon, std::move(heap));
}

}  // namespace postprice
