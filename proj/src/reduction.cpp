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

#include "postprice/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <utility>

#include <fmt/format.h>

#include "postprice/buyer_oracle.hpp"
#include "postprice/csv.hpp"
#include "postprice/error.hpp"

namespace postprice {

namespace {

// Relative slack for ordering checks and negative-price round-off.
constexpr double kRoundOff = 1e-10;

struct SortedStrategies {
  std::vector<std::uint32_t> bits;
  std::vector<double> quantities;
};

SortedStrategies sort_by_quantity(const DiscountSequence& buyer, int horizon) {
  if (horizon < 1 || horizon > kMaxEnumerationHorizon) {
    throw ResourceLimit(fmt::format(
        "strategy ordering supports 1..{} rounds, got {}",
        kMaxEnumerationHorizon, horizon));
  }
  const std::uint32_t count = std::uint32_t{1} << horizon;
  std::vector<double> q(count, 0.0);
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    const BuyerStrategy a(bits, horizon);
    for (int t = 1; t <= horizon; ++t) {
      if (a.accepts(t)) q[bits] += buyer.weight(t);
    }
  }
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return q[a] < q[b]; });
  SortedStrategies out;
  out.bits = std::move(order);
  out.quantities.reserve(count);
  for (auto b : out.bits) out.quantities.push_back(q[b]);
  return out;
}

double condition_number(const Eigen::MatrixXd& m) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smallest = s(s.size() - 1);
  return smallest > 0.0 ? s(0) / smallest
                        : std::numeric_limits<double>::infinity();
}

void write_matrix(std::ostream& out, const char* name, const Eigen::MatrixXd& m) {
  out << "# " << name << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_real(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace

std::optional<CollidingPair> check_regularity(const DiscountSequence& buyer,
                                              int horizon) {
  const auto sorted = sort_by_quantity(buyer, horizon);
  for (std::size_t i = 1; i < sorted.bits.size(); ++i) {
    if (sorted.quantities[i] - sorted.quantities[i - 1] <= kRegularityTolerance) {
      return CollidingPair{BuyerStrategy(sorted.bits[i - 1], horizon),
                           BuyerStrategy(sorted.bits[i], horizon),
                           sorted.quantities[i]};
    }
  }
  return std::nullopt;
}

StrategyOrder order_strategies(const DiscountSequence& buyer, int horizon) {
  require_horizon(buyer, horizon, "buyer");
  if (auto pair = check_regularity(buyer, horizon)) {
    throw RegularityViolation(pair->first.to_string(), pair->second.to_string(),
                              pair->quantity);
  }
  const auto sorted = sort_by_quantity(buyer, horizon);
  StrategyOrder order;
  order.quantities = sorted.quantities;
  order.strategies.reserve(sorted.bits.size());
  for (auto b : sorted.bits) order.strategies.emplace_back(b, horizon);
  return order;
}

bool is_ordered_nonnegative(const Eigen::VectorXd& v, double tolerance) {
  if (v.size() == 0) return true;
  if (!(v(0) >= -tolerance)) return false;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (!(v(i) >= v(i - 1) - tolerance)) return false;
  }
  return true;
}

ReductionSystem ReductionSystem::build(const DiscountSequence& buyer,
                                       const DiscountSequence& seller,
                                       int horizon) {
  if (horizon < 1) throw InvalidParameter("horizon must be positive");
  if (horizon > kMaxReductionHorizon) {
    throw ResourceLimit(fmt::format(
        "reduction supports horizons up to {} (k = 63), got {}",
        kMaxReductionHorizon, horizon));
  }
  require_horizon(seller, horizon, "seller");

  ReductionSystem sys(buyer, seller);
  sys.horizon_ = horizon;
  sys.order_ = order_strategies(buyer, horizon);
  sys.nodes_ = consistent_node_order(horizon);
  const auto k = static_cast<Eigen::Index>(sys.nodes_.size());

  std::unordered_map<std::string, Eigen::Index> column;
  for (Eigen::Index j = 0; j < k; ++j) {
    column.emplace(sys.nodes_[static_cast<std::size_t>(j)], j);
    sys.node_heap_index_.push_back(
        node_index(sys.nodes_[static_cast<std::size_t>(j)]));
  }

  sys.difference_ = Eigen::MatrixXd::Identity(k, k);
  for (Eigen::Index i = 1; i < k; ++i) sys.difference_(i, i - 1) = -1.0;

  sys.gaps_.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto idx = static_cast<std::size_t>(j + 1);
    sys.gaps_(j) = sys.order_.quantities[idx] - sys.order_.quantities[idx - 1];
  }

  sys.buyer_payments_ = Eigen::MatrixXd::Zero(k, k);
  sys.seller_payments_ = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& a = sys.order_.strategies[static_cast<std::size_t>(i + 1)];
    for (int t = 1; t <= horizon; ++t) {
      if (!a.accepts(t)) continue;
      const Eigen::Index j = column.at(a.prefix(t - 1));
      sys.buyer_payments_(i, j) = buyer.weight(t);
      sys.seller_payments_(i, j) = seller.weight(t);
    }
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> kbb_svd(sys.buyer_payments_);
  const auto& sv = kbb_svd.singularValues();
  if (!(sv(k - 1) > 1e-14 * sv(0))) {
    throw SingularMatrix("buyer payment matrix is numerically singular");
  }

  // W = Z J K_bb;  W^{-1} = K_bb^{-1} J^{-1} Z^{-1}.
  const Eigen::MatrixXd inv_gap_diff =
      sys.gaps_.cwiseInverse().asDiagonal() * sys.difference_;
  sys.thresholds_map_ = inv_gap_diff * sys.buyer_payments_;

  const Eigen::MatrixXd ones_lower =
      Eigen::MatrixXd::Ones(k, k).triangularView<Eigen::Lower>();  // J^{-1}
  const Eigen::MatrixXd rhs = ones_lower * sys.gaps_.asDiagonal();
  sys.tree_map_ = sys.buyer_payments_.partialPivLu().solve(rhs);
  sys.revenue_form_ = sys.difference_ * sys.seller_payments_ * sys.tree_map_;

  sys.w_condition_ = condition_number(sys.thresholds_map_);
  sys.xi_condition_ = condition_number(sys.revenue_form_);
  if (!std::isfinite(sys.w_condition_) || !std::isfinite(sys.xi_condition_)) {
    throw SingularMatrix("reduction matrices are singular");
  }

  // Equal discounts collapse the revenue form to diag(q_j - q_{j-1}).
  bool equal = true;
  for (int t = 1; t <= horizon && equal; ++t) {
    equal = buyer.weight(t) == seller.weight(t);
  }
  if (equal) {
    const Eigen::MatrixXd diff =
        sys.revenue_form_ - Eigen::MatrixXd(sys.gaps_.asDiagonal());
    const double scale = std::max(1.0, sys.gaps_.cwiseAbs().maxCoeff());
    if (diff.cwiseAbs().maxCoeff() > 1e-9 * scale) {
      throw Error("internal: equal discounts did not give a diagonal revenue form");
    }
  }
  return sys;
}

Eigen::VectorXd ReductionSystem::tree_vector(const PricingTree& tree) const {
  if (tree.horizon() != horizon_) {
    throw InvalidParameter(fmt::format(
        "tree has {} rounds, reduction system has {}", tree.horizon(), horizon_));
  }
  Eigen::VectorXd a(dimension());
  const auto heap = tree.heap_prices();
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    a(j) = heap[node_heap_index_[static_cast<std::size_t>(j)]];
  }
  return a;
}

PricingTree ReductionSystem::tree_from_vector(const Eigen::VectorXd& prices) const {
  if (prices.size() != dimension()) {
    throw InvalidParameter("price vector has the wrong dimension");
  }
  std::vector<double> heap(static_cast<std::size_t>(dimension()));
  for (Eigen::Index j = 0; j < prices.size(); ++j) {
    heap[node_heap_index_[static_cast<std::size_t>(j)]] = prices(j);
  }
  return PricingTree::from_heap_prices(horizon_, std::move(heap));
}

Eigen::VectorXd ReductionSystem::thresholds_from_tree(const PricingTree& tree) const {
  return thresholds_map_ * tree_vector(tree);
}

PricingTree ReductionSystem::tree_from_thresholds(const Eigen::VectorXd& v) const {
  if (v.size() != dimension()) {
    throw InvalidParameter(fmt::format(
        "threshold vector needs {} entries, got {}", dimension(), v.size()));
  }
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  if (!is_ordered_nonnegative(v, kRoundOff * scale)) {
    throw InvalidParameter(
        "threshold vector must satisfy 0 <= v_1 <= ... <= v_k");
  }
  Eigen::VectorXd prices = tree_map_ * v;
  for (Eigen::Index j = 0; j < prices.size(); ++j) {
    if (prices(j) < 0.0) {
      if (prices(j) < -kRoundOff * scale) {
        throw InfeasiblePoint(nodes_[static_cast<std::size_t>(j)], prices(j));
      }
      prices(j) = 0.0;
    }
  }
  return tree_from_vector(prices);
}

double ReductionSystem::revenue_functional(const ValuationDistribution& dist,
                                           const Eigen::VectorXd& v) const {
  Eigen::VectorXd survival(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) survival(i) = 1.0 - dist.cdf(v(i));
  return survival.dot(revenue_form_ * v);
}

Eigen::VectorXd ReductionSystem::revenue_functional_gradient(
    const ValuationDistribution& dist, const Eigen::VectorXd& v) const {
  Eigen::VectorXd survival(v.size());
  Eigen::VectorXd density(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    survival(i) = 1.0 - dist.cdf(v(i));
    density(i) = dist.pdf(v(i));
  }
  return revenue_form_.transpose() * survival -
         density.cwiseProduct(revenue_form_ * v);
}

void ReductionSystem::write_csv(std::ostream& out) const {
  out << "# T=" << horizon_ << ", buyer=" << buyer_.describe()
      << ", seller=" << seller_.describe() << '\n';
  out << "# strategies";
  for (const auto& a : order_.strategies) out << ',' << a.to_string();
  out << "\n# nodes";
  for (const auto& n : nodes_) out << ",'" << n << "'";
  out << '\n';
  write_matrix(out, "J", difference_);
  write_matrix(out, "Z", Eigen::MatrixXd(gaps_.cwiseInverse().asDiagonal()));
  write_matrix(out, "K_bb", buyer_payments_);
  write_matrix(out, "K_bs", seller_payments_);
  write_matrix(out, "W", thresholds_map_);
  write_matrix(out, "Xi", revenue_form_);
  out << "# cond(W)=" << format_real(w_condition_)
      << ", cond(Xi)=" << format_real(xi_condition_) << '\n';
}

TwoRoundReducedFunctional::TwoRoundReducedFunctional(double seller_rate,
                                                     double buyer_rate,
                                                     ValuationDistribution dist)
    : dist_(std::move(dist)) {
  if (!(buyer_rate > 0.0 && buyer_rate <= seller_rate && seller_rate < 1.0)) {
    throw InvalidParameter(fmt::format(
        "two-round reduction needs 0 < gb <= gs < 1, got gs={}, gb={}",
        seller_rate, buyer_rate));
  }
  const double gap = seller_rate - buyer_rate;
  matrix_ << seller_rate, 0.0, -gap, 1.0 + gap;
}

double TwoRoundReducedFunctional::operator()(double v1, double v2) const {
  const Eigen::Vector2d v(v1, v2);
  const Eigen::Vector2d survival(1.0 - dist_.cdf(v1), 1.0 - dist_.cdf(v2));
  return survival.dot(matrix_ * v);
}

}  // namespace postprice
