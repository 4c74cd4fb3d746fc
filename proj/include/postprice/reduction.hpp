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

#ifndef POSTPRICE_REDUCTION_HPP_
#define POSTPRICE_REDUCTION_HPP_

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "postprice/discount.hpp"
#include "postprice/distribution.hpp"
#include "postprice/game.hpp"
#include "postprice/pricing_tree.hpp"

namespace postprice {

// Supported ceiling for the dense reduction: k = 2^6 - 1 = 63 thresholds.
inline constexpr int kMaxReductionHorizon = 6;
inline constexpr double kRegularityTolerance = 1e-12;

/// Strategies sorted by buyer-discounted quantity. strategies[0] is the
/// all-reject strategy and strategies[k] the all-accept one.
struct StrategyOrder {
  std::vector<BuyerStrategy> strategies;
  std::vector<double> quantities;
};

struct CollidingPair {
  BuyerStrategy first;
  BuyerStrategy second;
  double quantity = 0.0;
};

/// Reports two strategies whose discounted quantities agree within
/// kRegularityTolerance, or nullopt when the discount is regular.
std::optional<CollidingPair> check_regularity(const DiscountSequence& buyer,
                                              int horizon);

/// Stable sort of all 2^T strategies by quantity. Throws RegularityViolation.
StrategyOrder order_strategies(const DiscountSequence& buyer, int horizon);

/// Linear parametrization of completely active pricing trees.
///
/// Strategies a^0..a^k are ordered by the buyer discount and tree nodes by
/// consistent_node_order(). For a tree A (prices in node order):
///
///   thresholds    v = Z J K_bb A     (switch valuations between a^{j-1}, a^j)
///   revenue form  Xi = J K_bs K_bb^{-1} J^{-1} Z^{-1}
///   E[revenue]    = (1 - F(v))^T Xi v   whenever v is ordered, v >= 0
///
/// with J the unit lower bidiagonal difference matrix (-1 below the
/// diagonal), Z = diag(1 / (q_j - q_{j-1})), and K_bx[i][j] = g_t a^i_t when
/// the path of a^i visits node j at round t (g from the buyer or seller
/// discount).
class ReductionSystem {
 public:
  /// Both discounts must be finite with `horizon` rounds and the buyer
  /// discount regular. Throws RegularityViolation, ResourceLimit past
  /// kMaxReductionHorizon, SingularMatrix on a numerically singular system.
  static ReductionSystem build(const DiscountSequence& buyer,
                               const DiscountSequence& seller, int horizon);

  int horizon() const { return horizon_; }
  int dimension() const { return static_cast<int>(nodes_.size()); }
  const StrategyOrder& order() const { return order_; }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const DiscountSequence& buyer() const { return buyer_; }
  const DiscountSequence& seller() const { return seller_; }

  const Eigen::MatrixXd& difference() const { return difference_; }
  const Eigen::VectorXd& quantity_gaps() const { return gaps_; }  // diag Z^{-1}
  const Eigen::MatrixXd& buyer_payments() const { return buyer_payments_; }
  const Eigen::MatrixXd& seller_payments() const { return seller_payments_; }
  const Eigen::MatrixXd& thresholds_map() const { return thresholds_map_; }
  const Eigen::MatrixXd& tree_map() const { return tree_map_; }  // W^{-1}
  const Eigen::MatrixXd& revenue_form() const { return revenue_form_; }

  double thresholds_map_condition() const { return w_condition_; }
  double revenue_form_condition() const { return xi_condition_; }

  /// Tree prices in node order.
  Eigen::VectorXd tree_vector(const PricingTree& tree) const;
  PricingTree tree_from_vector(const Eigen::VectorXd& prices) const;

  Eigen::VectorXd thresholds_from_tree(const PricingTree& tree) const;

  /// Inverse map on the ordered cone. Throws InvalidParameter if v is not
  /// ordered and non-negative, InfeasiblePoint if a price comes out
  /// negative beyond round-off.
  PricingTree tree_from_thresholds(const Eigen::VectorXd& v) const;

  /// (1 - F(v))^T Xi v, defined for any v.
  double revenue_functional(const ValuationDistribution& dist,
                            const Eigen::VectorXd& v) const;
  /// Xi^T (1 - F(v)) - diag(f(v)) Xi v.
  Eigen::VectorXd revenue_functional_gradient(const ValuationDistribution& dist,
                                              const Eigen::VectorXd& v) const;

  /// Matrices as CSV blocks, each preceded by a "# name" line.
  void write_csv(std::ostream& out) const;

 private:
  ReductionSystem(DiscountSequence buyer, DiscountSequence seller)
      : buyer_(std::move(buyer)), seller_(std::move(seller)) {}

  int horizon_ = 0;
  DiscountSequence buyer_;
  DiscountSequence seller_;
  StrategyOrder order_;
  std::vector<std::string> nodes_;
  std::vector<std::size_t> node_heap_index_;
  Eigen::MatrixXd difference_;
  Eigen::VectorXd gaps_;
  Eigen::MatrixXd buyer_payments_;
  Eigen::MatrixXd seller_payments_;
  Eigen::MatrixXd thresholds_map_;
  Eigen::MatrixXd tree_map_;
  Eigen::MatrixXd revenue_form_;
  double w_condition_ = 0.0;
  double xi_condition_ = 0.0;
};

bool is_ordered_nonnegative(const Eigen::VectorXd& v, double tolerance = 0.0);

/// Two-round functional restricted to the v2 = v3 hyperplane:
/// L2(v1, v2) = (1 - F(v))^T U v with U = [[gs, 0], [-(gs - gb), 1 + gs - gb]].
class TwoRoundReducedFunctional {
 public:
  /// Needs 0 < gb <= gs < 1; throws InvalidParameter otherwise.
  TwoRoundReducedFunctional(double seller_rate, double buyer_rate,
                            ValuationDistribution dist);

  const Eigen::Matrix2d& matrix() const { return matrix_; }
  double operator()(double v1, double v2) const;
  /// Lifts a point of the plane to the full threshold vector (v1, v2, v2).
  static Eigen::Vector3d lift(double v1, double v2) { return {v1, v2, v2}; }

 private:
  Eigen::Matrix2d matrix_;
  ValuationDistribution dist_;
};

}  // namespace postprice

#endif  // POSTPRICE_REDUCTION_HPP_
