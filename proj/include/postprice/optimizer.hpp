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

#ifndef POSTPRICE_OPTIMIZER_HPP_
#define POSTPRICE_OPTIMIZER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "postprice/discount.hpp"
#include "postprice/distribution.hpp"
#include "postprice/pricing_tree.hpp"
#include "postprice/reduction.hpp"

namespace postprice {

/// Euclidean projection onto {0 <= v_1 <= ... <= v_k}: pool adjacent
/// violators, then clamp at zero.
Eigen::VectorXd project_to_delta(const Eigen::VectorXd& x);

/// nu_t = g_{t+1} / g_t (0 where g_t = 0), t = 1..rounds-1. `rounds`
/// defaults to the horizon; infinite sequences need it explicitly.
std::vector<double> discount_rates(const DiscountSequence& d, int rounds = 0);

/// True when nu_t(buyer) <= nu_t(seller) for every t < rounds.
bool rates_dominated(const DiscountSequence& buyer,
                     const DiscountSequence& seller, int rounds);

struct OptimizerOptions {
  int starts = 0;  // 0: max(16, 4k)
  int max_iter = 100000;
  double tol = 1e-9;
  std::uint64_t seed = 20260101;
  std::vector<Eigen::VectorXd> extra_starts;  // projected before use
  bool keep_trace = false;
};

struct OptimizationResult {
  Eigen::VectorXd v_star;
  double value = 0.0;
  PricingTree tree = PricingTree::constant(1, 0.0);
  int iterations = 0;  // of the winning start
  int starts = 0;
  bool converged = false;
  double kkt_residual = 0.0;
  std::vector<std::string> warnings;
  std::vector<double> trace;  // L after each accepted step of the winning start
};

/// Multi-start projected gradient ascent of L over the ordered cone.
OptimizationResult maximize_revenue_functional(const ReductionSystem& system,
                                               const ValuationDistribution& dist,
                                               const OptimizerOptions& opts = {});

/// Builds the reduction for `horizon` rounds and maximizes. Adds a warning
/// when the buyer's discount rates exceed the seller's somewhere.
OptimizationResult maximize_revenue_functional(const ValuationDistribution& dist,
                                               const DiscountSequence& buyer,
                                               const DiscountSequence& seller,
                                               int horizon,
                                               const OptimizerOptions& opts = {});

struct QuadraticOptimum {
  Eigen::VectorXd v;
  double value = 0.0;
};

/// Exact maximizer of (1 - v)^T M v over {0 <= v_1 <= ... <= v_k <= 1}, the
/// revenue functional under U[0,1]. Enumerates all faces of the chain, so k
/// is limited to 10.
QuadraticOptimum maximize_uniform_form(const Eigen::MatrixXd& form);

}  // namespace postprice

#endif  // POSTPRICE_OPTIMIZER_HPP_
