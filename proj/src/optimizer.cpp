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

#include "postprice/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "postprice/error.hpp"

namespace postprice {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kShrink = 0.5;
constexpr double kTieWindow = 1e-10;
constexpr double kRoundOffGain = 1e-13;

struct Run {
  Eigen::VectorXd v;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double kkt = 0.0;
  std::vector<double> trace;
};

double kkt_residual(const Eigen::VectorXd& v, const Eigen::VectorXd& g) {
  return (v - project_to_delta(v + g)).norm();
}

// Projected gradient ascent from one start. Armijo backtracking along the
// projection arc; trial steps come from the Barzilai-Borwein quotient and
// fall back to the fixed step when curvature is not negative.
Run ascend(const ReductionSystem& sys, const ValuationDistribution& dist,
           const Eigen::VectorXd& start, const OptimizerOptions& opts,
           double base_step) {
  Run run;
  run.v = project_to_delta(start);
  run.value = sys.revenue_functional(dist, run.v);
  Eigen::VectorXd g = sys.revenue_functional_gradient(dist, run.v);
  double step = base_step;

  for (run.iterations = 0; run.iterations < opts.max_iter; ++run.iterations) {
    run.kkt = kkt_residual(run.v, g);
    if (run.kkt <= opts.tol) {
      run.converged = true;
      break;
    }
    double a = step;
    bool accepted = false;
    Eigen::VectorXd cand;
    Eigen::VectorXd g_new;
    double cand_value = 0.0;
    while (a > 1e-20) {
      cand = project_to_delta(run.v + a * g);
      const Eigen::VectorXd d = cand - run.v;
      if (d.squaredNorm() == 0.0) break;
      cand_value = sys.revenue_functional(dist, cand);
      g_new = sys.revenue_functional_gradient(dist, cand);
      double gain = cand_value - run.value;
      if (std::abs(gain) <= kRoundOffGain * std::max(1.0, std::abs(run.value))) {
        // Below the resolution of L itself: the trapezoid rule on the
        // gradient measures the increase without cancellation.
        gain = 0.5 * (g + g_new).dot(d);
      }
      if (gain >= kArmijo * g.dot(d)) {
        accepted = true;
        break;
      }
      a *= kShrink;
    }
    if (!accepted) break;  // no ascent left at double precision

    const Eigen::VectorXd s = cand - run.v;
    const double sy = s.dot(g_new - g);
    step = sy < 0.0 ? std::clamp(s.squaredNorm() / -sy, 1e-10, 1e10) : base_step;

    run.v = std::move(cand);
    run.value = cand_value;
    g = std::move(g_new);
    if (opts.keep_trace) run.trace.push_back(run.value);
  }
  if (!run.converged) {
    run.kkt = kkt_residual(run.v, g);
    run.converged = run.kkt <= opts.tol;
  }
  return run;
}

bool lexicographically_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

}  // namespace

Eigen::VectorXd project_to_delta(const Eigen::VectorXd& x) {
  const auto n = x.size();
  // Blocks of pooled values: mean and size.
  std::vector<double> mean;
  std::vector<Eigen::Index> size;
  mean.reserve(static_cast<std::size_t>(n));
  size.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    mean.push_back(x(i));
    size.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] > mean.back()) {
      const double m2 = mean.back();
      const auto s2 = size.back();
      mean.pop_back();
      size.pop_back();
      const auto s1 = size.back();
      mean.back() = (mean.back() * static_cast<double>(s1) +
                     m2 * static_cast<double>(s2)) /
                    static_cast<double>(s1 + s2);
      size.back() = s1 + s2;
    }
  }
  Eigen::VectorXd out(n);
  Eigen::Index pos = 0;
  for (std::size_t b = 0; b < mean.size(); ++b) {
    const double value = std::max(0.0, mean[b]);
    for (Eigen::Index j = 0; j < size[b]; ++j) out(pos++) = value;
  }
  return out;
}

std::vector<double> discount_rates(const DiscountSequence& d, int rounds) {
  if (rounds <= 0) {
    if (!d.is_finite()) {
      throw InvalidParameter("discount rates of an infinite sequence need a round count");
    }
    rounds = *d.horizon();
  }
  std::vector<double> nu;
  for (int t = 1; t < rounds; ++t) {
    const double w = d.weight(t);
    nu.push_back(w > 0.0 ? d.weight(t + 1) / w : 0.0);
  }
  return nu;
}

bool rates_dominated(const DiscountSequence& buyer,
                     const DiscountSequence& seller, int rounds) {
  const auto nb = discount_rates(buyer, rounds);
  const auto ns = discount_rates(seller, rounds);
  for (std::size_t i = 0; i < nb.size(); ++i) {
    if (nb[i] > ns[i] + 1e-12) return false;
  }
  return true;
}

OptimizationResult maximize_revenue_functional(const ReductionSystem& sys,
                                               const ValuationDistribution& dist,
                                               const OptimizerOptions& opts) {
  if (opts.max_iter < 0 || !(opts.tol > 0.0)) {
    throw InvalidParameter("optimizer needs max_iter >= 0 and tol > 0");
  }
  const int k = sys.dimension();
  const int n_starts = opts.starts > 0 ? opts.starts : std::max(16, 4 * k);
  const double lo = dist.support_lo();
  const double hi = dist.support_hi();

  std::vector<Eigen::VectorXd> starts;
  starts.reserve(static_cast<std::size_t>(n_starts) + opts.extra_starts.size());
  starts.push_back(Eigen::VectorXd::Constant(k, myerson_price(dist).price));
  if (n_starts > 1) {
    Eigen::VectorXd q(k);
    for (int j = 0; j < k; ++j) q(j) = dist.quantile((j + 1.0) / (k + 1.0));
    starts.push_back(q);
  }
  std::mt19937_64 rng(opts.seed);
  while (static_cast<int>(starts.size()) < n_starts) {
    Eigen::VectorXd r(k);
    for (int j = 0; j < k; ++j) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      r(j) = lo + (hi - lo) * u;
    }
    std::sort(r.data(), r.data() + k);
    starts.push_back(r);
  }
  for (const auto& extra : opts.extra_starts) {
    if (extra.size() != k) {
      throw InvalidParameter(fmt::format(
          "extra start has {} entries, expected {}", extra.size(), k));
    }
    starts.push_back(extra);
  }

  const double base_step = 1.0 / std::max(
      1e-300, sys.revenue_form().cwiseAbs().colwise().sum().maxCoeff());

  std::vector<Run> runs;
  runs.reserve(starts.size());
  for (const auto& s : starts) runs.push_back(ascend(sys, dist, s, opts, base_step));

  double best = -std::numeric_limits<double>::infinity();
  for (const auto& r : runs) best = std::max(best, r.value);
  const Run* winner = nullptr;
  for (const auto& r : runs) {
    if (r.value < best - kTieWindow) continue;
    if (winner == nullptr || lexicographically_less(r.v, winner->v)) winner = &r;
  }

  OptimizationResult result;
  result.v_star = winner->v;
  result.value = sys.revenue_functional(dist, winner->v);
  result.tree = sys.tree_from_thresholds(winner->v);
  result.iterations = winner->iterations;
  result.starts = static_cast<int>(starts.size());
  result.converged = winner->converged;
  result.kkt_residual = winner->kkt;
  result.trace = winner->trace;
  if (!result.converged) {
    result.warnings.push_back(fmt::format(
        "optimizer stopped after {} iterations with KKT residual {:.3g}",
        result.iterations, result.kkt_residual));
  }
  return result;
}

OptimizationResult maximize_revenue_functional(const ValuationDistribution& dist,
                                               const DiscountSequence& buyer,
                                               const DiscountSequence& seller,
                                               int horizon,
                                               const OptimizerOptions& opts) {
  const auto sys = ReductionSystem::build(buyer, seller, horizon);
  auto result = maximize_revenue_functional(sys, dist, opts);
  if (!rates_dominated(buyer, seller, horizon)) {
    result.warnings.insert(
        result.warnings.begin(),
        "buyer discount rates exceed the seller's; the result is optimal "
        "among completely active trees only");
  }
  return result;
}

QuadraticOptimum maximize_uniform_form(const Eigen::MatrixXd& form) {
  const auto k = static_cast<int>(form.rows());
  if (form.cols() != k || k < 1 || k > 10) {
    throw InvalidParameter("uniform form must be square with 1..10 rows");
  }
  const Eigen::MatrixXd sym = form + form.transpose();
  const Eigen::VectorXd lin = form.transpose() * Eigen::VectorXd::Ones(k);
  auto value_at = [&](const Eigen::VectorXd& v) {
    return (Eigen::VectorXd::Ones(k) - v).dot(form * v);
  };

  // Chain 0 = c_0 <= v_1 <= ... <= v_k <= c_{k+1} = 1; bit i of the mask
  // makes gap i (between c_i and c_{i+1}) active.
  QuadraticOptimum best{Eigen::VectorXd::Zero(k), 0.0};
  const std::uint32_t masks = std::uint32_t{1} << (k + 1);
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    std::vector<int> block(static_cast<std::size_t>(k + 2));
    int blocks = 0;
    for (int i = 0; i <= k + 1; ++i) {
      if (i > 0 && ((mask >> (i - 1)) & 1U)) {
        block[static_cast<std::size_t>(i)] = block[static_cast<std::size_t>(i - 1)];
      } else {
        block[static_cast<std::size_t>(i)] = blocks++;
      }
    }
    const int zero_block = block[0];
    const int one_block = block[static_cast<std::size_t>(k + 1)];
    if (zero_block == one_block) continue;

    // Free blocks become the face coordinates u; v = B u + b.
    std::vector<int> column(static_cast<std::size_t>(blocks), -1);
    int free = 0;
    for (int b = 0; b < blocks; ++b) {
      if (b != zero_block && b != one_block) column[static_cast<std::size_t>(b)] = free++;
    }
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(k, free);
    Eigen::VectorXd offset = Eigen::VectorXd::Zero(k);
    for (int i = 1; i <= k; ++i) {
      const int b = block[static_cast<std::size_t>(i)];
      if (b == one_block) {
        offset(i - 1) = 1.0;
      } else if (b != zero_block) {
        basis(i - 1, column[static_cast<std::size_t>(b)]) = 1.0;
      }
    }
    Eigen::VectorXd v = offset;
    if (free > 0) {
      const Eigen::MatrixXd h = basis.transpose() * sym * basis;
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(h);
      if (!lu.isInvertible()) continue;
      const Eigen::VectorXd u = lu.solve(basis.transpose() * (lin - sym * offset));
      v += basis * u;
    }
    bool feasible = v(0) >= -1e-12 && v(k - 1) <= 1.0 + 1e-12;
    for (int i = 1; i < k && feasible; ++i) feasible = v(i) >= v(i - 1) - 1e-12;
    if (!feasible) continue;
    v = project_to_delta(v).cwiseMin(1.0);
    const double value = value_at(v);
    if (value > best.value) best = {v, value};
  }
  return best;
}

}  // namespace postprice
