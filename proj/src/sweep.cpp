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

#include "postprice/sweep.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "postprice/csv.hpp"
#include "postprice/error.hpp"
#include "postprice/pricing_tree.hpp"
#include "postprice/reduction.hpp"
#include "postprice/schemes.hpp"

namespace postprice {

SweepSpec SweepSpec::fixed_seller_grid() {
  SweepSpec s;
  s.fixed = Fixed::kSeller;
  s.fixed_rate = 0.8;
  s.start = 0.01;
  s.step = 0.005;
  s.count = 149;
  return s;
}

SweepSpec SweepSpec::fixed_buyer_grid() {
  SweepSpec s;
  s.fixed = Fixed::kBuyer;
  s.fixed_rate = 0.2;
  s.start = 0.2;
  s.step = 0.005;
  s.count = 160;
  return s;
}

void SweepSpec::validate() const {
  auto inside = [](double r) { return r > 0.0 && r < 1.0; };
  if (!inside(fixed_rate)) {
    throw InvalidParameter(fmt::format("fixed rate {} is outside (0, 1)", fixed_rate));
  }
  if (count < 0) throw InvalidParameter("sweep count must be non-negative");
  for (int i = 0; i < count; ++i) {
    if (!inside(rate_at(i))) {
      throw InvalidParameter(fmt::format(
          "grid point {} = {} is outside (0, 1)", i, rate_at(i)));
    }
  }
  if (taus.empty()) {
    if (horizon < 1 || horizon > kMaxReductionHorizon) {
      throw InvalidParameter(fmt::format(
          "sweep horizon must lie in [1, {}], got {}", kMaxReductionHorizon, horizon));
    }
  } else {
    for (int t : taus) {
      if (t < 1 || t > kMaxTruncationRounds) {
        throw InvalidParameter(fmt::format(
            "sweep tau must lie in [1, {}], got {}", kMaxTruncationRounds, t));
      }
    }
    if (!std::is_sorted(taus.begin(), taus.end())) {
      throw InvalidParameter("sweep taus must be ascending");
    }
  }
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const double h_star = myerson_price(spec.dist).revenue;
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(spec.count));
  Eigen::VectorXd previous;

  for (int i = 0; i < spec.count; ++i) {
    const double rate = spec.rate_at(i);
    const double gs = spec.fixed == SweepSpec::Fixed::kSeller ? spec.fixed_rate : rate;
    const double gb = spec.fixed == SweepSpec::Fixed::kSeller ? rate : spec.fixed_rate;
    SweepRow row;
    row.rate = rate;

    if (spec.taus.empty()) {
      const auto buyer = DiscountSequence::geometric(gb, spec.horizon);
      const auto seller = DiscountSequence::geometric(gs, spec.horizon);
      OptimizerOptions opts = spec.opts;
      if (previous.size() > 0) opts.extra_starts.push_back(previous);
      auto res = maximize_revenue_functional(spec.dist, buyer, seller,
                                             spec.horizon, opts);
      previous = res.v_star;
      for (const auto& node : consistent_node_order(spec.horizon)) {
        row.prices.push_back(res.tree.price(node));
      }
      row.values.push_back(res.value);
      row.ratios.push_back(res.value / (seller.total() * h_star));
      row.warnings = std::move(res.warnings);
    } else {
      const auto buyer = DiscountSequence::geometric(gb);
      const auto seller = DiscountSequence::geometric(gs);
      const auto seq = tau_step_sequence(spec.dist, buyer, seller, spec.taus, spec.opts);
      for (const auto& r : seq) {
        row.values.push_back(r.value);
        row.ratios.push_back(r.value / (seller.total() * h_star));
        for (const auto& w : r.solve.warnings) row.warnings.push_back(w);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows) {
  out << (spec.fixed == SweepSpec::Fixed::kSeller ? "gb" : "gs");
  if (spec.taus.empty()) {
    for (const auto& node : consistent_node_order(spec.horizon)) {
      out << ",p[" << node << ']';
    }
    out << ",value,ratio";
  } else {
    for (int t : spec.taus) out << ",value[tau=" << t << "],ratio[tau=" << t << ']';
  }
  out << '\n';
  for (const auto& row : rows) {
    out << format_real(row.rate);
    for (double p : row.prices) out << ',' << format_real(p);
    for (std::size_t j = 0; j < row.values.size(); ++j) {
      out << ',' << format_real(row.values[j]) << ',' << format_real(row.ratios[j]);
    }
    out << '\n';
  }
}

}  // namespace postprice
