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

#ifndef POSTPRICE_SWEEP_HPP_
#define POSTPRICE_SWEEP_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "postprice/distribution.hpp"
#include "postprice/optimizer.hpp"

namespace postprice {

/// A one-parameter family of games: one geometric rate is held fixed and
/// the other walks start, start + step, ... (count points).
struct SweepSpec {
  enum class Fixed { kSeller, kBuyer };

  Fixed fixed = Fixed::kSeller;
  double fixed_rate = 0.8;
  double start = 0.01;
  double step = 0.005;
  int count = 149;
  int horizon = 2;         // finite games, used when `taus` is empty
  std::vector<int> taus;   // infinite games solved by truncation
  ValuationDistribution dist = ValuationDistribution::uniform(0.0, 1.0);
  OptimizerOptions opts;

  /// Seller rate fixed at 0.8, buyer rate over 0.01 + 0.005 i, i < 149.
  static SweepSpec fixed_seller_grid();
  /// Buyer rate fixed at 0.2, seller rate over 0.2 + 0.005 i, i < 160.
  static SweepSpec fixed_buyer_grid();

  double rate_at(int i) const { return start + step * i; }
  /// Throws InvalidParameter when a rate leaves (0, 1) or a size is bad.
  void validate() const;
};

struct SweepRow {
  double rate = 0.0;
  std::vector<double> prices;  // finite mode, consistent node order
  std::vector<double> values;  // one per horizon/tau
  std::vector<double> ratios;
  std::vector<std::string> warnings;
};

/// Rows in grid order. Each row warm-starts from the previous optimum.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Finite mode: rate, p[<node>]..., value, ratio. Truncated mode: rate,
/// value[tau=t], ratio[tau=t] per tau. The rate column is named gb or gs.
void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows);

}  // namespace postprice

#endif  // POSTPRICE_SWEEP_HPP_
