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

#ifndef POSTPRICE_DISCOUNT_HPP_
#define POSTPRICE_DISCOUNT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace postprice {

/// Per-round utility weights of one player. Rounds are numbered from 1.
///
/// Two kinds exist: an explicit finite list of weights, and a geometric
/// sequence rate^(t-1) that is either truncated at a horizon or infinite.
/// Infinite sequences never materialize their weights; they only answer
/// point queries and (tail) sums in closed form.
class DiscountSequence {
 public:
  enum class Kind { kFinite, kGeometric };

  /// Throws InvalidParameter if `weights` fails validate_discount().
  static DiscountSequence finite(std::vector<double> weights);

  /// `horizon == nullopt` means an infinite game. Throws InvalidParameter
  /// unless 0 < rate < 1 and horizon >= 1.
  static DiscountSequence geometric(double rate,
                                    std::optional<int> horizon = std::nullopt);

  Kind kind() const { return kind_; }
  bool is_finite() const { return horizon_.has_value(); }
  std::optional<int> horizon() const { return horizon_; }
  /// Geometric rate, when the sequence was built from one.
  std::optional<double> rate() const { return rate_; }

  /// Weight of round t >= 1 (zero past a finite horizon).
  double weight(int t) const;
  /// Materialized weights; throws InvalidParameter for infinite sequences.
  std::span<const double> weights() const;

  /// Sum of all weights (exact closed form for the infinite geometric kind).
  double total() const { return total_; }
  /// Sum of the weights of rounds t >= from_round.
  double tail_sum(int from_round) const;

  /// Rescaled so that the first weight is 1.
  DiscountSequence normalized() const;
  /// Every weight multiplied by c > 0.
  DiscountSequence scaled(double c) const;

  /// Weights for rounds 1..horizon as a finite sequence (for finite inputs
  /// the horizon must not exceed the own horizon).
  DiscountSequence prefix(int horizon) const;

  std::string describe() const;

 private:
  DiscountSequence() = default;

  Kind kind_ = Kind::kFinite;
  std::optional<int> horizon_;
  std::optional<double> rate_;
  double scale_ = 1.0;
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// Creates the geometric sequence 1, rate, rate^2, ...
DiscountSequence make_geometric_discount(double rate,
                                         std::optional<int> horizon);

struct DiscountViolation {
  enum class Rule {
    kEmpty,
    kNotFinite,
    kNegative,
    kZeroBeforePositive,
    kFirstNotPositive,
  };
  Rule rule;
  // 0-based index of the weight that breaks the rule.
  std::size_t index;
  std::string message;
};

/// Checks the weight-list rules: non-empty, finite values, non-negative,
/// strictly positive first weight (so normalization to 1 is possible), and
/// no positive weight after a zero. Reports the first violation found.
std::optional<DiscountViolation> validate_discount(
    std::span<const double> weights);

}  // namespace postprice

#endif  // POSTPRICE_DISCOUNT_HPP_
