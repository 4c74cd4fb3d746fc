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

#include "postprice/discount.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include <fmt/format.h>

#include "postprice/error.hpp"

namespace postprice {

std::optional<DiscountViolation> validate_discount(
    std::span<const double> weights) {
  using Rule = DiscountViolation::Rule;
  if (weights.empty()) {
    return DiscountViolation{Rule::kEmpty, 0, "discount has no weights"};
  }
  bool seen_zero = false;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w)) {
      return DiscountViolation{Rule::kNotFinite, i,
                               fmt::format("weight {} is not finite", i)};
    }
    if (w < 0.0) {
      return DiscountViolation{
          Rule::kNegative, i, fmt::format("weight {} is negative ({})", i, w)};
    }
    if (i == 0 && w == 0.0) {
      return DiscountViolation{Rule::kFirstNotPositive, 0,
                               "first weight must be positive"};
    }
    if (w == 0.0) {
      seen_zero = true;
    } else if (seen_zero) {
      return DiscountViolation{
          Rule::kZeroBeforePositive, i,
          fmt::format("weight {} is positive after a zero weight", i)};
    }
  }
  return std::nullopt;
}

DiscountSequence DiscountSequence::finite(std::vector<double> weights) {
  if (auto violation = validate_discount(weights)) {
    throw InvalidParameter("invalid discount: " + violation->message);
  }
  DiscountSequence d;
  d.kind_ = Kind::kFinite;
  d.horizon_ = static_cast<int>(weights.size());
  d.total_ = std::accumulate(weights.begin(), weights.end(), 0.0);
  d.weights_ = std::move(weights);
  return d;
}

DiscountSequence DiscountSequence::geometric(double rate,
                                             std::optional<int> horizon) {
  if (!(rate > 0.0 && rate < 1.0)) {
    throw InvalidParameter(
        fmt::format("geometric discount rate must lie in (0,1), got {}", rate));
  }
  if (horizon && *horizon < 1) {
    throw InvalidParameter("discount horizon must be positive");
  }
  DiscountSequence d;
  d.kind_ = Kind::kGeometric;
  d.rate_ = rate;
  d.horizon_ = horizon;
  if (horizon) {
    d.weights_.resize(static_cast<std::size_t>(*horizon));
    double w = 1.0;
    for (auto& x : d.weights_) {
      x = w;
      w *= rate;
    }
    d.total_ = std::accumulate(d.weights_.begin(), d.weights_.end(), 0.0);
  } else {
    d.total_ = 1.0 / (1.0 - rate);
  }
  return d;
}

DiscountSequence make_geometric_discount(double rate,
                                         std::optional<int> horizon) {
  return DiscountSequence::geometric(rate, horizon);
}

double DiscountSequence::weight(int t) const {
  if (t < 1) throw InvalidParameter("rounds are numbered from 1");
  if (horizon_) {
    return t <= *horizon_ ? weights_[static_cast<std::size_t>(t - 1)] : 0.0;
  }
  return scale_ * std::pow(*rate_, t - 1);
}

std::span<const double> DiscountSequence::weights() const {
  if (!horizon_) {
    throw InvalidParameter("an infinite discount has no finite weight list");
  }
  return weights_;
}

double DiscountSequence::tail_sum(int from_round) const {
  if (from_round < 1) from_round = 1;
  if (horizon_) {
    double sum = 0.0;
    for (int t = from_round; t <= *horizon_; ++t) {
      sum += weights_[static_cast<std::size_t>(t - 1)];
    }
    return sum;
  }
  return scale_ * std::pow(*rate_, from_round - 1) / (1.0 - *rate_);
}

DiscountSequence DiscountSequence::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidParameter("discount scale factor must be positive");
  }
  DiscountSequence d = *this;
  d.scale_ *= c;
  d.total_ *= c;
  for (auto& w : d.weights_) w *= c;
  return d;
}

DiscountSequence DiscountSequence::normalized() const {
  return scaled(1.0 / weight(1));
}

DiscountSequence DiscountSequence::prefix(int horizon) const {
  if (horizon < 1) throw InvalidParameter("prefix horizon must be positive");
  if (horizon_ && horizon > *horizon_) {
    throw InvalidParameter(fmt::format(
        "prefix of length {} requested from a {}-round discount", horizon,
        *horizon_));
  }
  std::vector<double> w(static_cast<std::size_t>(horizon));
  for (int t = 1; t <= horizon; ++t) w[static_cast<std::size_t>(t - 1)] = weight(t);
  if (rate_ && scale_ == 1.0) return geometric(*rate_, horizon);
  return finite(std::move(w));
}

std::string DiscountSequence::describe() const {
  if (kind_ == Kind::kGeometric) {
    if (horizon_) return fmt::format("geometric({}, T={})", *rate_, *horizon_);
    return fmt::format("geometric({}, infinite)", *rate_);
  }
  return fmt::format("finite[{}]", fmt::join(weights_, ", "));
}

}  // namespace postprice
