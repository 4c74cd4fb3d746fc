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

#ifndef POSTPRICE_DISTRIBUTION_HPP_
#define POSTPRICE_DISTRIBUTION_HPP_

#include <string>
#include <string_view>
#include <variant>

namespace postprice {

/// Continuous valuation distribution with bounded support in [0, inf).
///
/// Supported families and their spec strings:
///   uniform:lo,hi    U[lo, hi], 0 <= lo < hi
///   beta:a,b         Beta(a, b) on [0, 1]
///   texp:rate,upper  Exp(rate) conditioned on [0, upper], density
///                    rate e^{-rate x} / (1 - e^{-rate upper})
class ValuationDistribution {
 public:
  static ValuationDistribution uniform(double lo, double hi);
  static ValuationDistribution beta(double alpha, double beta);
  static ValuationDistribution truncated_exponential(double rate, double upper);

  /// Parses "uniform:0,1", "beta:4,2", "texp:1,1". Throws InvalidParameter.
  static ValuationDistribution parse(std::string_view spec);
  std::string spec() const;

  double cdf(double v) const;
  double pdf(double v) const;
  double mean() const;
  /// Smallest v in the support with cdf(v) >= u, by bisection.
  double quantile(double u) const;

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }

 private:
  struct Uniform {
    double lo, hi;
  };
  struct Beta {
    double alpha, beta, log_norm;
  };
  struct TruncatedExp {
    double rate, upper, mass;
  };

  explicit ValuationDistribution(std::variant<Uniform, Beta, TruncatedExp> f);

  std::variant<Uniform, Beta, TruncatedExp> family_;
  double lo_ = 0.0;
  double hi_ = 1.0;
};

/// H_D(p) = p * P[V >= p].
double static_revenue(const ValuationDistribution& dist, double price);

struct MyersonPrice {
  double price = 0.0;
  double revenue = 0.0;
};

/// Leftmost maximizer of static_revenue over the support: a uniform scan on
/// `grid_points` points, then golden-section refinement inside the bracket
/// around the best grid point down to `tolerance`.
MyersonPrice myerson_price(const ValuationDistribution& dist,
                           int grid_points = 10000, double tolerance = 1e-10);

}  // namespace postprice

#endif  // POSTPRICE_DISTRIBUTION_HPP_
