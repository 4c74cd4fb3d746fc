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

#include "postprice/distribution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <fmt/format.h>

#include "postprice/error.hpp"

namespace postprice {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> parse_numbers(std::string_view text, std::string_view spec) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view token = text.substr(0, comma);
    double value = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (token.empty() || ec != std::errc() || ptr != end) {
      throw InvalidParameter(
          fmt::format("malformed distribution spec '{}'", spec));
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

ValuationDistribution::ValuationDistribution(
    std::variant<Uniform, Beta, TruncatedExp> f)
    : family_(f) {
  std::visit(Overloaded{
                 [this](const Uniform& u) {
                   lo_ = u.lo;
                   hi_ = u.hi;
                 },
                 [this](const Beta&) {
                   lo_ = 0.0;
                   hi_ = 1.0;
                 },
                 [this](const TruncatedExp& e) {
                   lo_ = 0.0;
                   hi_ = e.upper;
                 },
             },
             family_);
}

ValuationDistribution ValuationDistribution::uniform(double lo, double hi) {
  if (!(lo >= 0.0 && hi > lo && std::isfinite(hi))) {
    throw InvalidParameter(
        fmt::format("uniform needs 0 <= lo < hi, got [{}, {}]", lo, hi));
  }
  return ValuationDistribution(Uniform{lo, hi});
}

ValuationDistribution ValuationDistribution::beta(double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0 && std::isfinite(alpha) &&
        std::isfinite(beta))) {
    throw InvalidParameter(
        fmt::format("beta needs positive shapes, got ({}, {})", alpha, beta));
  }
  const double log_norm =
      std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
  return ValuationDistribution(Beta{alpha, beta, log_norm});
}

ValuationDistribution ValuationDistribution::truncated_exponential(
    double rate, double upper) {
  if (!(rate > 0.0 && upper > 0.0 && std::isfinite(rate) &&
        std::isfinite(upper))) {
    throw InvalidParameter(fmt::format(
        "texp needs positive rate and bound, got ({}, {})", rate, upper));
  }
  return ValuationDistribution(
      TruncatedExp{rate, upper, -std::expm1(-rate * upper)});
}

ValuationDistribution ValuationDistribution::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidParameter(
        fmt::format("malformed distribution spec '{}' (expected name:a,b)", spec));
  }
  const std::string_view name = spec.substr(0, colon);
  const auto args = parse_numbers(spec.substr(colon + 1), spec);
  if (args.size() != 2) {
    throw InvalidParameter(fmt::format(
        "distribution spec '{}' needs exactly two parameters", spec));
  }
  if (name == "uniform") return uniform(args[0], args[1]);
  if (name == "beta") return beta(args[0], args[1]);
  if (name == "texp") return truncated_exponential(args[0], args[1]);
  throw InvalidParameter(fmt::format("unknown distribution '{}'", name));
}

std::string ValuationDistribution::spec() const {
  return std::visit(
      Overloaded{
          [](const Uniform& u) { return fmt::format("uniform:{},{}", u.lo, u.hi); },
          [](const Beta& b) { return fmt::format("beta:{},{}", b.alpha, b.beta); },
          [](const TruncatedExp& e) {
            return fmt::format("texp:{},{}", e.rate, e.upper);
          },
      },
      family_);
}

double ValuationDistribution::cdf(double v) const {
  if (v <= lo_) return 0.0;
  if (v >= hi_) return 1.0;
  return std::visit(
      Overloaded{
          [v](const Uniform& u) { return (v - u.lo) / (u.hi - u.lo); },
          [v](const Beta& b) { return boost::math::ibeta(b.alpha, b.beta, v); },
          [v](const TruncatedExp& e) { return -std::expm1(-e.rate * v) / e.mass; },
      },
      family_);
}

double ValuationDistribution::pdf(double v) const {
  if (v < lo_ || v > hi_) return 0.0;
  return std::visit(
      Overloaded{
          [](const Uniform& u) { return 1.0 / (u.hi - u.lo); },
          [v](const Beta& b) {
            if (v == 0.0 || v == 1.0) {
              const double edge_shape = v == 0.0 ? b.alpha : b.beta;
              if (edge_shape < 1.0) return HUGE_VAL;
              if (edge_shape > 1.0) return 0.0;
              return std::exp(-b.log_norm);
            }
            return std::exp((b.alpha - 1.0) * std::log(v) +
                            (b.beta - 1.0) * std::log1p(-v) - b.log_norm);
          },
          [v](const TruncatedExp& e) {
            return e.rate * std::exp(-e.rate * v) / e.mass;
          },
      },
      family_);
}

double ValuationDistribution::mean() const {
  return std::visit(
      Overloaded{
          [](const Uniform& u) { return 0.5 * (u.lo + u.hi); },
          [](const Beta& b) { return b.alpha / (b.alpha + b.beta); },
          [](const TruncatedExp& e) {
            // 1/rate - upper e^{-rate upper} / (1 - e^{-rate upper})
            return 1.0 / e.rate -
                   e.upper * std::exp(-e.rate * e.upper) / e.mass;
          },
      },
      family_);
}

double ValuationDistribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw InvalidParameter("quantile level must lie in [0, 1]");
  }
  double a = lo_;
  double b = hi_;
  for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, hi_); ++i) {
    const double m = 0.5 * (a + b);
    if (cdf(m) >= u) {
      b = m;
    } else {
      a = m;
    }
  }
  return b;
}

double static_revenue(const ValuationDistribution& dist, double price) {
  if (!(price >= 0.0)) {
    throw InvalidParameter(
        fmt::format("price must be non-negative, got {}", price));
  }
  return price * (1.0 - dist.cdf(price));
}

MyersonPrice myerson_price(const ValuationDistribution& dist, int grid_points,
                           double tolerance) {
  if (grid_points < 3) throw InvalidParameter("Myerson grid needs >= 3 points");
  const double lo = dist.support_lo();
  const double hi = dist.support_hi();
  const double step = (hi - lo) / (grid_points - 1);
  const auto h = [&](double p) { return static_revenue(dist, p); };

  int best = 0;
  double best_value = h(lo);
  for (int i = 1; i < grid_points; ++i) {
    const double value = h(lo + i * step);
    if (value > best_value) {  // strict: keeps the leftmost maximizer
      best_value = value;
      best = i;
    }
  }

  // Golden-section search on the bracket around the winning grid point.
  double a = lo + std::max(best - 1, 0) * step;
  double b = lo + std::min(best + 1, grid_points - 1) * step;
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double hc = h(c);
  double hd = h(d);
  while (b - a > tolerance) {
    if (hc >= hd) {
      b = d;
      d = c;
      hd = hc;
      c = b - inv_phi * (b - a);
      hc = h(c);
    } else {
      a = c;
      c = d;
      hc = hd;
      d = a + inv_phi * (b - a);
      hd = h(d);
    }
  }
  const double refined = 0.5 * (a + b);
  const double refined_value = h(refined);
  if (refined_value >= best_value) return {refined, refined_value};
  return {lo + best * step, best_value};
}

}  // namespace postprice
