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

// postprice: command-line front end.
//
//   postprice myerson  <dist>
//   postprice optimize --dist D --gs R --gb R --horizon T
//   postprice sweep    --gs R | --gb R  --grid-start a --grid-step h --grid-count n
//                      (--horizon T | --tau 2,3,...)
//   postprice simulate --tree file.json --dist D --gs R --gb R [--grid n]
//   postprice bigdeal  --dist D --gs R --gb R (--horizon T | --tau t)
//   postprice truncate --dist D --gs R --gb R --tau t
//
// Every flag may also come from --config file.json (keys are the long flag
// names without dashes); flags on the command line win.
//
// Exit codes: 0 ok, 1 finished with warnings, 2 usage, 3 domain error, 4 I/O.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "postprice/buyer_oracle.hpp"
#include "postprice/csv.hpp"
#include "postprice/error.hpp"
#include "postprice/optimizer.hpp"
#include "postprice/schemes.hpp"
#include "postprice/sweep.hpp"

namespace {

using nlohmann::json;
using namespace postprice;

enum ExitCode { kOk = 0, kWarn = 1, kUsage = 2, kDomain = 3, kIo = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Effective parameters: config file first, command-line flags on top.
class Params {
 public:
  Params(const CLI::App& sub, const std::string& config_path) {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw IoError("cannot read config file " + config_path);
      try {
        values_ = json::parse(in);
      } catch (const json::parse_error& e) {
        throw UsageError(fmt::format("config {} is not valid JSON: {}", config_path, e.what()));
      }
      if (!values_.is_object()) throw UsageError("config file must hold a JSON object");
    } else {
      values_ = json::object();
    }
    for (const CLI::Option* opt : sub.get_options()) {
      if (opt->count() == 0) continue;
      const std::string name =
          opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
      if (name == "config" || name == "help") continue;
      values_[name] = opt->as<std::string>();
    }
  }

  bool has(const std::string& key) const { return values_.contains(key); }

  std::string str(const std::string& key, std::optional<std::string> fallback = {}) const {
    if (!has(key)) return require(key, fallback);
    const auto& v = values_.at(key);
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }

  double real(const std::string& key, std::optional<double> fallback = {}) const {
    if (!has(key)) return require(key, fallback);
    const auto& v = values_.at(key);
    if (v.is_number()) return v.get<double>();
    return parse_number<double>(key, v.get<std::string>());
  }

  long long integer(const std::string& key, std::optional<long long> fallback = {}) const {
    if (!has(key)) return require(key, fallback);
    const auto& v = values_.at(key);
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number()) throw UsageError("--" + key + " must be an integer");
    return parse_number<long long>(key, v.get<std::string>());
  }

  std::vector<int> int_list(const std::string& key) const {
    std::vector<int> out;
    if (!has(key)) return out;
    const auto& v = values_.at(key);
    if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_number_integer()) throw UsageError("--" + key + " entries must be integers");
        out.push_back(e.get<int>());
      }
      return out;
    }
    std::string text = v.is_string() ? v.get<std::string>() : v.dump();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      out.push_back(static_cast<int>(parse_number<long long>(key, item)));
    }
    return out;
  }

 private:
  template <typename T>
  static T require(const std::string& key, const std::optional<T>& fallback) {
    if (!fallback) throw UsageError("missing required parameter --" + key);
    return *fallback;
  }

  template <typename T>
  static T parse_number(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    T value{};
    try {
      if constexpr (std::is_floating_point_v<T>) {
        value = std::stod(text, &used);
      } else {
        value = std::stoll(text, &used);
      }
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw UsageError(fmt::format("--{}: '{}' is not a valid number", key, text));
    }
    return value;
  }

  json values_;
};

ValuationDistribution parse_dist(const std::string& spec) {
  try {
    return ValuationDistribution::parse(spec);
  } catch (const InvalidParameter& e) {
    throw UsageError(e.what());
  }
}

double rate(const Params& p, const std::string& key) {
  const double r = p.real(key);
  if (!(r > 0.0 && r < 1.0)) {
    throw UsageError(fmt::format("--{} must lie in (0, 1), got {}", key, r));
  }
  return r;
}

OptimizerOptions optimizer_options(const Params& p) {
  OptimizerOptions o;
  o.starts = static_cast<int>(p.integer("starts", 0));
  o.max_iter = static_cast<int>(p.integer("max-iter", o.max_iter));
  o.tol = p.real("tol", o.tol);
  o.seed = static_cast<std::uint64_t>(p.integer("seed", static_cast<long long>(o.seed)));
  if (o.starts < 0 || o.max_iter < 0 || !(o.tol > 0.0)) {
    throw UsageError("--starts, --max-iter must be non-negative and --tol positive");
  }
  return o;
}

json solver_json(const OptimizationResult& r, const OptimizerOptions& o) {
  return json{{"method", "projected-gradient"},
              {"starts", r.starts},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"seed", o.seed},
              {"tol", o.tol},
              {"max_iter", o.max_iter}};
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json weights_json(const DiscountSequence& d) {
  json a = json::array();
  for (double w : d.weights()) a.push_back(w);
  return a;
}

// Writes to --out when given, stdout otherwise.
void emit(const Params& p, const std::string& text) {
  const std::string path = p.str("out", std::string{});
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

int finish(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return warnings.empty() ? kOk : kWarn;
}

// Relative jitter of rounds 2..T, seeded, to break quantity collisions.
DiscountSequence jitter(const DiscountSequence& d, double eps, std::uint64_t seed) {
  if (eps == 0.0) return d;
  std::mt19937_64 rng(seed);
  std::vector<double> w(d.weights().begin(), d.weights().end());
  for (std::size_t t = 1; t < w.size(); ++t) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    w[t] *= 1.0 + eps * (2.0 * u - 1.0);
  }
  return DiscountSequence::finite(std::move(w));
}

int cmd_myerson(const Params& p) {
  // The positional spec and --dist are interchangeable.
  const auto dist = parse_dist(p.has("dist") ? p.str("dist") : p.str("spec"));
  const auto m = myerson_price(dist);
  json out{{"dist", dist.spec()}, {"price", m.price}, {"revenue", m.revenue}};
  emit(p, out.dump(2) + "\n");
  return kOk;
}

int cmd_optimize(const Params& p) {
  const auto dist = parse_dist(p.str("dist", "uniform:0,1"));
  const double gs = rate(p, "gs");
  const double gb = rate(p, "gb");
  const int horizon = static_cast<int>(p.integer("horizon", 2));
  const auto opts = optimizer_options(p);
  const double perturb = p.real("perturb", 0.0);
  if (!(perturb >= 0.0 && perturb < 1e-3)) throw UsageError("--perturb must lie in [0, 1e-3)");
  const auto buyer = jitter(DiscountSequence::geometric(gb, horizon), perturb, opts.seed);
  const auto seller = DiscountSequence::geometric(gs, horizon);
  const auto r = maximize_revenue_functional(dist, buyer, seller, horizon, opts);
  const double baseline = seller.total() * myerson_price(dist).revenue;
  json out{{"dist", dist.spec()},
           {"gs", gs},
           {"gb", gb},
           {"horizon", horizon},
           {"perturb", perturb},
           {"tree", r.tree.to_json()},
           {"v_star", vector_json(r.v_star)},
           {"value", r.value},
           {"baseline", baseline},
           {"ratio", r.value / baseline},
           {"kkt_residual", r.kkt_residual},
           {"solver", solver_json(r, opts)},
           {"warnings", r.warnings}};
  emit(p, out.dump(2) + "\n");
  return finish(r.warnings);
}

int cmd_sweep(const Params& p) {
  SweepSpec spec;
  const std::string preset = p.str("preset", std::string{});
  if (preset == "fixed-seller") {
    spec = SweepSpec::fixed_seller_grid();
  } else if (preset == "fixed-buyer") {
    spec = SweepSpec::fixed_buyer_grid();
  } else if (!preset.empty()) {
    throw UsageError("--preset must be fixed-seller or fixed-buyer");
  }
  if (p.has("gs") && p.has("gb")) throw UsageError("fix exactly one of --gs and --gb");
  if (p.has("gs")) {
    spec.fixed = SweepSpec::Fixed::kSeller;
    spec.fixed_rate = rate(p, "gs");
  } else if (p.has("gb")) {
    spec.fixed = SweepSpec::Fixed::kBuyer;
    spec.fixed_rate = rate(p, "gb");
  } else if (preset.empty()) {
    throw UsageError("fix one of --gs and --gb (or pick a --preset)");
  }
  spec.start = p.real("grid-start", spec.start);
  spec.step = p.real("grid-step", spec.step);
  spec.count = static_cast<int>(p.integer("grid-count", spec.count));
  spec.horizon = static_cast<int>(p.integer("horizon", spec.horizon));
  spec.taus = p.int_list("tau");
  spec.dist = parse_dist(p.str("dist", "uniform:0,1"));
  spec.opts = optimizer_options(p);
  try {
    spec.validate();
  } catch (const InvalidParameter& e) {
    throw UsageError(e.what());
  }
  const auto rows = run_sweep(spec);
  std::ostringstream csv;
  write_sweep_csv(csv, spec, rows);
  emit(p, csv.str());
  std::vector<std::string> warnings;
  for (const auto& row : rows) {
    for (const auto& w : row.warnings) {
      warnings.push_back(fmt::format("rate {}: {}", format_real(row.rate), w));
    }
  }
  return finish(warnings);
}

PricingTree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read tree file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("", fmt::format("tree file {} is not valid JSON: {}", path, e.what()));
  }
  return PricingTree::from_json(doc);
}

// Geometric discount over the tree's rounds; with --tail the last round
// carries the infinite tail.
DiscountSequence game_discount(double r, int rounds, bool tail) {
  if (!tail) return DiscountSequence::geometric(r, rounds);
  const auto inf = DiscountSequence::geometric(r);
  return truncate(inf, inf, rounds).buyer;
}

int cmd_simulate(const Params& p) {
  const auto tree = load_tree(p.str("tree"));
  const auto dist = parse_dist(p.str("dist", "uniform:0,1"));
  const double gs = rate(p, "gs");
  const double gb = rate(p, "gb");
  const int grid = static_cast<int>(p.integer("grid", 101));
  const bool tail = p.str("tail", "false") == "true";
  if (grid < 2) throw UsageError("--grid needs at least 2 points");
  const auto buyer = game_discount(gb, tree.horizon(), tail);
  const auto seller = game_discount(gs, tree.horizon(), tail);

  std::vector<double> vs(static_cast<std::size_t>(grid));
  const double lo = dist.support_lo();
  const double hi = dist.support_hi();
  for (int i = 0; i < grid; ++i) {
    vs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (grid - 1);
  }
  const auto curve = strategic_revenue_curve(tree, buyer, seller, vs);
  const double expected = expected_strategic_revenue(tree, dist, buyer, seller);
  std::ostringstream csv;
  write_curve_csv(csv, curve);
  csv << "# expected_revenue," << format_real(expected) << '\n';
  emit(p, csv.str());
  return kOk;
}

int cmd_bigdeal(const Params& p) {
  const auto dist = parse_dist(p.str("dist", "uniform:0,1"));
  const double gs = rate(p, "gs");
  const double gb = rate(p, "gb");
  std::optional<DiscountSequence> buyer;
  std::optional<DiscountSequence> seller;
  int depth = 0;
  if (p.has("horizon")) {
    depth = static_cast<int>(p.integer("horizon"));
    buyer = DiscountSequence::geometric(gb, depth);
    seller = DiscountSequence::geometric(gs, depth);
  } else {
    depth = static_cast<int>(p.integer("tau", 12));
    buyer = DiscountSequence::geometric(gb);
    seller = DiscountSequence::geometric(gs);
  }
  const auto deal = big_deal(dist, *buyer, *seller, depth);
  const auto constant = constant_myerson(dist, *seller, depth);
  json out{{"dist", dist.spec()},
           {"gs", gs},
           {"gb", gb},
           {"infinite", !p.has("horizon")},
           {"tree", deal.tree.to_json()},
           {"revenue", deal.revenue},
           {"constant_revenue", constant.revenue},
           {"ratio", deal.revenue / constant.revenue},
           {"warnings", deal.warnings}};
  emit(p, out.dump(2) + "\n");
  return finish(deal.warnings);
}

int cmd_truncate(const Params& p) {
  const auto dist = parse_dist(p.str("dist", "uniform:0,1"));
  const double gs = rate(p, "gs");
  const double gb = rate(p, "gb");
  const int tau = static_cast<int>(p.integer("tau"));
  const auto opts = optimizer_options(p);
  const auto buyer = DiscountSequence::geometric(gb);
  const auto seller = DiscountSequence::geometric(gs);
  const auto game = truncate(buyer, seller, tau);
  const auto r = tau_step_optimal(dist, buyer, seller, tau, opts);
  json out{{"dist", dist.spec()},
           {"gs", gs},
           {"gb", gb},
           {"tau", tau},
           {"buyer", weights_json(game.buyer)},
           {"seller", weights_json(game.seller)},
           {"seller_tail", game.seller_tail},
           {"tail_bound", game.tail_bound(dist)},
           {"tree", r.tree.to_json()},
           {"value", r.value},
           {"opt_lower", r.lower_bound},
           {"opt_upper", r.upper_bound},
           {"solver", solver_json(r.solve, opts)},
           {"warnings", r.solve.warnings}};
  emit(p, out.dump(2) + "\n");
  return finish(r.solve.warnings);
}

void add_common(CLI::App* sub, std::string* config) {
  sub->add_option("--config", *config, "JSON file with default flag values");
  sub->add_option("--out", "Output path (stdout when omitted)");
  sub->add_option("--dist", "Valuation distribution, e.g. uniform:0,1, beta:4,2, texp:1,1");
}

void add_rates(CLI::App* sub) {
  sub->add_option("--gs", "Seller discount rate in (0, 1)");
  sub->add_option("--gb", "Buyer discount rate in (0, 1)");
}

void add_solver(CLI::App* sub) {
  sub->add_option("--seed", "Seed for random starts");
  sub->add_option("--starts", "Number of starts (default max(16, 4k))");
  sub->add_option("--max-iter", "Iteration cap per start");
  sub->add_option("--tol", "Projected-gradient tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Revenue-optimal pricing against a strategic buyer"};
  app.require_subcommand(1);
  std::string config;

  auto* myerson = app.add_subcommand("myerson", "Myerson price and static revenue");
  add_common(myerson, &config);
  myerson->add_option("spec", "Distribution (same as --dist)");

  auto* optimize = app.add_subcommand("optimize", "Optimal completely active tree");
  add_common(optimize, &config);
  add_rates(optimize);
  add_solver(optimize);
  optimize->add_option("--horizon", "Number of rounds T (1..6)");
  optimize->add_option("--perturb", "Relative jitter of buyer weights (restores regularity)");

  auto* sweep = app.add_subcommand("sweep", "Optimize over a grid of discount rates");
  add_common(sweep, &config);
  add_rates(sweep);
  add_solver(sweep);
  sweep->add_option("--horizon", "Rounds of the finite game");
  sweep->add_option("--tau", "Comma-separated truncation rounds (infinite games)");
  sweep->add_option("--grid-start", "First value of the varying rate");
  sweep->add_option("--grid-step", "Grid spacing");
  sweep->add_option("--grid-count", "Number of grid points");
  sweep->add_option("--preset", "fixed-seller or fixed-buyer grid");

  auto* simulate = app.add_subcommand("simulate", "Best responses against a tree file");
  add_common(simulate, &config);
  add_rates(simulate);
  simulate->add_option("--tree", "Pricing tree JSON file");
  simulate->add_option("--grid", "Number of valuation grid points");
  simulate->add_flag("--tail", "Last round carries the infinite discount tail");

  auto* bigdeal = app.add_subcommand("bigdeal", "Big-deal pricing and its revenue");
  add_common(bigdeal, &config);
  add_rates(bigdeal);
  bigdeal->add_option("--horizon", "Finite number of rounds");
  bigdeal->add_option("--tau", "Tree depth for the infinite game (default 12)");

  auto* trunc = app.add_subcommand("truncate", "Tau-step optimum with bounds");
  add_common(trunc, &config);
  add_rates(trunc);
  add_solver(trunc);
  trunc->add_option("--tau", "Truncation round (1..6)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    Params params(*sub, config);
    const std::string name = sub->get_name();
    if (name == "myerson") return cmd_myerson(params);
    if (name == "optimize") return cmd_optimize(params);
    if (name == "sweep") return cmd_sweep(params);
    if (name == "simulate") return cmd_simulate(params);
    if (name == "bigdeal") return cmd_bigdeal(params);
    return cmd_truncate(params);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const postprice::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  }
}
