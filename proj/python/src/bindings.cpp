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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "postprice/buyer_oracle.hpp"
#include "postprice/error.hpp"
#include "postprice/optimizer.hpp"
#include "postprice/reduction.hpp"
#include "postprice/schemes.hpp"

namespace py = pybind11;
using namespace postprice;

namespace {

PricingTree tree_from_dict(const std::string& text) {
  return PricingTree::from_json(nlohmann::json::parse(text));
}

py::dict result_dict(const OptimizationResult& r) {
  py::dict d;
  d["v_star"] = r.v_star;
  d["value"] = r.value;
  d["tree"] = r.tree.to_json().dump();
  d["iterations"] = r.iterations;
  d["starts"] = r.starts;
  d["converged"] = r.converged;
  d["kkt_residual"] = r.kkt_residual;
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pricing against a strategic buyer: reduction, optimizer, schemes";

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
  py::register_exception<ResourceLimit>(m, "ResourceLimit", base.ptr());
  py::register_exception<RegularityViolation>(m, "RegularityViolation", base.ptr());
  py::register_exception<InfeasiblePoint>(m, "InfeasiblePoint", base.ptr());
  py::register_exception<SingularMatrix>(m, "SingularMatrix", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::class_<DiscountSequence>(m, "DiscountSequence")
      .def_static("finite", &DiscountSequence::finite, py::arg("weights"))
      .def_static("geometric", &DiscountSequence::geometric, py::arg("rate"),
                  py::arg("horizon") = py::none())
      .def_property_readonly("horizon", &DiscountSequence::horizon)
      .def_property_readonly("total", &DiscountSequence::total)
      .def("weight", &DiscountSequence::weight)
      .def("weights", [](const DiscountSequence& d) {
        auto w = d.weights();
        return std::vector<double>(w.begin(), w.end());
      })
      .def("tail_sum", &DiscountSequence::tail_sum)
      .def("__repr__", &DiscountSequence::describe);

  py::class_<ValuationDistribution>(m, "Distribution")
      .def_static("parse", &ValuationDistribution::parse)
      .def_property_readonly("spec", &ValuationDistribution::spec)
      .def("cdf", &ValuationDistribution::cdf)
      .def("pdf", &ValuationDistribution::pdf)
      .def("mean", &ValuationDistribution::mean)
      .def("__repr__", &ValuationDistribution::spec);

  m.def("myerson_price", [](const ValuationDistribution& d) {
    const auto r = myerson_price(d);
    return py::make_tuple(r.price, r.revenue);
  });

  py::class_<PricingTree>(m, "PricingTree")
      .def_static("constant", &PricingTree::constant)
      .def_static("from_json", &tree_from_dict, py::arg("text"))
      .def("to_json", [](const PricingTree& t) { return t.to_json().dump(); })
      .def_property_readonly("horizon", &PricingTree::horizon)
      .def("price", py::overload_cast<std::string_view>(&PricingTree::price, py::const_))
      .def("__eq__", [](const PricingTree& a, const PricingTree& b) { return a == b; });

  m.def(
      "best_response",
      [](const PricingTree& tree, double v, const DiscountSequence& buyer,
         const DiscountSequence& seller) {
        const auto br = best_response(tree, v, buyer, seller);
        py::dict d;
        d["strategy"] = br.strategy.to_string();
        d["surplus"] = br.surplus;
        d["revenue"] = br.revenue;
        d["quantity"] = br.quantity;
        return d;
      },
      py::arg("tree"), py::arg("valuation"), py::arg("buyer"), py::arg("seller"));

  m.def("expected_revenue",
        py::overload_cast<const PricingTree&, const ValuationDistribution&,
                          const DiscountSequence&, const DiscountSequence&, int>(
            &expected_strategic_revenue),
        py::arg("tree"), py::arg("dist"), py::arg("buyer"), py::arg("seller"),
        py::arg("nodes") = kDefaultQuadratureNodes);

  py::class_<ReductionSystem>(m, "ReductionSystem")
      .def_static("build", &ReductionSystem::build, py::arg("buyer"),
                  py::arg("seller"), py::arg("horizon"))
      .def_property_readonly("dimension", &ReductionSystem::dimension)
      .def_property_readonly("nodes", &ReductionSystem::nodes)
      .def_property_readonly("thresholds_map", &ReductionSystem::thresholds_map)
      .def_property_readonly("revenue_form", &ReductionSystem::revenue_form)
      .def("thresholds_from_tree", &ReductionSystem::thresholds_from_tree)
      .def("tree_from_thresholds", &ReductionSystem::tree_from_thresholds)
      .def("value", &ReductionSystem::revenue_functional)
      .def("gradient", &ReductionSystem::revenue_functional_gradient);

  m.def("project_to_delta", &project_to_delta);

  m.def(
      "optimize",
      [](const ValuationDistribution& dist, const DiscountSequence& buyer,
         const DiscountSequence& seller, int horizon, int starts,
         std::uint64_t seed) {
        OptimizerOptions o;
        o.starts = starts;
        o.seed = seed;
        return result_dict(maximize_revenue_functional(dist, buyer, seller, horizon, o));
      },
      py::arg("dist"), py::arg("buyer"), py::arg("seller"), py::arg("horizon"),
      py::arg("starts") = 0, py::arg("seed") = OptimizerOptions{}.seed);

  m.def(
      "big_deal",
      [](const ValuationDistribution& dist, const DiscountSequence& buyer,
         const DiscountSequence& seller, int depth) {
        const auto r = big_deal(dist, buyer, seller, depth);
        return py::make_tuple(r.tree, r.revenue);
      },
      py::arg("dist"), py::arg("buyer"), py::arg("seller"), py::arg("depth") = 0);

  m.def(
      "constant_myerson",
      [](const ValuationDistribution& dist, const DiscountSequence& seller, int depth) {
        const auto r = constant_myerson(dist, seller, depth);
        return py::make_tuple(r.tree, r.revenue);
      },
      py::arg("dist"), py::arg("seller"), py::arg("depth") = 0);

  m.def(
      "tau_step_optimal",
      [](const ValuationDistribution& dist, const DiscountSequence& buyer,
         const DiscountSequence& seller, int tau) {
        const auto r = tau_step_optimal(dist, buyer, seller, tau);
        py::dict d;
        d["tree"] = r.tree;
        d["value"] = r.value;
        d["opt_lower"] = r.lower_bound;
        d["opt_upper"] = r.upper_bound;
        return d;
      },
      py::arg("dist"), py::arg("buyer"), py::arg("seller"), py::arg("tau"));
}
