# Copyright 2026 The postprice Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Revenue-optimal pricing against a strategic buyer."""

from ._core import (  # noqa: F401
    DiscountSequence,
    Distribution,
    Error,
    InfeasiblePoint,
    InvalidParameter,
    ParseError,
    PricingTree,
    ReductionSystem,
    RegularityViolation,
    ResourceLimit,
    SingularMatrix,
    best_response,
    big_deal,
    constant_myerson,
    expected_revenue,
    myerson_price,
    optimize,
    project_to_delta,
    tau_step_optimal,
)

__version__ = "0.1.0"
