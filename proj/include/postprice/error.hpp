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

#ifndef POSTPRICE_ERROR_HPP_
#define POSTPRICE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace postprice {

// Base of every error raised by the library. Callers that only care about
// "domain failure vs. success" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Raised when an exhaustive computation would exceed its enumeration guard.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// Two buyer strategies share the same discounted quantity.
class RegularityViolation : public Error {
 public:
  RegularityViolation(std::string first, std::string second, double quantity)
      : Error("buyer discount is not regular: strategies " + first + " and " +
              second + " have equal discounted quantity"),
        first_(std::move(first)),
        second_(std::move(second)),
        quantity_(quantity) {}

  const std::string& first() const { return first_; }
  const std::string& second() const { return second_; }
  double quantity() const { return quantity_; }

 private:
  std::string first_;
  std::string second_;
  double quantity_;
};

// A threshold vector maps to a tree with a negative price.
class InfeasiblePoint : public Error {
 public:
  InfeasiblePoint(std::string node, double price)
      : Error("threshold vector maps to a negative price " +
              std::to_string(price) + " at node '" + node + "'"),
        node_(std::move(node)),
        price_(price) {}

  const std::string& node() const { return node_; }
  double price() const { return price_; }

 private:
  std::string node_;
  double price_;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

// Schema violation in a serialized document; `pointer` is an RFC 6901 JSON
// pointer to the offending value.
class ParseError : public Error {
 public:
  ParseError(std::string pointer, const std::string& what)
      : Error(what + " (at '" + pointer + "')"), pointer_(std::move(pointer)) {}

  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace postprice

#endif  // POSTPRICE_ERROR_HPP_
