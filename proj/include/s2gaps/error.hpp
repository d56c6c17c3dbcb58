// Copyright 2026 The s2gaps Authors
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

#ifndef S2GAPS_ERROR_HPP
#define S2GAPS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace s2gaps {

// Argument outside the mathematical domain of an operation (negative I0
// argument, non-finite J0 argument, M <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A query that needs data beyond what a table covers.
class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Requested table would not fit the memory budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative quadrature ran out of refinements. Carries the last two
// estimates so callers can judge how far off it was.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double previous, double last)
      : std::runtime_error(what), previous_(previous), last_(last) {}

  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

}  // namespace s2gaps

#endif  // S2GAPS_ERROR_HPP
