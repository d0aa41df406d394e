// Copyright 2026 The eqrate Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EQRATE_ERRORS_H_
#define EQRATE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace eqrate {

// Shapes of games, profiles or tensors disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numeric parameter is outside its admissible range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An input file or record could not be parsed or violates its schema.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Preference data does not cover every (prompt, model pair) cell.
class IncompleteDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Base for iterative routines that ran out of budget. Subclasses carry the
// last iterate.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eqrate

#endif  // EQRATE_ERRORS_H_
