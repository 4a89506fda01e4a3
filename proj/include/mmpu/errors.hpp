/*
 * Copyright 2026 The mmpu-sim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmpu {

/// Base class for every error raised by the toolchain.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text (trace, netlist, config). Carries a 1-based line
/// number when the source is line-oriented.
struct SyntaxError : Error {
  std::size_t line = 0;
  SyntaxError(std::size_t line_, const std::string& what_)
      : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
  explicit SyntaxError(const std::string& what_) : Error(what_) {}
};

/// An op addresses lines outside the declared array dimensions.
struct DimensionError : Error {
  using Error::Error;
};

struct IndexOutOfBounds : Error {
  using Error::Error;
};

/// divider_voltage called with no input resistances.
struct EmptyInputs : Error {
  using Error::Error;
};

/// Parameter perturbation kept violating device invariants after the
/// resample budget was exhausted.
struct SampledParamsInvalid : Error {
  using Error::Error;
};

struct UnsupportedBlifFeature : Error {
  using Error::Error;
};

struct CycleDetected : Error {
  using Error::Error;
};

/// eval_dag assignment misses a primary input.
struct MissingInput : Error {
  using Error::Error;
};

struct ArityMismatch : Error {
  using Error::Error;
};

/// The scheduler's chosen order needs more cells than the row provides.
struct RowCapacityExceeded : Error {
  std::size_t needed;
  std::size_t available;
  RowCapacityExceeded(std::size_t needed_, std::size_t available_)
      : Error("row capacity exceeded: needed " + std::to_string(needed_) +
              " cells, available " + std::to_string(available_)),
        needed(needed_),
        available(available_) {}
};

/// Strict-mode executor check: a NOR targeted a cell not holding logical 1.
struct UninitializedOutput : Error {
  std::size_t op_index;
  explicit UninitializedOutput(std::size_t op_index_)
      : Error("op " + std::to_string(op_index_) +
              ": NOR output cell is not initialized to logical 1"),
        op_index(op_index_) {}
};

struct IoError : Error {
  using Error::Error;
};

/// Config parsing: unknown key, wrong type, or invariant violation.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace mmpu
