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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mmpu/crossbar.hpp"
#include "mmpu/errors.hpp"

namespace mmpu {

/// Sorted set of line indices stored as merged inclusive ranges. Textual
/// form is the compact range list used by lanes=, out= and c= fields
/// ("0-5,7,9-12").
class LaneSet {
 public:
  LaneSet() = default;
  static LaneSet single(std::uint32_t v) { return of({v}); }
  static LaneSet of(std::initializer_list<std::uint32_t> vs);
  static LaneSet from_values(const std::vector<std::uint32_t>& vs);
  static LaneSet range(std::uint32_t lo, std::uint32_t hi);  // inclusive

  /// Parses "1,4-7,9". Returns std::nullopt on malformed text.
  static std::optional<LaneSet> parse(std::string_view text);
  std::string format() const;

  bool empty() const { return ranges_.empty(); }
  std::uint64_t count() const;
  std::uint32_t max_value() const;  // empty set has no max; requires !empty()
  bool contains(std::uint32_t v) const;
  std::vector<std::uint32_t> values() const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (auto [lo, hi] : ranges_)
      for (std::uint32_t v = lo;; ++v) {
        fn(v);
        if (v == hi) break;
      }
  }

  bool operator==(const LaneSet&) const = default;

  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& ranges() const {
    return ranges_;
  }

 private:
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ranges_;
};

/// Initialize cells to logical 1 (the NOR output convention). A single op
/// may target several lines; the controller drives them in one cycle.
struct InitOp {
  Orientation orientation = Orientation::RowLocal;
  LaneSet outputs;  // lines
  LaneSet lanes;
};

struct NorOp {
  Orientation orientation = Orientation::RowLocal;
  std::vector<std::uint32_t> inputs;  // lines, sorted ascending in canonical form
  std::uint32_t output = 0;
  LaneSet lanes;
};

struct WriteOp {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  bool bit = false;
};

struct ReadOp {
  std::uint32_t row = 0;
  LaneSet cols;
};

/// Every MicroOp costs exactly one controller cycle, whatever its lane or
/// target count.
using MicroOp = std::variant<InitOp, NorOp, WriteOp, ReadOp>;

struct Trace {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  /// Set for single-row compiled traces: all INIT/NOR ops are RowLocal and
  /// address only this row; the executor re-bases them onto arbitrary rows.
  std::optional<std::uint32_t> declared_row;
  /// Columns loaded externally before execution (primary inputs).
  LaneSet declared_inputs;
  std::vector<MicroOp> ops;
};

/// Uniform unit-cost accounting: one cycle per op, independent of lane
/// mask cardinality.
inline std::uint64_t cycle_count(const Trace& trace) { return trace.ops.size(); }

/// Parses the line-oriented trace grammar (see docs/formats.md). Throws
/// SyntaxError with a line number, or DimensionError when an op addresses
/// lines outside the declared array dims.
Trace parse_trace(const std::string& text);

/// Canonical textual form; parse_trace(emit_trace(t)) == t.
std::string emit_trace(const Trace& trace);

enum class ViolationKind : std::uint8_t {
  MissingInit,    // (a) NOR output cell lacks a fresh INIT
  UseBeforeDef,   // (b) op reads a never-defined cell
  SingleRow,      // (c) op escapes the declared row
  Structural,     // malformed op (e.g. NOR input equals output)
};

struct Violation {
  std::size_t op_index = 0;
  ViolationKind kind = ViolationKind::Structural;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  std::string to_string() const;
};

/// Static init-before-write / defined-use / single-row checks. A trace that
/// passes never triggers the executor's UninitializedOutput error.
ValidationReport validate_trace(const Trace& trace);

Trace parse_trace_file(const std::string& path);
void emit_trace_file(const Trace& trace, const std::string& path);

}  // namespace mmpu
