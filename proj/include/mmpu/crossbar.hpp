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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mmpu/device.hpp"
#include "mmpu/errors.hpp"

namespace mmpu {

/// Drive pattern of a stateful gate inside the array.
///
/// ColumnParallel is the textbook picture: input and output cells sit in
/// distinct rows and share a bitline per column; the gate evaluates in every
/// column of the lane mask at once. RowLocal transposes it (cells in one row,
/// distinct columns, shared wordline as the divider node) so a whole function
/// can live in a single row; lanes are then rows. The divider math is the
/// same in both.
enum class Orientation : std::uint8_t { RowLocal, ColumnParallel };

/// One gate evaluation request: which lines hold the operands and which
/// lanes evaluate in parallel.
struct GateEval {
  Orientation orientation = Orientation::ColumnParallel;
  std::vector<std::uint32_t> input_lines;
  std::uint32_t output_line = 0;
  std::vector<std::uint32_t> lane_mask;
};

/// Manufacturing-style hard fault of one cell.
enum class FaultKind : std::uint8_t { Healthy, StuckOn, StuckOff };

/// One device flip observed during eval_gate or a write.
struct SwitchEvent {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  bool from = false;
  bool to = false;
  bool is_output = false;  // intended output switch vs. input disturb
};

using SwitchEvents = std::vector<SwitchEvent>;

/// Voltage at the shared node of a MAGIC divider: the applied v_g drops
/// over the parallel combination of the input devices in series with the
/// output device. The output device sees -V_node, each input v_g - V_node.
double divider_voltage(std::span<const double> input_resistances, double r_out,
                       double v_g);

/// 2-D memristive array with per-cell parameters, gate drive voltages, and
/// optional stuck-at faults. Single-owner mutable value; distinct arrays are
/// independent.
class Crossbar {
 public:
  /// All cells start at logical 0 with identical nominal parameters.
  Crossbar(std::uint32_t rows, std::uint32_t cols,
           const DeviceParams& nominal = DeviceParams{}, double v_g = 1.0,
           double v_iso = -1.0);  // v_iso < 0 means the v_g/2 default

  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  double v_g() const { return v_g_; }
  double v_iso() const { return v_iso_; }

  const DeviceParams& params_at(std::uint32_t row, std::uint32_t col) const {
    return params_[index(row, col)];
  }
  void set_params(std::uint32_t row, std::uint32_t col, const DeviceParams& p);

  /// Re-samples every cell's parameters around `nominal` (see sample_params).
  void apply_variation(const DeviceParams& nominal, const VariationSpec& spec);

  const CellState& cell_at(std::uint32_t row, std::uint32_t col) const {
    return cells_[index(row, col)];
  }

  FaultKind fault_at(std::uint32_t row, std::uint32_t col) const {
    return faults_[index(row, col)];
  }
  /// Pins the cell to r_on / r_off; subsequent writes and gate switching are
  /// ignored for that cell. Healthy clears the pin (state keeps its value).
  void set_fault(std::uint32_t row, std::uint32_t col, FaultKind kind);

  /// Guaranteed-strong write pulse: sets the logical state unconditionally
  /// unless the cell is stuck. Returns the flip event if the state changed.
  bool force_write(std::uint32_t row, std::uint32_t col, bool bit,
                   SwitchEvents* events = nullptr);

  bool read_bit(std::uint32_t row, std::uint32_t col) const;
  std::vector<bool> read_bits(std::uint32_t row,
                              std::span<const std::uint32_t> cols) const;

  /// MAGIC gate evaluation across the lane mask. Per lane, devices are
  /// stepped simultaneously against the current divider voltage until a pass
  /// produces no switch. Unselected lanes see exactly zero disturbance
  /// (ideal V_ISO). Returns every flip, outputs and input disturbs tagged.
  SwitchEvents eval_gate(const GateEval& gate);

  /// Snapshot round-trip in the structured text format documented in
  /// docs/formats.md.
  std::string dump() const;
  static Crossbar load(const std::string& text);
  static Crossbar load_file(const std::string& path);
  void dump_file(const std::string& path) const;

 private:
  std::size_t index(std::uint32_t row, std::uint32_t col) const {
    check_bounds(row, col);
    return std::size_t(row) * cols_ + col;
  }
  void check_bounds(std::uint32_t row, std::uint32_t col) const;
  void cell_of_lane(const GateEval& gate, std::uint32_t lane,
                    std::uint32_t line, std::uint32_t& row,
                    std::uint32_t& col) const;

  std::uint32_t rows_;
  std::uint32_t cols_;
  double v_g_;
  double v_iso_;
  std::vector<CellState> cells_;     // row-major
  std::vector<DeviceParams> params_;
  std::vector<FaultKind> faults_;
};

}  // namespace mmpu
