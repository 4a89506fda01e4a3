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

#include "mmpu/crossbar.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mmpu/text.hpp"

namespace mmpu {

double divider_voltage(std::span<const double> input_resistances, double r_out,
                       double v_g) {
  if (input_resistances.empty())
    throw EmptyInputs("divider_voltage: no input resistances");
  double conductance = 0.0;
  for (double r : input_resistances) {
    if (r <= 0.0) throw Error("divider_voltage: resistances must be positive");
    conductance += 1.0 / r;
  }
  if (r_out <= 0.0 || v_g <= 0.0)
    throw Error("divider_voltage: r_out and v_g must be positive");
  const double r_eq = 1.0 / conductance;
  return v_g * r_out / (r_eq + r_out);
}

Crossbar::Crossbar(std::uint32_t rows, std::uint32_t cols,
                   const DeviceParams& nominal, double v_g, double v_iso)
    : rows_(rows), cols_(cols), v_g_(v_g), v_iso_(v_iso) {
  if (rows_ < 1 || cols_ < 1) throw Error("crossbar dims must be >= 1");
  nominal.validate();
  if (v_g_ <= 0.0) throw Error("v_g must be positive");
  if (v_iso_ < 0.0) v_iso_ = v_g_ / 2.0;
  if (v_iso_ > v_g_) throw Error("v_iso must lie in [0, v_g]");
  const std::size_t n = std::size_t(rows_) * cols_;
  cells_.assign(n, CellState::from_bit(false, nominal));
  params_.assign(n, nominal);
  faults_.assign(n, FaultKind::Healthy);
}

void Crossbar::check_bounds(std::uint32_t row, std::uint32_t col) const {
  if (row >= rows_ || col >= cols_)
    throw IndexOutOfBounds("cell (" + std::to_string(row) + "," +
                           std::to_string(col) + ") outside " +
                           std::to_string(rows_) + "x" + std::to_string(cols_) +
                           " array");
}

void Crossbar::set_params(std::uint32_t row, std::uint32_t col,
                          const DeviceParams& p) {
  p.validate();
  const std::size_t i = index(row, col);
  const bool bit = cells_[i].logical(params_[i]);
  params_[i] = p;
  if (faults_[i] == FaultKind::Healthy)
    cells_[i] = CellState::from_bit(bit, p);
  else
    cells_[i] = CellState::from_bit(faults_[i] == FaultKind::StuckOn, p);
}

void Crossbar::apply_variation(const DeviceParams& nominal,
                               const VariationSpec& spec) {
  for (std::uint32_t r = 0; r < rows_; ++r)
    for (std::uint32_t c = 0; c < cols_; ++c)
      set_params(r, c, sample_params(nominal, spec, r, c));
}

void Crossbar::set_fault(std::uint32_t row, std::uint32_t col, FaultKind kind) {
  const std::size_t i = index(row, col);
  faults_[i] = kind;
  if (kind == FaultKind::StuckOn)
    cells_[i] = CellState::from_bit(true, params_[i]);
  else if (kind == FaultKind::StuckOff)
    cells_[i] = CellState::from_bit(false, params_[i]);
}

bool Crossbar::force_write(std::uint32_t row, std::uint32_t col, bool bit,
                           SwitchEvents* events) {
  const std::size_t i = index(row, col);
  if (faults_[i] != FaultKind::Healthy) return false;
  const bool old = cells_[i].logical(params_[i]);
  if (old == bit) return false;
  cells_[i] = CellState::from_bit(bit, params_[i]);
  if (events) events->push_back({row, col, old, bit, true});
  return true;
}

bool Crossbar::read_bit(std::uint32_t row, std::uint32_t col) const {
  const std::size_t i = index(row, col);
  return cells_[i].logical(params_[i]);
}

std::vector<bool> Crossbar::read_bits(
    std::uint32_t row, std::span<const std::uint32_t> cols) const {
  std::vector<bool> out;
  out.reserve(cols.size());
  for (std::uint32_t c : cols) out.push_back(read_bit(row, c));
  return out;
}

void Crossbar::cell_of_lane(const GateEval& gate, std::uint32_t lane,
                            std::uint32_t line, std::uint32_t& row,
                            std::uint32_t& col) const {
  if (gate.orientation == Orientation::RowLocal) {
    row = lane;
    col = line;
  } else {
    row = line;
    col = lane;
  }
}

SwitchEvents Crossbar::eval_gate(const GateEval& gate) {
  if (gate.input_lines.empty())
    throw Error("eval_gate: gate has no input lines");
  {
    std::set<std::uint32_t> uniq(gate.input_lines.begin(),
                                 gate.input_lines.end());
    if (uniq.size() != gate.input_lines.size() ||
        uniq.count(gate.output_line))
      throw Error("eval_gate: input lines must be distinct and differ from the output line");
  }
  const std::uint32_t line_bound =
      gate.orientation == Orientation::RowLocal ? cols_ : rows_;
  const std::uint32_t lane_bound =
      gate.orientation == Orientation::RowLocal ? rows_ : cols_;
  for (std::uint32_t l : gate.input_lines)
    if (l >= line_bound) throw IndexOutOfBounds("eval_gate: input line " + std::to_string(l));
  if (gate.output_line >= line_bound)
    throw IndexOutOfBounds("eval_gate: output line " + std::to_string(gate.output_line));
  for (std::uint32_t l : gate.lane_mask)
    if (l >= lane_bound) throw IndexOutOfBounds("eval_gate: lane " + std::to_string(l));

  SwitchEvents events;
  const std::size_t k = gate.input_lines.size();
  std::vector<double> rin(k);
  std::vector<std::size_t> in_idx(k);

  for (std::uint32_t lane : gate.lane_mask) {
    std::uint32_t row = 0, col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      cell_of_lane(gate, lane, gate.input_lines[j], row, col);
      in_idx[j] = index(row, col);
    }
    cell_of_lane(gate, lane, gate.output_line, row, col);
    const std::size_t out_idx = index(row, col);

    // Simultaneous-update fixed point: every device whose threshold the
    // current divider voltage exceeds switches in the same pass. Each device
    // moves at most once per direction, so <= k + 2 passes suffice.
    for (std::size_t pass = 0; pass <= k + 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) rin[j] = cells_[in_idx[j]].resistance;
      const double v_node = divider_voltage(rin, cells_[out_idx].resistance, v_g_);

      bool any = false;
      const StepResult out_next =
          step_state(cells_[out_idx], params_[out_idx], -v_node);
      std::vector<StepResult> in_next(k);
      for (std::size_t j = 0; j < k; ++j)
        in_next[j] =
            step_state(cells_[in_idx[j]], params_[in_idx[j]], v_g_ - v_node);

      if (out_next.switched && faults_[out_idx] == FaultKind::Healthy) {
        const bool old = cells_[out_idx].logical(params_[out_idx]);
        cells_[out_idx] = out_next.state;
        cell_of_lane(gate, lane, gate.output_line, row, col);
        events.push_back({row, col, old, !old, true});
        any = true;
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (in_next[j].switched && faults_[in_idx[j]] == FaultKind::Healthy) {
          const bool old = cells_[in_idx[j]].logical(params_[in_idx[j]]);
          cells_[in_idx[j]] = in_next[j].state;
          cell_of_lane(gate, lane, gate.input_lines[j], row, col);
          events.push_back({row, col, old, !old, false});
          any = true;
        }
      }
      if (!any) break;
    }
  }
  return events;
}

std::string Crossbar::dump() const {
  std::ostringstream out;
  out << "MMPU-ARRAY v1\n";
  out << "dims " << rows_ << " " << cols_ << "\n";
  out << "vg " << format_double(v_g_) << "\n";
  out << "viso " << format_double(v_iso_) << "\n";

  const bool uniform = std::all_of(
      params_.begin(), params_.end(), [&](const DeviceParams& p) {
        return p.r_on == params_[0].r_on && p.r_off == params_[0].r_off &&
               p.v_set == params_[0].v_set && p.v_reset == params_[0].v_reset;
      });
  auto emit_params = [&](const DeviceParams& p) {
    out << format_double(p.r_on) << " " << format_double(p.r_off) << " "
        << format_double(p.v_set) << " " << format_double(p.v_reset) << "\n";
  };
  if (uniform) {
    out << "params uniform ";
    emit_params(params_[0]);
  } else {
    out << "params grid\n";
    for (const DeviceParams& p : params_) emit_params(p);
  }

  out << "bits\n";
  for (std::uint32_t r = 0; r < rows_; ++r) {
    for (std::uint32_t c = 0; c < cols_; ++c)
      out << (read_bit(r, c) ? '1' : '0');
    out << "\n";
  }

  std::size_t n_faults = 0;
  for (FaultKind f : faults_)
    if (f != FaultKind::Healthy) ++n_faults;
  out << "faults " << n_faults << "\n";
  for (std::uint32_t r = 0; r < rows_; ++r)
    for (std::uint32_t c = 0; c < cols_; ++c) {
      const FaultKind f = faults_[std::size_t(r) * cols_ + c];
      if (f != FaultKind::Healthy)
        out << r << " " << c << " " << (f == FaultKind::StuckOn ? "on" : "off")
            << "\n";
    }
  out << "end\n";
  return out.str();
}

namespace {

struct LineReader {
  std::istringstream in;
  std::size_t lineno = 0;
  explicit LineReader(const std::string& text) : in(text) {}
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++lineno;
      std::string_view t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      line = std::string(t);
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(lineno, msg);
  }
};

DeviceParams parse_params_line(LineReader& rd,
                               std::span<const std::string_view> ts) {
  DeviceParams p;
  if (ts.size() != 4 || !parse_f64(ts[0], p.r_on) || !parse_f64(ts[1], p.r_off) ||
      !parse_f64(ts[2], p.v_set) || !parse_f64(ts[3], p.v_reset))
    rd.fail("expected 'r_on r_off v_set v_reset'");
  if (!p.ok()) rd.fail("device parameters violate invariants");
  return p;
}

}  // namespace

Crossbar Crossbar::load(const std::string& text) {
  LineReader rd(text);
  std::string line;
  if (!rd.next(line) || line != "MMPU-ARRAY v1")
    rd.fail("expected 'MMPU-ARRAY v1' header");

  std::uint32_t rows = 0, cols = 0;
  double vg = 0.0, viso = 0.0;
  {
    if (!rd.next(line)) rd.fail("missing dims");
    auto ts = tokens(line);
    if (ts.size() != 3 || ts[0] != "dims" || !parse_u32(ts[1], rows) ||
        !parse_u32(ts[2], cols) || rows < 1 || cols < 1)
      rd.fail("expected 'dims <rows> <cols>'");
    if (!rd.next(line)) rd.fail("missing vg");
    ts = tokens(line);
    if (ts.size() != 2 || ts[0] != "vg" || !parse_f64(ts[1], vg))
      rd.fail("expected 'vg <volts>'");
    if (!rd.next(line)) rd.fail("missing viso");
    ts = tokens(line);
    if (ts.size() != 2 || ts[0] != "viso" || !parse_f64(ts[1], viso))
      rd.fail("expected 'viso <volts>'");
  }

  if (!rd.next(line)) rd.fail("missing params section");
  auto ts = tokens(line);
  if (ts.empty() || ts[0] != "params") rd.fail("expected 'params'");
  std::vector<DeviceParams> grid;
  const std::size_t n = std::size_t(rows) * cols;
  if (ts.size() >= 2 && ts[1] == "uniform") {
    DeviceParams p = parse_params_line(
        rd, std::span<const std::string_view>(ts).subspan(2));
    grid.assign(n, p);
  } else if (ts.size() == 2 && ts[1] == "grid") {
    grid.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!rd.next(line)) rd.fail("params grid is short");
      auto pt = tokens(line);
      grid.push_back(parse_params_line(rd, pt));
    }
  } else {
    rd.fail("expected 'params uniform ...' or 'params grid'");
  }

  if (!rd.next(line) || line != "bits") rd.fail("expected 'bits'");
  Crossbar array(rows, cols, grid[0], vg, viso);
  for (std::size_t i = 0; i < n; ++i) array.params_[i] = grid[i];
  for (std::uint32_t r = 0; r < rows; ++r) {
    if (!rd.next(line)) rd.fail("bit matrix is short");
    if (line.size() != cols) rd.fail("bit row has wrong width");
    for (std::uint32_t c = 0; c < cols; ++c) {
      if (line[c] != '0' && line[c] != '1') rd.fail("bit rows must be 0/1");
      array.cells_[std::size_t(r) * cols + c] =
          CellState::from_bit(line[c] == '1', grid[std::size_t(r) * cols + c]);
    }
  }

  if (!rd.next(line)) rd.fail("missing faults section");
  ts = tokens(line);
  std::uint32_t n_faults = 0;
  if (ts.size() != 2 || ts[0] != "faults" || !parse_u32(ts[1], n_faults))
    rd.fail("expected 'faults <count>'");
  for (std::uint32_t i = 0; i < n_faults; ++i) {
    if (!rd.next(line)) rd.fail("fault list is short");
    ts = tokens(line);
    std::uint32_t r = 0, c = 0;
    if (ts.size() != 3 || !parse_u32(ts[0], r) || !parse_u32(ts[1], c) ||
        (ts[2] != "on" && ts[2] != "off"))
      rd.fail("expected '<row> <col> on|off'");
    if (r >= rows || c >= cols) rd.fail("fault outside array");
    array.set_fault(r, c, ts[2] == "on" ? FaultKind::StuckOn : FaultKind::StuckOff);
  }
  if (!rd.next(line) || line != "end") rd.fail("expected 'end'");
  return array;
}

Crossbar Crossbar::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open array snapshot: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load(ss.str());
}

void Crossbar::dump_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write array snapshot: " + path);
  out << dump();
}

}  // namespace mmpu
