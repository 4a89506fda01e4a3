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

#include "mmpu/isa.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "mmpu/text.hpp"

namespace mmpu {

// ---------------------------------------------------------------------------
// LaneSet

LaneSet LaneSet::of(std::initializer_list<std::uint32_t> vs) {
  return from_values(std::vector<std::uint32_t>(vs));
}

LaneSet LaneSet::from_values(const std::vector<std::uint32_t>& vs) {
  std::vector<std::uint32_t> sorted = vs;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  LaneSet out;
  for (std::uint32_t v : sorted) {
    if (!out.ranges_.empty() && out.ranges_.back().second + 1 == v)
      out.ranges_.back().second = v;
    else
      out.ranges_.push_back({v, v});
  }
  return out;
}

LaneSet LaneSet::range(std::uint32_t lo, std::uint32_t hi) {
  LaneSet out;
  if (lo <= hi) out.ranges_.push_back({lo, hi});
  return out;
}

std::optional<LaneSet> LaneSet::parse(std::string_view text) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> raw;
  for (std::string_view part : split(text, ',')) {
    part = trim(part);
    if (part.empty()) return std::nullopt;
    const std::size_t dash = part.find('-');
    std::uint32_t lo = 0, hi = 0;
    if (dash == std::string_view::npos) {
      if (!parse_u32(part, lo)) return std::nullopt;
      hi = lo;
    } else if (!parse_u32(part.substr(0, dash), lo) ||
               !parse_u32(part.substr(dash + 1), hi) || lo > hi) {
      return std::nullopt;
    }
    raw.push_back({lo, hi});
  }
  std::sort(raw.begin(), raw.end());
  LaneSet out;
  for (auto [lo, hi] : raw) {
    if (!out.ranges_.empty() && std::uint64_t(lo) <= std::uint64_t(out.ranges_.back().second) + 1)
      out.ranges_.back().second = std::max(out.ranges_.back().second, hi);
    else
      out.ranges_.push_back({lo, hi});
  }
  return out;
}

std::string LaneSet::format() const {
  std::string out;
  for (std::size_t i = 0; i < ranges_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ranges_[i].first);
    if (ranges_[i].second != ranges_[i].first)
      out += '-' + std::to_string(ranges_[i].second);
  }
  return out;
}

std::uint64_t LaneSet::count() const {
  std::uint64_t n = 0;
  for (auto [lo, hi] : ranges_) n += std::uint64_t(hi) - lo + 1;
  return n;
}

std::uint32_t LaneSet::max_value() const { return ranges_.back().second; }

bool LaneSet::contains(std::uint32_t v) const {
  for (auto [lo, hi] : ranges_)
    if (v >= lo && v <= hi) return true;
  return false;
}

std::vector<std::uint32_t> LaneSet::values() const {
  std::vector<std::uint32_t> out;
  out.reserve(count());
  for_each([&](std::uint32_t v) { out.push_back(v); });
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct FieldMap {
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t lineno;

  std::string_view get(std::string_view key) const {
    auto it = kv.find(key);
    if (it == kv.end())
      throw SyntaxError(lineno, "missing field '" + std::string(key) + "='");
    return it->second;
  }
  bool has(std::string_view key) const { return kv.count(std::string(key)) > 0; }
};

Orientation parse_orientation(std::string_view tok, std::size_t lineno) {
  if (tok == "R") return Orientation::RowLocal;
  if (tok == "C") return Orientation::ColumnParallel;
  throw SyntaxError(lineno, "expected orientation 'R' or 'C'");
}

FieldMap parse_fields(std::span<const std::string_view> toks,
                      std::size_t lineno) {
  FieldMap out;
  out.lineno = lineno;
  for (std::string_view t : toks) {
    const std::size_t eq = t.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw SyntaxError(lineno, "expected key=value, got '" + std::string(t) + "'");
    const std::string key(t.substr(0, eq));
    if (out.kv.count(key))
      throw SyntaxError(lineno, "duplicate field '" + key + "='");
    out.kv[key] = std::string(t.substr(eq + 1));
  }
  return out;
}

LaneSet parse_lane_field(const FieldMap& f, std::string_view key) {
  auto ls = LaneSet::parse(f.get(key));
  if (!ls || ls->empty())
    throw SyntaxError(f.lineno, "malformed range list in '" + std::string(key) + "='");
  return *ls;
}

std::uint32_t parse_u32_field(const FieldMap& f, std::string_view key) {
  std::uint32_t v = 0;
  if (!parse_u32(f.get(key), v))
    throw SyntaxError(f.lineno, "expected integer in '" + std::string(key) + "='");
  return v;
}

/// lanes= is the general form; `r=` (RowLocal) / `c=` (ColumnParallel) name a
/// single lane and exist because hand-written single-row ops read better.
LaneSet parse_lanes(const FieldMap& f, Orientation o) {
  const char* sugar = o == Orientation::RowLocal ? "r" : "c";
  if (f.has("lanes")) {
    if (f.has(sugar))
      throw SyntaxError(f.lineno, "give either lanes= or the single-lane shorthand, not both");
    return parse_lane_field(f, "lanes");
  }
  if (f.has(sugar)) return LaneSet::single(parse_u32_field(f, sugar));
  throw SyntaxError(f.lineno, "missing lanes= field");
}

std::vector<std::uint32_t> parse_input_list(const FieldMap& f) {
  std::vector<std::uint32_t> inputs;
  for (std::string_view part : split(f.get("in"), ',')) {
    std::uint32_t v = 0;
    if (!parse_u32(trim(part), v))
      throw SyntaxError(f.lineno, "malformed input list in 'in='");
    inputs.push_back(v);
  }
  std::sort(inputs.begin(), inputs.end());
  if (std::adjacent_find(inputs.begin(), inputs.end()) != inputs.end())
    throw SyntaxError(f.lineno, "NOR input lines must be distinct");
  return inputs;
}

void check_allowed(const FieldMap& f, std::initializer_list<std::string_view> keys) {
  for (const auto& [k, v] : f.kv) {
    bool ok = false;
    for (std::string_view a : keys) ok = ok || k == a;
    if (!ok) throw SyntaxError(f.lineno, "unknown field '" + k + "='");
  }
}

}  // namespace

Trace parse_trace(const std::string& text) {
  Trace trace;
  bool have_array = false;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;

  auto check_line = [&](std::uint32_t line_idx, std::uint32_t bound,
                        const char* what) {
    if (line_idx >= bound)
      throw DimensionError("line " + std::to_string(lineno) + ": " + what +
                           " " + std::to_string(line_idx) +
                           " exceeds array dimension " + std::to_string(bound));
  };
  auto line_bound = [&](Orientation o) {
    return o == Orientation::RowLocal ? trace.cols : trace.rows;
  };
  auto lane_bound = [&](Orientation o) {
    return o == Orientation::RowLocal ? trace.rows : trace.cols;
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;

    auto toks = tokens(line);
    const std::string_view mnemonic = toks[0];

    if (mnemonic == "ARRAY") {
      if (have_array) throw SyntaxError(lineno, "duplicate ARRAY header");
      if (toks.size() != 3 || !parse_u32(toks[1], trace.rows) ||
          !parse_u32(toks[2], trace.cols) || trace.rows < 1 || trace.cols < 1)
        throw SyntaxError(lineno, "expected 'ARRAY <rows> <cols>'");
      have_array = true;
      continue;
    }
    if (!have_array)
      throw SyntaxError(lineno, "first line must be 'ARRAY <rows> <cols>'");

    if (mnemonic == "ROW") {
      std::uint32_t r = 0;
      if (toks.size() != 2 || !parse_u32(toks[1], r))
        throw SyntaxError(lineno, "expected 'ROW <row>'");
      check_line(r, trace.rows, "row");
      trace.declared_row = r;
      continue;
    }
    if (mnemonic == "INPUTS") {
      FieldMap f = parse_fields(std::span(toks).subspan(1), lineno);
      check_allowed(f, {"c"});
      trace.declared_inputs = parse_lane_field(f, "c");
      check_line(trace.declared_inputs.max_value(), trace.cols, "input column");
      continue;
    }

    if (mnemonic == "INIT" || mnemonic == "NOR") {
      if (toks.size() < 2) throw SyntaxError(lineno, "missing orientation");
      const Orientation o = parse_orientation(toks[1], lineno);
      FieldMap f = parse_fields(std::span(toks).subspan(2), lineno);
      if (mnemonic == "INIT") {
        check_allowed(f, {"out", "lanes", "r", "c"});
        InitOp op;
        op.orientation = o;
        op.outputs = parse_lane_field(f, "out");
        op.lanes = parse_lanes(f, o);
        check_line(op.outputs.max_value(), line_bound(o), "line");
        check_line(op.lanes.max_value(), lane_bound(o), "lane");
        trace.ops.push_back(op);
      } else {
        check_allowed(f, {"in", "out", "lanes", "r", "c"});
        NorOp op;
        op.orientation = o;
        op.inputs = parse_input_list(f);
        op.output = parse_u32_field(f, "out");
        op.lanes = parse_lanes(f, o);
        if (std::binary_search(op.inputs.begin(), op.inputs.end(), op.output))
          throw SyntaxError(lineno, "NOR input lines must differ from the output line");
        check_line(op.inputs.back(), line_bound(o), "line");
        check_line(op.output, line_bound(o), "line");
        check_line(op.lanes.max_value(), lane_bound(o), "lane");
        trace.ops.push_back(op);
      }
      continue;
    }
    if (mnemonic == "WRITE") {
      FieldMap f = parse_fields(std::span(toks).subspan(1), lineno);
      check_allowed(f, {"r", "c", "v"});
      WriteOp op;
      op.row = parse_u32_field(f, "r");
      op.col = parse_u32_field(f, "c");
      const std::uint32_t v = parse_u32_field(f, "v");
      if (v > 1) throw SyntaxError(lineno, "v= must be 0 or 1");
      op.bit = v == 1;
      check_line(op.row, trace.rows, "row");
      check_line(op.col, trace.cols, "column");
      trace.ops.push_back(op);
      continue;
    }
    if (mnemonic == "READ") {
      FieldMap f = parse_fields(std::span(toks).subspan(1), lineno);
      check_allowed(f, {"r", "c"});
      ReadOp op;
      op.row = parse_u32_field(f, "r");
      op.cols = parse_lane_field(f, "c");
      check_line(op.row, trace.rows, "row");
      check_line(op.cols.max_value(), trace.cols, "column");
      trace.ops.push_back(op);
      continue;
    }
    throw SyntaxError(lineno, "unknown op '" + std::string(mnemonic) + "'");
  }
  if (!have_array) throw SyntaxError(lineno, "empty trace: missing ARRAY header");
  return trace;
}

// ---------------------------------------------------------------------------
// Emission

namespace {

const char* orient_letter(Orientation o) {
  return o == Orientation::RowLocal ? "R" : "C";
}

}  // namespace

std::string emit_trace(const Trace& trace) {
  std::ostringstream out;
  out << "ARRAY " << trace.rows << " " << trace.cols << "\n";
  if (trace.declared_row) out << "ROW " << *trace.declared_row << "\n";
  if (!trace.declared_inputs.empty())
    out << "INPUTS c=" << trace.declared_inputs.format() << "\n";
  for (const MicroOp& op : trace.ops) {
    if (const auto* init = std::get_if<InitOp>(&op)) {
      out << "INIT " << orient_letter(init->orientation) << " out="
          << init->outputs.format() << " lanes=" << init->lanes.format() << "\n";
    } else if (const auto* nor = std::get_if<NorOp>(&op)) {
      std::vector<std::uint32_t> inputs = nor->inputs;
      std::sort(inputs.begin(), inputs.end());
      out << "NOR " << orient_letter(nor->orientation) << " in=";
      for (std::size_t i = 0; i < inputs.size(); ++i)
        out << (i ? "," : "") << inputs[i];
      out << " out=" << nor->output << " lanes=" << nor->lanes.format() << "\n";
    } else if (const auto* wr = std::get_if<WriteOp>(&op)) {
      out << "WRITE r=" << wr->row << " c=" << wr->col << " v=" << (wr->bit ? 1 : 0)
          << "\n";
    } else if (const auto* rd = std::get_if<ReadOp>(&op)) {
      out << "READ r=" << rd->row << " c=" << rd->cols.format() << "\n";
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Validation

namespace {

struct CellTrack {
  std::int64_t last_init = -1;
  std::int64_t last_usedef = -1;
  bool defined = false;
};

struct CellKey {
  std::uint64_t key;
  CellKey(std::uint32_t row, std::uint32_t col)
      : key((std::uint64_t(row) << 32) | col) {}
};

class TraceChecker {
 public:
  explicit TraceChecker(const Trace& trace) : trace_(trace) {}

  ValidationReport run() {
    for (std::size_t i = 0; i < trace_.ops.size(); ++i)
      std::visit([&](const auto& op) { check(i, op); }, trace_.ops[i]);
    return std::move(report_);
  }

 private:
  using Coord = std::pair<std::uint32_t, std::uint32_t>;

  Coord coord(Orientation o, std::uint32_t lane, std::uint32_t line) const {
    return o == Orientation::RowLocal ? Coord{lane, line} : Coord{line, lane};
  }

  CellTrack& track(Coord rc) {
    return cells_[(std::uint64_t(rc.first) << 32) | rc.second];
  }

  bool is_declared_input(Coord rc) const {
    return trace_.declared_inputs.contains(rc.second);
  }

  void add(std::size_t i, ViolationKind kind, std::string msg) {
    report_.violations.push_back({i, kind, std::move(msg)});
  }

  void check_single_row(std::size_t i, Orientation o, const LaneSet& lanes) {
    if (!trace_.declared_row) return;
    if (o != Orientation::RowLocal) {
      add(i, ViolationKind::SingleRow,
          "op must be RowLocal in a single-row trace");
      return;
    }
    if (lanes.count() != 1 || lanes.max_value() != *trace_.declared_row)
      add(i, ViolationKind::SingleRow,
          "op addresses lanes outside declared row " +
              std::to_string(*trace_.declared_row));
  }

  void check(std::size_t i, const InitOp& op) {
    check_single_row(i, op.orientation, op.lanes);
    op.lanes.for_each([&](std::uint32_t lane) {
      op.outputs.for_each([&](std::uint32_t line) {
        CellTrack& t = track(coord(op.orientation, lane, line));
        t.last_init = std::int64_t(i);
        t.defined = true;
      });
    });
  }

  void check(std::size_t i, const NorOp& op) {
    check_single_row(i, op.orientation, op.lanes);
    bool structural_ok = !op.inputs.empty();
    std::set<std::uint32_t> uniq(op.inputs.begin(), op.inputs.end());
    if (uniq.size() != op.inputs.size() || uniq.count(op.output))
      structural_ok = false;
    if (!structural_ok)
      add(i, ViolationKind::Structural,
          "NOR inputs must be non-empty, distinct, and differ from the output");

    op.lanes.for_each([&](std::uint32_t lane) {
      // Inputs must hold defined values.
      for (std::uint32_t line : op.inputs) {
        const Coord rc = coord(op.orientation, lane, line);
        const CellTrack& t = track(rc);
        if (!t.defined && !is_declared_input(rc))
          add(i, ViolationKind::UseBeforeDef,
              "cell (" + std::to_string(rc.first) + "," +
                  std::to_string(rc.second) + ") read before any definition");
      }
      // Output must carry an INIT fresher than its last use or definition.
      {
        const Coord rc = coord(op.orientation, lane, op.output);
        const CellTrack& t = track(rc);
        if (t.last_init < 0 || t.last_init <= t.last_usedef)
          add(i, ViolationKind::MissingInit,
              "cell (" + std::to_string(rc.first) + "," +
                  std::to_string(rc.second) +
                  ") written by NOR without a fresh INIT");
      }
      // Apply effects after all precondition checks for this lane.
      for (std::uint32_t line : op.inputs) {
        CellTrack& t = track(coord(op.orientation, lane, line));
        t.last_usedef = std::int64_t(i);
      }
      CellTrack& t = track(coord(op.orientation, lane, op.output));
      t.last_usedef = std::int64_t(i);
      t.defined = true;
    });
  }

  void check(std::size_t i, const WriteOp& op) {
    CellTrack& t = track({op.row, op.col});
    t.last_usedef = std::int64_t(i);
    t.defined = true;
  }

  void check(std::size_t i, const ReadOp& op) {
    op.cols.for_each([&](std::uint32_t c) {
      CellTrack& t = track({op.row, c});
      if (!t.defined && !is_declared_input({op.row, c}))
        add(i, ViolationKind::UseBeforeDef,
            "cell (" + std::to_string(op.row) + "," + std::to_string(c) +
                ") read before any definition");
      t.last_usedef = std::int64_t(i);
    });
  }

  const Trace& trace_;
  std::unordered_map<std::uint64_t, CellTrack> cells_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_trace(const Trace& trace) {
  return TraceChecker(trace).run();
}

std::string ValidationReport::to_string() const {
  if (valid()) return "ok\n";
  std::ostringstream out;
  for (const Violation& v : violations) {
    const char* kind = "structural";
    switch (v.kind) {
      case ViolationKind::MissingInit: kind = "missing-init"; break;
      case ViolationKind::UseBeforeDef: kind = "use-before-def"; break;
      case ViolationKind::SingleRow: kind = "single-row"; break;
      case ViolationKind::Structural: kind = "structural"; break;
    }
    out << "op " << v.op_index << ": [" << kind << "] " << v.message << "\n";
  }
  return out.str();
}

Trace parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

void emit_trace_file(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace: " + path);
  out << emit_trace(trace);
}

}  // namespace mmpu
