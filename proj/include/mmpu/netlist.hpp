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
#include <map>
#include <string>
#include <vector>

#include "mmpu/errors.hpp"

namespace mmpu {

enum class GateKind : std::uint8_t {
  Input,
  Nor,   // k >= 1 operands; 1 operand acts as NOT
  Not,
  And,
  Or,
  Xor,
  Const0,
  Const1,
};

const char* gate_kind_name(GateKind kind);

struct GateNode {
  GateKind kind = GateKind::Input;
  std::vector<std::uint32_t> operands;
};

/// Combinational gate network. Nodes are stored in topological order:
/// operands always precede their users.
struct GateDag {
  std::vector<GateNode> nodes;
  std::vector<std::pair<std::string, std::uint32_t>> inputs;   // declaration order
  std::vector<std::pair<std::string, std::uint32_t>> outputs;

  std::uint32_t add(GateKind kind, std::vector<std::uint32_t> operands = {});
  std::size_t gate_count() const;  // nodes that are not Input/Const
  /// Structural checks: acyclic by construction, operand arity, id bounds.
  void validate() const;
};

enum class NetlistFormat : std::uint8_t { Structural, BlifSubset };

/// Parses either the one-assignment-per-line structural grammar or the
/// BLIF subset (.model/.inputs/.outputs/.names/.end, single-output covers,
/// at most 4 inputs per .names). See docs/formats.md.
GateDag parse_netlist(const std::string& text, NetlistFormat format);
GateDag parse_netlist_file(const std::string& path, NetlistFormat format);

struct LowerOptions {
  /// Maximum NOR fan-in; wider gates are split into NOR/NOT trees.
  std::uint32_t k_max = 4;
};

/// Rewrites the network to INPUT/NOR/CONST nodes only (NOT becomes a
/// 1-input NOR). Preserves input/output names and the Boolean function;
/// idempotent on NOR-only networks.
GateDag lower_to_nor(const GateDag& dag, const LowerOptions& options = {});

using Assignment = std::map<std::string, bool>;

/// Reference Boolean evaluation in topological order; the compiler's
/// correctness oracle. Throws MissingInput when the assignment is short.
Assignment eval_dag(const GateDag& dag, const Assignment& input_assignment);

/// Evaluation with inputs/outputs as bit vectors in declaration order.
std::vector<bool> eval_dag_bits(const GateDag& dag,
                                const std::vector<bool>& input_bits);

}  // namespace mmpu
