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

#include "mmpu/netlist.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "mmpu/text.hpp"

namespace mmpu {

const char* gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::Input: return "INPUT";
    case GateKind::Nor: return "NOR";
    case GateKind::Not: return "NOT";
    case GateKind::And: return "AND";
    case GateKind::Or: return "OR";
    case GateKind::Xor: return "XOR";
    case GateKind::Const0: return "CONST0";
    case GateKind::Const1: return "CONST1";
  }
  return "?";
}

std::uint32_t GateDag::add(GateKind kind, std::vector<std::uint32_t> operands) {
  nodes.push_back({kind, std::move(operands)});
  return std::uint32_t(nodes.size() - 1);
}

std::size_t GateDag::gate_count() const {
  std::size_t n = 0;
  for (const GateNode& node : nodes)
    if (node.kind != GateKind::Input && node.kind != GateKind::Const0 &&
        node.kind != GateKind::Const1)
      ++n;
  return n;
}

void GateDag::validate() const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const GateNode& n = nodes[i];
    for (std::uint32_t op : n.operands)
      if (op >= i)
        throw Error("netlist node " + std::to_string(i) +
                    " uses operand " + std::to_string(op) +
                    " that does not precede it");
    const std::size_t arity = n.operands.size();
    bool ok = true;
    switch (n.kind) {
      case GateKind::Input:
      case GateKind::Const0:
      case GateKind::Const1: ok = arity == 0; break;
      case GateKind::Not: ok = arity == 1; break;
      case GateKind::Nor: ok = arity >= 1; break;
      case GateKind::And:
      case GateKind::Or:
      case GateKind::Xor: ok = arity >= 2; break;
    }
    if (!ok)
      throw Error(std::string("netlist node ") + std::to_string(i) + " (" +
                  gate_kind_name(n.kind) + ") has arity " +
                  std::to_string(arity));
  }
  auto check_ref = [&](const std::pair<std::string, std::uint32_t>& p) {
    if (p.second >= nodes.size())
      throw Error("netlist name '" + p.first + "' references a missing node");
  };
  for (const auto& p : inputs) {
    check_ref(p);
    if (nodes[p.second].kind != GateKind::Input)
      throw Error("netlist input '" + p.first + "' is not an INPUT node");
  }
  for (const auto& p : outputs) check_ref(p);
}

// ---------------------------------------------------------------------------
// Structural format

namespace {

bool is_ident(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(std::uint8_t(s[0])) || s[0] == '_')) return false;
  for (char ch : s)
    if (!(std::isalnum(std::uint8_t(ch)) || ch == '_')) return false;
  return true;
}

struct StructuralAssign {
  std::size_t lineno;
  std::string target;
  GateKind kind;
  std::vector<std::string> args;
};

GateKind op_kind(std::string_view op, std::size_t lineno) {
  if (op == "NOR") return GateKind::Nor;
  if (op == "NOT") return GateKind::Not;
  if (op == "AND") return GateKind::And;
  if (op == "OR") return GateKind::Or;
  if (op == "XOR") return GateKind::Xor;
  if (op == "CONST0") return GateKind::Const0;
  if (op == "CONST1") return GateKind::Const1;
  throw SyntaxError(lineno, "unknown gate '" + std::string(op) + "'");
}

GateDag parse_structural(const std::string& text) {
  std::vector<std::string> declared_inputs;
  std::vector<std::string> declared_outputs;
  std::vector<StructuralAssign> assigns;

  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;

    auto toks = tokens(line);
    if (toks[0] == "INPUT" || toks[0] == "OUTPUT") {
      if (toks.size() < 2)
        throw SyntaxError(lineno, std::string(toks[0]) + " needs at least one name");
      auto& dst = toks[0] == "INPUT" ? declared_inputs : declared_outputs;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (!is_ident(toks[i]))
          throw SyntaxError(lineno, "bad identifier '" + std::string(toks[i]) + "'");
        dst.emplace_back(toks[i]);
      }
      continue;
    }

    // name = OP(arg, ...)
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw SyntaxError(lineno, "expected 'name = OP(args)' or INPUT/OUTPUT line");
    const std::string_view target = trim(line.substr(0, eq));
    if (!is_ident(target)) throw SyntaxError(lineno, "bad signal name '" + std::string(target) + "'");
    std::string_view rhs = trim(line.substr(eq + 1));
    const std::size_t open = rhs.find('(');
    if (open == std::string_view::npos || rhs.back() != ')')
      throw SyntaxError(lineno, "expected gate call 'OP(args)'");
    const GateKind kind = op_kind(trim(rhs.substr(0, open)), lineno);
    const std::string_view arg_text = rhs.substr(open + 1, rhs.size() - open - 2);

    StructuralAssign a{lineno, std::string(target), kind, {}};
    if (!trim(arg_text).empty()) {
      for (std::string_view part : split(arg_text, ',')) {
        part = trim(part);
        if (!is_ident(part))
          throw SyntaxError(lineno, "bad operand '" + std::string(part) + "'");
        a.args.emplace_back(part);
      }
    }
    assigns.push_back(std::move(a));
  }

  // Signals never assigned and never declared INPUT are implicit inputs, in
  // first-reference order.
  std::set<std::string> assigned;
  for (const auto& a : assigns) {
    if (!assigned.insert(a.target).second)
      throw SyntaxError(a.lineno, "signal '" + a.target + "' assigned twice");
  }
  std::vector<std::string> input_order = declared_inputs;
  std::set<std::string> input_set(declared_inputs.begin(), declared_inputs.end());
  for (const auto& name : declared_inputs)
    if (assigned.count(name))
      throw SyntaxError(0, "signal '" + name + "' is both INPUT and assigned");
  for (const auto& a : assigns)
    for (const auto& arg : a.args)
      if (!assigned.count(arg) && input_set.insert(arg).second)
        input_order.push_back(arg);

  GateDag dag;
  std::map<std::string, std::uint32_t> ids;
  for (const auto& name : input_order) {
    const std::uint32_t id = dag.add(GateKind::Input);
    ids[name] = id;
    dag.inputs.push_back({name, id});
  }

  // Round-based resolution tolerates any definition order and detects cycles.
  std::vector<bool> done(assigns.size(), false);
  std::size_t remaining = assigns.size();
  while (remaining > 0) {
    bool progressed = false;
    for (std::size_t i = 0; i < assigns.size(); ++i) {
      if (done[i]) continue;
      const StructuralAssign& a = assigns[i];
      std::vector<std::uint32_t> operands;
      bool ready = true;
      for (const auto& arg : a.args) {
        auto it = ids.find(arg);
        if (it == ids.end()) {
          ready = false;
          break;
        }
        operands.push_back(it->second);
      }
      if (!ready) continue;
      const std::size_t arity = operands.size();
      const bool arity_ok =
          (a.kind == GateKind::Not && arity == 1) ||
          (a.kind == GateKind::Nor && arity >= 1) ||
          ((a.kind == GateKind::And || a.kind == GateKind::Or ||
            a.kind == GateKind::Xor) && arity >= 2) ||
          ((a.kind == GateKind::Const0 || a.kind == GateKind::Const1) && arity == 0);
      if (!arity_ok)
        throw SyntaxError(a.lineno, std::string(gate_kind_name(a.kind)) +
                                        " has wrong operand count");
      ids[a.target] = dag.add(a.kind, std::move(operands));
      done[i] = true;
      --remaining;
      progressed = true;
    }
    if (!progressed) {
      // Either an undefined name or a combinational cycle.
      for (std::size_t i = 0; i < assigns.size(); ++i) {
        if (done[i]) continue;
        for (const auto& arg : assigns[i].args)
          if (!assigned.count(arg) && !input_set.count(arg))
            throw SyntaxError(assigns[i].lineno, "undefined signal '" + arg + "'");
      }
      throw CycleDetected("netlist contains a combinational cycle");
    }
  }

  if (declared_outputs.empty()) {
    // Default outputs: assignment targets nobody reads, in definition order.
    std::set<std::string> read;
    for (const auto& a : assigns)
      for (const auto& arg : a.args) read.insert(arg);
    for (const auto& a : assigns)
      if (!read.count(a.target)) declared_outputs.push_back(a.target);
  }
  if (declared_outputs.empty())
    throw SyntaxError(0, "netlist has no outputs");
  std::set<std::string> seen_out;
  for (const auto& name : declared_outputs) {
    auto it = ids.find(name);
    if (it == ids.end())
      throw SyntaxError(0, "OUTPUT '" + name + "' is never defined");
    if (!seen_out.insert(name).second)
      throw SyntaxError(0, "OUTPUT '" + name + "' listed twice");
    dag.outputs.push_back({name, it->second});
  }
  dag.validate();
  return dag;
}

// ---------------------------------------------------------------------------
// BLIF subset

struct BlifNames {
  std::size_t lineno;
  std::vector<std::string> args;
  std::string target;
  std::vector<std::string> cover;  // rows "<k literals> <polarity>"
};

GateDag parse_blif(const std::string& text) {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<BlifNames> names;
  BlifNames* open_names = nullptr;

  std::istringstream in(text);
  std::string raw;
  std::string logical;
  std::size_t lineno = 0;
  std::size_t logical_start = 0;

  auto handle = [&](std::string_view line, std::size_t at) {
    auto toks = tokens(line);
    if (toks.empty()) return;
    const std::string_view head = toks[0];
    if (head[0] == '.') {
      open_names = nullptr;
      if (head == ".model") return;
      if (head == ".end") return;
      if (head == ".inputs" || head == ".outputs") {
        auto& dst = head == ".inputs" ? inputs : outputs;
        for (std::size_t i = 1; i < toks.size(); ++i) dst.emplace_back(toks[i]);
        return;
      }
      if (head == ".names") {
        if (toks.size() < 2) throw SyntaxError(at, ".names needs a target");
        BlifNames n;
        n.lineno = at;
        for (std::size_t i = 1; i + 1 < toks.size(); ++i)
          n.args.emplace_back(toks[i]);
        n.target = std::string(toks.back());
        if (n.args.size() > 4)
          throw UnsupportedBlifFeature(
              ".names with " + std::to_string(n.args.size()) +
              " inputs (this reader supports at most 4)");
        names.push_back(std::move(n));
        open_names = &names.back();
        return;
      }
      if (head == ".latch")
        throw UnsupportedBlifFeature("sequential elements (.latch)");
      if (head == ".i" || head == ".o" || head == ".p" || head == ".ilb" ||
          head == ".ob")
        throw UnsupportedBlifFeature("PLA input (" + std::string(head) + ")");
      throw UnsupportedBlifFeature("directive " + std::string(head));
    }
    // Cover row.
    if (!open_names) throw SyntaxError(at, "cover row outside .names");
    std::string row;
    for (auto t : toks) row += std::string(t) + " ";
    if (!row.empty()) row.pop_back();
    open_names->cover.push_back(row);
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (logical.empty()) logical_start = lineno;
    if (line.back() == '\\') {
      logical += std::string(line.substr(0, line.size() - 1)) + " ";
      continue;
    }
    logical += std::string(line);
    handle(logical, logical_start);
    logical.clear();
  }
  if (!logical.empty()) handle(logical, logical_start);

  if (inputs.empty() && outputs.empty() && names.empty())
    throw SyntaxError(lineno, "empty BLIF model");

  GateDag dag;
  std::map<std::string, std::uint32_t> ids;
  std::set<std::string> input_set;
  for (const auto& name : inputs) {
    if (!input_set.insert(name).second)
      throw SyntaxError(0, ".inputs lists '" + name + "' twice");
    const std::uint32_t id = dag.add(GateKind::Input);
    ids[name] = id;
    dag.inputs.push_back({name, id});
  }
  std::set<std::string> targets;
  for (const auto& n : names) {
    if (input_set.count(n.target))
      throw SyntaxError(n.lineno, "'" + n.target + "' is a primary input");
    if (!targets.insert(n.target).second)
      throw SyntaxError(n.lineno, "'" + n.target + "' has two .names blocks");
  }

  // Truth table of one cover, then an SOP expression over resolved operands.
  auto build_expr = [&](const BlifNames& n,
                        const std::vector<std::uint32_t>& ops) -> std::uint32_t {
    const std::size_t k = n.args.size();
    const std::size_t rows = std::size_t(1) << k;
    std::vector<bool> tt(rows, false);
    int polarity = -1;
    for (const std::string& row_text : n.cover) {
      auto parts = tokens(row_text);
      std::string_view lits;
      std::string_view out_bit;
      if (k == 0) {
        if (parts.size() != 1) throw SyntaxError(n.lineno, "bad cover row");
        out_bit = parts[0];
      } else {
        if (parts.size() != 2) throw SyntaxError(n.lineno, "bad cover row");
        lits = parts[0];
        out_bit = parts[1];
      }
      if (lits.size() != k) throw SyntaxError(n.lineno, "cover row width mismatch");
      if (out_bit != "0" && out_bit != "1")
        throw SyntaxError(n.lineno, "cover output must be 0 or 1");
      const int pol = out_bit == "1" ? 1 : 0;
      if (polarity >= 0 && polarity != pol)
        throw SyntaxError(n.lineno, "cover mixes on-set and off-set rows");
      polarity = pol;
      // Expand don't-cares.
      std::vector<std::size_t> minterms{0};
      for (std::size_t i = 0; i < k; ++i) {
        const char ch = lits[i];
        if (ch != '0' && ch != '1' && ch != '-')
          throw SyntaxError(n.lineno, "cover literals must be 0, 1 or -");
        std::vector<std::size_t> next;
        for (std::size_t m : minterms) {
          if (ch == '0' || ch == '-') next.push_back(m);
          if (ch == '1' || ch == '-') next.push_back(m | (std::size_t(1) << i));
        }
        minterms = std::move(next);
      }
      for (std::size_t m : minterms) tt[m] = true;
    }
    if (n.cover.empty()) polarity = 1;  // empty cover: constant 0
    if (polarity == 0)
      for (std::size_t m = 0; m < rows; ++m) tt[m] = !tt[m];

    const bool all0 = std::none_of(tt.begin(), tt.end(), [](bool b) { return b; });
    const bool all1 = std::all_of(tt.begin(), tt.end(), [](bool b) { return b; });
    if (all0) return dag.add(GateKind::Const0);
    if (all1) return dag.add(GateKind::Const1);

    // Single-literal functions become wires / NOT gates.
    for (std::size_t i = 0; i < k; ++i) {
      bool is_var = true, is_nvar = true;
      for (std::size_t m = 0; m < rows; ++m) {
        const bool bit = (m >> i) & 1;
        if (tt[m] != bit) is_var = false;
        if (tt[m] != !bit) is_nvar = false;
      }
      if (is_var) return ops[i];
      if (is_nvar) return dag.add(GateKind::Not, {ops[i]});
    }

    std::vector<std::uint32_t> terms;
    for (std::size_t m = 0; m < rows; ++m) {
      if (!tt[m]) continue;
      std::vector<std::uint32_t> lits_ids;
      for (std::size_t i = 0; i < k; ++i) {
        const bool bit = (m >> i) & 1;
        lits_ids.push_back(bit ? ops[i] : dag.add(GateKind::Not, {ops[i]}));
      }
      terms.push_back(lits_ids.size() == 1 ? lits_ids[0]
                                           : dag.add(GateKind::And, lits_ids));
    }
    return terms.size() == 1 ? terms[0] : dag.add(GateKind::Or, terms);
  };

  std::vector<bool> done(names.size(), false);
  std::size_t remaining = names.size();
  while (remaining > 0) {
    bool progressed = false;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (done[i]) continue;
      std::vector<std::uint32_t> ops;
      bool ready = true;
      for (const auto& arg : names[i].args) {
        auto it = ids.find(arg);
        if (it == ids.end()) {
          ready = false;
          break;
        }
        ops.push_back(it->second);
      }
      if (!ready) continue;
      ids[names[i].target] = build_expr(names[i], ops);
      done[i] = true;
      --remaining;
      progressed = true;
    }
    if (!progressed) {
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (done[i]) continue;
        for (const auto& arg : names[i].args)
          if (!targets.count(arg) && !input_set.count(arg))
            throw SyntaxError(names[i].lineno, "undefined signal '" + arg + "'");
      }
      throw CycleDetected("BLIF model contains a combinational cycle");
    }
  }

  if (outputs.empty()) throw SyntaxError(0, "BLIF model declares no .outputs");
  std::set<std::string> seen_out;
  for (const auto& name : outputs) {
    auto it = ids.find(name);
    if (it == ids.end())
      throw SyntaxError(0, ".outputs '" + name + "' is never defined");
    if (!seen_out.insert(name).second)
      throw SyntaxError(0, ".outputs '" + name + "' listed twice");
    dag.outputs.push_back({name, it->second});
  }
  dag.validate();
  return dag;
}

}  // namespace

GateDag parse_netlist(const std::string& text, NetlistFormat format) {
  return format == NetlistFormat::Structural ? parse_structural(text)
                                             : parse_blif(text);
}

GateDag parse_netlist_file(const std::string& path, NetlistFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open netlist: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_netlist(ss.str(), format);
}

// ---------------------------------------------------------------------------
// NOR lowering

namespace {

class NorBuilder {
 public:
  explicit NorBuilder(GateDag& dag) : dag_(dag) {}

  std::uint32_t nor(std::vector<std::uint32_t> args) {
    // Duplicate operands are redundant under NOR semantics and would map to
    // colliding cells later.
    std::sort(args.begin(), args.end());
    args.erase(std::unique(args.begin(), args.end()), args.end());
    return memoized(GateKind::Nor, std::move(args));
  }
  std::uint32_t not_(std::uint32_t a) { return nor({a}); }
  std::uint32_t and_(std::uint32_t a, std::uint32_t b) {
    return nor({not_(a), not_(b)});
  }
  std::uint32_t or2(std::uint32_t a, std::uint32_t b) { return not_(nor({a, b})); }
  std::uint32_t xor2(std::uint32_t a, std::uint32_t b) {
    return or2(and_(a, not_(b)), and_(not_(a), b));
  }
  std::uint32_t constant(bool one) {
    return memoized(one ? GateKind::Const1 : GateKind::Const0, {});
  }

  /// NOR with fan-in capped at k_max: wide gates become a NOR over per-chunk
  /// OR subtrees, which preserves the function.
  std::uint32_t nor_capped(std::vector<std::uint32_t> args, std::uint32_t k_max) {
    std::sort(args.begin(), args.end());
    args.erase(std::unique(args.begin(), args.end()), args.end());
    if (args.size() <= k_max) return memoized(GateKind::Nor, std::move(args));
    std::vector<std::uint32_t> chunk_ors;
    for (std::size_t at = 0; at < args.size(); at += k_max) {
      const std::size_t n = std::min<std::size_t>(k_max, args.size() - at);
      std::vector<std::uint32_t> chunk(args.begin() + at, args.begin() + at + n);
      chunk_ors.push_back(not_(nor(std::move(chunk))));
    }
    return nor_capped(std::move(chunk_ors), k_max);
  }

 private:
  std::uint32_t memoized(GateKind kind, std::vector<std::uint32_t> args) {
    const auto key = std::make_pair(kind, args);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const std::uint32_t id = dag_.add(kind, std::move(args));
    cache_.emplace(key, id);
    return id;
  }

  GateDag& dag_;
  std::map<std::pair<GateKind, std::vector<std::uint32_t>>, std::uint32_t> cache_;
};

bool is_nor1(const GateDag& dag, std::uint32_t id) {
  return dag.nodes[id].kind == GateKind::Nor && dag.nodes[id].operands.size() == 1;
}

/// Replaces NOR(NOR(x)) pairs whose inner gate has a single fanout, then
/// drops unreachable gates. Inputs are always kept, names and order intact.
GateDag eliminate_double_negation(const GateDag& dag) {
  std::vector<std::uint32_t> redirect(dag.nodes.size());
  for (std::uint32_t i = 0; i < dag.nodes.size(); ++i) redirect[i] = i;
  auto resolve = [&](std::uint32_t id) {
    while (redirect[id] != id) id = redirect[id];
    return id;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::uint32_t> fanout(dag.nodes.size(), 0);
    for (std::uint32_t i = 0; i < dag.nodes.size(); ++i)
      if (resolve(i) == i)
        for (std::uint32_t op : dag.nodes[i].operands) ++fanout[resolve(op)];
    for (const auto& out : dag.outputs) ++fanout[resolve(out.second)];

    for (std::uint32_t i = 0; i < dag.nodes.size(); ++i) {
      if (resolve(i) != i || !is_nor1(dag, i)) continue;
      const std::uint32_t inner = resolve(dag.nodes[i].operands[0]);
      if (!is_nor1(dag, inner) || fanout[inner] != 1) continue;
      redirect[i] = resolve(dag.nodes[inner].operands[0]);
      changed = true;
    }
  }

  // Rebuild: keep inputs plus everything reachable from the outputs.
  std::vector<bool> live(dag.nodes.size(), false);
  std::vector<std::uint32_t> stack;
  for (const auto& out : dag.outputs) stack.push_back(resolve(out.second));
  for (const auto& inp : dag.inputs) stack.push_back(inp.second);
  while (!stack.empty()) {
    const std::uint32_t id = stack.back();
    stack.pop_back();
    if (live[id]) continue;
    live[id] = true;
    for (std::uint32_t op : dag.nodes[id].operands)
      stack.push_back(resolve(op));
  }

  GateDag out;
  std::vector<std::uint32_t> new_id(dag.nodes.size(), 0);
  for (std::uint32_t i = 0; i < dag.nodes.size(); ++i) {
    if (resolve(i) != i || !live[i]) continue;
    std::vector<std::uint32_t> ops;
    for (std::uint32_t op : dag.nodes[i].operands)
      ops.push_back(new_id[resolve(op)]);
    new_id[i] = out.add(dag.nodes[i].kind, std::move(ops));
  }
  for (const auto& inp : dag.inputs)
    out.inputs.push_back({inp.first, new_id[inp.second]});
  for (const auto& o : dag.outputs)
    out.outputs.push_back({o.first, new_id[resolve(o.second)]});
  return out;
}

}  // namespace

GateDag lower_to_nor(const GateDag& dag, const LowerOptions& options) {
  dag.validate();
  if (options.k_max < 2) throw Error("k_max must be at least 2");

  GateDag out;
  NorBuilder build(out);
  std::vector<std::uint32_t> mapped(dag.nodes.size(), 0);

  for (const auto& inp : dag.inputs) {
    mapped[inp.second] = out.add(GateKind::Input);
    out.inputs.push_back({inp.first, mapped[inp.second]});
  }

  for (std::uint32_t i = 0; i < dag.nodes.size(); ++i) {
    const GateNode& n = dag.nodes[i];
    std::vector<std::uint32_t> ops;
    for (std::uint32_t op : n.operands) ops.push_back(mapped[op]);
    switch (n.kind) {
      case GateKind::Input:
        break;  // created above
      case GateKind::Const0:
        mapped[i] = build.constant(false);
        break;
      case GateKind::Const1:
        mapped[i] = build.constant(true);
        break;
      case GateKind::Not:
        mapped[i] = build.not_(ops[0]);
        break;
      case GateKind::Nor:
        mapped[i] = build.nor_capped(std::move(ops), options.k_max);
        break;
      case GateKind::And: {
        std::vector<std::uint32_t> negs;
        for (std::uint32_t op : ops) negs.push_back(build.not_(op));
        mapped[i] = build.nor_capped(std::move(negs), options.k_max);
        break;
      }
      case GateKind::Or:
        mapped[i] = build.not_(build.nor_capped(std::move(ops), options.k_max));
        break;
      case GateKind::Xor: {
        std::uint32_t acc = ops[0];
        for (std::size_t j = 1; j < ops.size(); ++j)
          acc = build.xor2(acc, ops[j]);
        mapped[i] = acc;
        break;
      }
    }
  }

  for (const auto& o : dag.outputs)
    out.outputs.push_back({o.first, mapped[o.second]});
  GateDag cleaned = eliminate_double_negation(out);
  cleaned.validate();
  return cleaned;
}

// ---------------------------------------------------------------------------
// Reference evaluation

Assignment eval_dag(const GateDag& dag, const Assignment& input_assignment) {
  std::vector<bool> bits;
  bits.reserve(dag.inputs.size());
  for (const auto& inp : dag.inputs) {
    auto it = input_assignment.find(inp.first);
    if (it == input_assignment.end())
      throw MissingInput("no value for input '" + inp.first + "'");
    bits.push_back(it->second);
  }
  const std::vector<bool> outs = eval_dag_bits(dag, bits);
  Assignment result;
  for (std::size_t i = 0; i < dag.outputs.size(); ++i)
    result[dag.outputs[i].first] = outs[i];
  return result;
}

std::vector<bool> eval_dag_bits(const GateDag& dag,
                                const std::vector<bool>& input_bits) {
  if (input_bits.size() != dag.inputs.size())
    throw MissingInput("expected " + std::to_string(dag.inputs.size()) +
                       " input bits, got " + std::to_string(input_bits.size()));
  std::vector<char> value(dag.nodes.size(), 0);
  for (std::size_t i = 0; i < dag.inputs.size(); ++i)
    value[dag.inputs[i].second] = input_bits[i] ? 1 : 0;

  for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
    const GateNode& n = dag.nodes[i];
    auto op = [&](std::size_t j) { return value[n.operands[j]] != 0; };
    switch (n.kind) {
      case GateKind::Input: break;
      case GateKind::Const0: value[i] = 0; break;
      case GateKind::Const1: value[i] = 1; break;
      case GateKind::Not: value[i] = !op(0); break;
      case GateKind::Nor: {
        bool any = false;
        for (std::size_t j = 0; j < n.operands.size(); ++j) any = any || op(j);
        value[i] = !any;
        break;
      }
      case GateKind::And: {
        bool all = true;
        for (std::size_t j = 0; j < n.operands.size(); ++j) all = all && op(j);
        value[i] = all;
        break;
      }
      case GateKind::Or: {
        bool any = false;
        for (std::size_t j = 0; j < n.operands.size(); ++j) any = any || op(j);
        value[i] = any;
        break;
      }
      case GateKind::Xor: {
        bool parity = false;
        for (std::size_t j = 0; j < n.operands.size(); ++j) parity = parity != op(j);
        value[i] = parity;
        break;
      }
    }
  }

  std::vector<bool> outs;
  outs.reserve(dag.outputs.size());
  for (const auto& o : dag.outputs) outs.push_back(value[o.second] != 0);
  return outs;
}

}  // namespace mmpu
