#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cryptosram/emit.hpp"

namespace csram {

enum class GateOp { kXor, kXnor, kAnd, kOr, kNot };

struct Gate {
  std::string dst;
  GateOp op = GateOp::kXor;
  std::string a;
  std::string b;  // unused for kNot
};

// Straight-line Boolean netlist, one gate per line: `d = a ^ b`, `d = a # b` (XNOR),
// `d = a & b`, `d = a | b`, `d = ~a`. Names are single tokens.
struct Netlist {
  std::vector<Gate> gates;

  static Netlist parse(std::string_view text);
  // Evaluates on bit inputs (name -> 0/1), returns every named signal.
  std::map<std::string, int> evaluate(const std::map<std::string, int>& inputs) const;
};

// Where a circuit's signals live. Inputs occupy their rows until their last use;
// each output must end in its target row. Pool rows are free scratch.
struct CircuitPlacement {
  std::map<std::string, std::uint8_t> inputs;
  std::map<std::string, std::uint8_t> outputs;
  std::vector<std::uint8_t> pool;
};

struct CircuitReport {
  std::size_t commands = 0;
  std::size_t gates = 0;
  std::size_t peak_live_rows = 0;  // live signals incl. inputs
  std::size_t post_moves = 0;
};

/// Lowers a netlist to row commands. Gates are scheduled greedily (among ready
/// gates, the one that retires the most operands; ties by netlist order), rows
/// are reused as soon as a signal dies, and outputs go straight to their target
/// row when it is free (otherwise through a temporary and a final move).
/// Throws kTempBudgetExceeded when the pool runs out.
CircuitReport compile_circuit(const Netlist& netlist, const CircuitPlacement& placement, CommandBuilder& out);

}  // namespace csram
