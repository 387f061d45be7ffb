#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cryptosram/fabric.hpp"
#include "cryptosram/program.hpp"

namespace csram {

struct FunctionStats {
  std::string name;
  std::uint64_t inst_count = 0;
  std::uint64_t iterations = 0;
  std::uint64_t commands = 0;
  std::uint64_t cycles = 0;
};

struct ExecutionStats {
  std::vector<FunctionStats> functions;  // function-table order
  std::uint64_t total_commands = 0;
  std::uint64_t total_cycles = 0;
  std::map<std::string, Row> captures;

  const FunctionStats* find(std::string_view name) const;
};

// Host-supplied rows for kLoadBinding steps.
using Bindings = std::map<std::string, Row, std::less<>>;

/// ISC-CTRL model. Construction validates the program (capacity, function table,
/// ext_bit widths, operand regions, stride bounds); run() replays every scheduled
/// invocation through a subarray, keeping one iteration counter per function that
/// persists across invocations and drives the stride rules.
class Controller {
 public:
  explicit Controller(KernelProgram program);

  static void validate(const KernelProgram& program);

  ExecutionStats run(Subarray& subarray, const Bindings& bindings = {}) const;
  ExecutionStats run_traced(Subarray& subarray, std::vector<TraceRecord>& trace, const Bindings& bindings = {},
                            bool latch_snapshots = false) const;

  const KernelProgram& program() const { return program_; }

 private:
  ExecutionStats run_impl(Subarray& subarray, const Bindings& bindings, std::vector<TraceRecord>* trace,
                          bool latch_snapshots) const;

  KernelProgram program_;
};

// Replays raw trace records through a subarray (no strides, no host steps).
void replay(Subarray& subarray, const std::vector<TraceRecord>& trace);

}  // namespace csram
