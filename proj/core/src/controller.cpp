#include "cryptosram/controller.hpp"

#include <algorithm>

#include "cryptosram/error.hpp"

namespace csram {

const FunctionStats* ExecutionStats::find(std::string_view name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

namespace {

bool has_row_operand(const CommandWord& c) {
  return c.opcode == Opcode::kRdRow || c.opcode == Opcode::kWrRow || c.opcode == Opcode::kActRow ||
         c.opcode == Opcode::kLogicOp;
}

std::int64_t strided_index(const CommandWord& c, const StrideRule& r, std::uint64_t iteration) {
  const std::uint64_t step = r.period ? iteration % r.period : iteration;
  return static_cast<std::int64_t>(c.index) + static_cast<std::int64_t>(step) * r.increment;
}

}  // namespace

Controller::Controller(KernelProgram program) : program_(std::move(program)) { validate(program_); }

void Controller::validate(const KernelProgram& p) {
  const auto& words = p.command_array.words;
  if (p.command_array.size_bytes() > p.command_array.capacity_bytes)
    throw Error(ErrorCode::kCapacityExceeded, std::to_string(p.command_array.size_bytes()) + " bytes > " +
                                                  std::to_string(p.command_array.capacity_bytes));

  for (const auto& f : p.functions) {
    if (std::uint64_t{f.base_address} + f.inst_count > words.size())
      throw Error(ErrorCode::kCapacityExceeded, "function '" + f.name + "' runs past the command array");
    for (const auto& r : f.strides)
      if (r.offset >= f.inst_count || !(has_row_operand(words[f.base_address + r.offset]) ||
                                         words[f.base_address + r.offset].opcode == Opcode::kExtBit))
        throw Error(ErrorCode::kStrideOutOfRange, "stride rule offset " + std::to_string(r.offset) + " in '" +
                                                      f.name + "' does not name an indexed command");
  }

  for (const auto& w : words) {
    if (w.opcode == Opcode::kExtBit) {
      const auto code = static_cast<unsigned>(w.width());
      if (code > 5 || p.geometry.m == 0 || width_columns(w.width()) != p.geometry.m)
        throw Error(ErrorCode::kWidthMismatch, "ext_bit width code " + std::to_string(code) +
                                                   " vs geometry m=" + std::to_string(p.geometry.m));
    }
    if (!p.layout.empty() && has_row_operand(w) && !p.layout.find_row(w.index))
      throw Error(ErrorCode::kRowOutOfRange, "operand row " + std::to_string(w.index) + " outside the layout");
  }

  for (const auto& step : p.schedule) {
    if (const auto* inv = std::get_if<Invocation>(&step)) {
      if (!p.find_function(inv->function))
        throw Error(ErrorCode::kUndefinedFunction, "'" + inv->function + "'");
      if (inv->iterations == 0)
        throw Error(ErrorCode::kInvalidArgument, "zero iterations for '" + inv->function + "'");
    } else {
      const auto& h = std::get<HostAction>(step);
      if (h.row >= kRows) throw Error(ErrorCode::kRowOutOfRange, "host action row " + std::to_string(h.row));
    }
  }

  // Every rewritten index must stay inside the region holding its base index.
  const auto iters = p.scheduled_iterations();
  for (std::size_t fi = 0; fi < p.functions.size(); ++fi) {
    const auto& f = p.functions[fi];
    if (iters[fi] == 0) continue;
    for (const auto& r : f.strides) {
      const auto& cmd = words[f.base_address + r.offset];
      const std::uint64_t span = r.period ? std::min<std::uint64_t>(r.period, iters[fi]) : iters[fi];
      const std::int64_t a = strided_index(cmd, r, 0);
      const std::int64_t b = strided_index(cmd, r, span - 1);
      const std::int64_t lo = std::min(a, b), hi = std::max(a, b);
      if (cmd.opcode == Opcode::kExtBit) {
        if (lo < 0 || hi >= static_cast<std::int64_t>(p.geometry.m))
          throw Error(ErrorCode::kStrideOutOfRange,
                      "function '" + f.name + "' strides ext_bit to column " + std::to_string(hi));
        continue;
      }
      if (lo < 0 || hi >= static_cast<std::int64_t>(kRows))
        throw Error(ErrorCode::kStrideOutOfRange, "function '" + f.name + "' strides to row " + std::to_string(hi));
      if (!p.layout.empty()) {
        const auto* region = p.layout.find_row(cmd.index);
        if (!region || !region->contains(static_cast<std::size_t>(lo)) ||
            !region->contains(static_cast<std::size_t>(hi)))
          throw Error(ErrorCode::kStrideOutOfRange,
                      "function '" + f.name + "' strides outside its layout region");
      }
    }
  }
}

ExecutionStats Controller::run(Subarray& subarray, const Bindings& bindings) const {
  return run_impl(subarray, bindings, nullptr, false);
}

ExecutionStats Controller::run_traced(Subarray& subarray, std::vector<TraceRecord>& trace,
                                      const Bindings& bindings, bool latch_snapshots) const {
  return run_impl(subarray, bindings, &trace, latch_snapshots);
}

ExecutionStats Controller::run_impl(Subarray& subarray, const Bindings& bindings, std::vector<TraceRecord>* trace,
                                    bool latch_snapshots) const {
  const auto& p = program_;
  ExecutionStats stats;
  stats.functions.reserve(p.functions.size());
  for (const auto& f : p.functions) stats.functions.push_back({f.name, f.inst_count, 0, 0, 0});

  std::vector<CommandWord> body;
  std::uint64_t seq = trace ? trace->size() : 0;

  for (const auto& step : p.schedule) {
    if (const auto* h = std::get_if<HostAction>(&step)) {
      switch (h->kind) {
        case HostAction::Kind::kWriteConstant:
          subarray.write_row(h->row, h->data);
          break;
        case HostAction::Kind::kLoadBinding: {
          const auto it = bindings.find(h->binding);
          if (it == bindings.end()) throw Error(ErrorCode::kMissingBinding, "'" + h->binding + "'");
          subarray.write_row(h->row, it->second);
          break;
        }
        case HostAction::Kind::kCaptureRow:
          stats.captures[h->binding] = subarray.read_row(h->row);
          break;
      }
      continue;
    }

    const auto& inv = std::get<Invocation>(step);
    std::size_t fi = 0;
    while (p.functions[fi].name != inv.function) ++fi;
    const auto& f = p.functions[fi];
    auto& fs = stats.functions[fi];
    const auto first = p.command_array.words.begin() + f.base_address;
    body.assign(first, first + f.inst_count);

    for (std::uint32_t it = 0; it < inv.iterations; ++it) {
      const std::uint64_t counter = fs.iterations;
      for (const auto& r : f.strides)
        body[r.offset].index = static_cast<std::uint8_t>(strided_index(*(first + r.offset), r, counter));
      for (std::uint32_t off = 0; off < f.inst_count; ++off) {
        std::uint64_t cycles;
        try {
          cycles = subarray.execute(body[off]);
        } catch (const Error& e) {
          throw Error(e.code(), std::string(e.what()) + " [function " + f.name + ", iteration " +
                                    std::to_string(counter) + ", offset " + std::to_string(off) + "]");
        }
        fs.cycles += cycles;
        if (trace)
          trace->push_back({seq++, encode(body[off]), cycles,
                            latch_snapshots ? std::optional<Row>(subarray.latch()) : std::nullopt});
      }
      fs.commands += f.inst_count;
      ++fs.iterations;
    }
  }

  for (const auto& fs : stats.functions) {
    stats.total_commands += fs.commands;
    stats.total_cycles += fs.cycles;
  }
  return stats;
}

void replay(Subarray& subarray, const std::vector<TraceRecord>& trace) {
  for (const auto& r : trace) subarray.execute(decode(r.word));
}

}  // namespace csram
