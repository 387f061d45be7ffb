#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cryptosram/bits.hpp"
#include "cryptosram/isa.hpp"

namespace csram {

// Computing-block geometry: n state rows, m columns, k intermediate rows, p tiles.
struct BlockGeometry {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t p = 0;

  static BlockGeometry make(std::size_t n, std::size_t m, std::size_t k);
  bool operator==(const BlockGeometry&) const = default;
};

enum class RegionKind { kState, kKey, kTemp, kConstant, kMessage, kData, kExtension };

std::string_view to_string(RegionKind kind);
RegionKind region_kind_from_string(std::string_view s);

struct LayoutRegion {
  std::string name;
  RegionKind kind = RegionKind::kTemp;
  std::size_t first_row = 0;
  std::size_t row_count = 0;

  bool contains(std::size_t row) const { return row >= first_row && row < first_row + row_count; }
  std::size_t last_row() const { return first_row + row_count - 1; }
  bool operator==(const LayoutRegion&) const = default;
};

// Disjoint named row regions of one subarray.
class LayoutMap {
 public:
  // Throws kInvalidArgument on overlap or rows past the subarray.
  const LayoutRegion& add(std::string name, RegionKind kind, std::size_t first_row, std::size_t row_count);

  const LayoutRegion* find_row(std::size_t row) const;
  const LayoutRegion& region(std::string_view name) const;
  std::size_t row(std::string_view name, std::size_t offset = 0) const;
  const std::vector<LayoutRegion>& regions() const { return regions_; }
  bool empty() const { return regions_.empty(); }
  bool operator==(const LayoutMap&) const = default;

 private:
  std::vector<LayoutRegion> regions_;
};

// At iteration i of its function, the command at `offset` gets its index field
// rewritten to base + (period ? i % period : i) * increment.
struct StrideRule {
  std::uint32_t offset = 0;
  std::int32_t increment = 0;
  std::uint32_t period = 0;
  bool operator==(const StrideRule&) const = default;
};

struct FunctionDescriptor {
  std::string name;
  std::uint32_t base_address = 0;
  std::uint32_t inst_count = 0;
  std::vector<StrideRule> strides;
  bool operator==(const FunctionDescriptor&) const = default;
};

struct Invocation {
  std::string function;
  std::uint32_t iterations = 1;
  bool operator==(const Invocation&) const = default;
};

// Host (DMA) steps interleaved with the schedule. Zero fabric cycles.
struct HostAction {
  enum class Kind { kWriteConstant, kLoadBinding, kCaptureRow };
  Kind kind = Kind::kWriteConstant;
  std::size_t row = 0;
  Row data{};           // kWriteConstant
  std::string binding;  // kLoadBinding source / kCaptureRow destination
  bool operator==(const HostAction&) const = default;
};

using ScheduleStep = std::variant<Invocation, HostAction>;

inline constexpr std::size_t kDefaultCommandCapacityBytes = 8192;

struct CommandArray {
  std::vector<CommandWord> words;
  std::size_t capacity_bytes = kDefaultCommandCapacityBytes;

  std::size_t size_bytes() const { return words.size() * 2; }
  bool operator==(const CommandArray&) const = default;
};

/// Everything the controller needs to drive one subarray: stored command sets,
/// the function table, the schedule of invocations and host steps, and the data
/// layout the commands were generated against.
struct KernelProgram {
  std::string name;
  CommandArray command_array;
  std::vector<FunctionDescriptor> functions;
  std::vector<ScheduleStep> schedule;
  BlockGeometry geometry;
  LayoutMap layout;

  // Appends a command set to the array and registers it.
  const FunctionDescriptor& add_function(std::string fn_name, std::span<const CommandWord> cmds,
                                         std::vector<StrideRule> strides = {});
  void invoke(std::string_view fn_name, std::uint32_t iterations = 1);
  void host_write(std::size_t row, const Row& data);
  void host_load(std::size_t row, std::string binding);
  void host_capture(std::size_t row, std::string binding);

  const FunctionDescriptor* find_function(std::string_view fn_name) const;
  // Total iterations each function is scheduled for, in function-table order.
  std::vector<std::uint64_t> scheduled_iterations() const;
  std::uint64_t scheduled_commands() const;

  bool operator==(const KernelProgram&) const = default;
};

}  // namespace csram
