#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cryptosram/bits.hpp"
#include "cryptosram/isa.hpp"

namespace csram {

// Per-command cycle charges. A shift of n steps costs base + n * shift_unit;
// a zero-step shift costs base.
struct CycleCostModel {
  std::uint64_t base_cost = 1;
  std::uint64_t shift_unit_cost = 1;

  std::uint64_t cost(const CommandWord& cmd) const;
};

// One executed command, as emitted by traced runs.
struct TraceRecord {
  std::uint64_t sequence = 0;
  std::uint16_t word = 0;
  std::uint64_t cycles = 0;
  std::optional<Row> latch;

  std::string to_line() const;
};

/// Behavioral model of one 128x256 ISC-enabled subarray.
///
/// Holds the cell grid, the sense-amplifier latch, the data-bus register and the
/// first-decoder activation set by act_row. The block width partitions the row into
/// equal segments for shift and ext_bit; logic operations always cover the full row.
/// A fresh subarray is all-zero.
class Subarray {
 public:
  explicit Subarray(std::size_t block_width = kColumns, CycleCostModel costs = {},
                    std::size_t ext_row = kRows - 1);

  // Host/DMA access. Never charged cycles.
  void write_row(std::size_t row, const Row& bits);
  const Row& read_row(std::size_t row) const;

  // Executes one command and returns the cycles charged.
  std::uint64_t execute(const CommandWord& cmd);

  void reset();

  const Row& latch() const { return latch_; }
  const Row& bus() const { return bus_; }
  std::optional<std::uint8_t> pending_row() const { return pending_; }
  std::size_t block_width() const { return block_width_; }
  void set_block_width(std::size_t width);
  std::size_t ext_row() const { return ext_row_; }
  std::uint64_t cycle_count() const { return cycles_; }
  const CycleCostModel& costs() const { return costs_; }

  bool operator==(const Subarray&) const = default;

 private:
  void check_row(std::size_t row) const;

  std::array<Row, kRows> grid_{};
  Row latch_{};
  Row bus_{};
  std::optional<std::uint8_t> pending_;
  std::size_t block_width_;
  std::size_t ext_row_;
  CycleCostModel costs_;
  std::uint64_t cycles_ = 0;
};

}  // namespace csram
