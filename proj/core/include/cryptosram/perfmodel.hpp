#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cryptosram/aes_kernels.hpp"
#include "cryptosram/controller.hpp"
#include "cryptosram/oracle.hpp"

namespace csram {

struct PowerMode {
  std::string name;
  double frequency = 0;  // Hz
  double supply = 0;     // V
  double current = 0;    // A
};

// RUN-Range0, RUN-Range2, SLEEP.
const std::array<PowerMode, 3>& power_modes();
// Accepts the full names, "run0"/"run2"/"sleep" and "110MHz"/"26MHz"/"2MHz".
const PowerMode& find_power_mode(std::string_view name);

enum class KernelFamily { kAes, kSha3, kGhash };
std::string_view to_string(KernelFamily f);

struct Calibration {
  double aes = 1.0;
  double sha3 = 1.0;
  double ghash = 1.0;

  double of(KernelFamily f) const;
  bool operator==(const Calibration&) const = default;
};

struct FabricConfig {
  std::uint64_t sram_total = 256 * 1024;
  std::uint64_t subarray_bytes = kRows * kColumns / 8;
  double isc_fraction = 1.0;  // 0.25, 0.5 or 1.0
  CycleCostModel costs;
  Calibration calibration;
  double isc_power_factor = 1.0;

  // Throws kInvalidArgument on an unsupported fraction or power factor < 1.
  void validate() const;
  double active_subarrays() const;
};

// --- command counts ---------------------------------------------------------

struct FunctionCount {
  std::string program;
  std::string name;
  std::uint64_t inst_count = 0;
  std::uint64_t iterations = 0;  // scheduled, per program run
  std::uint64_t executed = 0;    // inst_count x iterations
  std::uint64_t bytes() const { return 2 * inst_count; }
};

struct ProgramCounts {
  std::vector<FunctionCount> functions;
  std::uint64_t total_inst = 0;
  std::uint64_t total_executed = 0;
  std::uint64_t bytes() const { return 2 * total_inst; }
  const FunctionCount* find(std::string_view name) const;
};

ProgramCounts count_commands(const KernelProgram& program);

// Runs a program on zero data (cycles do not depend on data) under a cost model.
ExecutionStats profile_program(const KernelProgram& program, const CycleCostModel& costs = {});

// --- workloads --------------------------------------------------------------

enum class WorkloadKind { kAesCbc, kAesCcm, kAesGcm, kSha3, kHmac };

struct Workload {
  WorkloadKind kind = WorkloadKind::kAesCbc;
  AesVariant aes = AesVariant::k128;
  CipherDirection direction = CipherDirection::kEncrypt;
  Sha3Variant sha = Sha3Variant::k256;

  std::string label() const;  // e.g. "AES-128-CBC encrypt", "SHA3-256", "HMAC-SHA3-256"
  static Workload aes_mode(WorkloadKind k, AesVariant v, CipherDirection d) { return {k, v, d, {}}; }
  static Workload sha3(Sha3Variant v) { return {WorkloadKind::kSha3, {}, {}, v}; }
  static Workload hmac(Sha3Variant v) { return {WorkloadKind::kHmac, {}, {}, v}; }
};

// Cycles one subarray spends per pass, split by kernel family.
struct WorkloadCost {
  std::vector<std::pair<KernelFamily, std::uint64_t>> segments;
  std::uint64_t payload_bytes = 0;
  std::uint64_t cycles() const;
};

/// Measures workload costs by simulating the kernels under a cycle-cost model.
/// A cipher mode's passes use the cipher direction of its column: CBC is one
/// pass per 16 blocks, CCM two (MAC and counter), GCM one cipher pass plus one
/// steady-state GHASH pass over the same 16 blocks. SHA-3 is one absorbed
/// rate block per tile; HMAC is a rate-length key and message per tile.
class PerfModel {
 public:
  explicit PerfModel(CycleCostModel costs = {});

  const WorkloadCost& cost(const Workload& w);
  const CycleCostModel& costs() const { return costs_; }

 private:
  CycleCostModel costs_;
  std::map<std::string, WorkloadCost> cache_;
};

// calibration x active x payload x f / cycles, with each family's cycles scaled
// by its own calibration when a workload spans families.
double throughput(const WorkloadCost& cost, const FabricConfig& config, const PowerMode& mode);
double energy_efficiency(double throughput, const PowerMode& mode, double power_factor = 1.0);

// One scalar per family: AES matches the AES-128-CBC encrypt cell of the
// reference AES table, SHA-3 the SHA3-256 cell, GHASH balances the four GCM cells.
Calibration calibrate(PerfModel& model, const FabricConfig& base = {});

// --- reference tables ------------------------------------------------------

struct ReferenceCell {
  std::string row;
  std::string column;
  double value;
};

struct ReferenceTable {
  std::string id;  // aes-throughput, sha3-throughput, hmac-throughput, aes-efficiency, sha3-efficiency
  std::string title;
  std::string unit;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<ReferenceCell> cells;

  std::optional<double> find(std::string_view row, std::string_view column) const;
};

// Published throughput and efficiency figures the model is checked against.
const std::vector<ReferenceTable>& reference_tables();
const ReferenceTable& reference_table(std::string_view id);

struct ReferenceFunction {
  std::string group;
  std::string name;
  std::uint64_t inst;
  double capacity_kb;
  std::uint64_t iterations;
};
const std::vector<ReferenceFunction>& reference_control_overhead();
inline constexpr std::uint64_t kReferenceTotalInst = 2233;
inline constexpr double kReferenceTotalKb = 4.47;

// --- reports ----------------------------------------------------------------

struct ReportCell {
  std::string row;
  std::string column;
  double model = 0;
  std::optional<double> reference;
};

struct ReportTable {
  std::string id;
  std::string title;
  std::string unit;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<ReportCell> cells;

  const ReportCell* find(std::string_view row, std::string_view column) const;
};

struct KernelCycles {
  std::string workload;
  std::uint64_t payload_bytes = 0;
  std::uint64_t aes_cycles = 0;
  std::uint64_t ghash_cycles = 0;
  std::uint64_t sha3_cycles = 0;
};

struct PerfReport {
  CycleCostModel costs;
  Calibration calibration;
  double isc_power_factor = 1.0;
  std::vector<KernelCycles> kernels;
  std::vector<ReportTable> tables;          // same ids and shapes as the reference tables
  std::vector<FunctionCount> control;       // AES-128 encrypt, GHASH, SHA3-256 functions
  std::uint64_t control_total_inst = 0;
  const ReportTable* table(std::string_view id) const;
};

// Throughput tables at RUN-Range0; efficiency of AES-128-CBC encrypt and
// SHA3-256 over the three power modes. Baseline rows carry the reference values through.
PerfReport build_report(PerfModel& model, const Calibration& calibration, double isc_power_factor = 1.0);

struct Delta {
  std::string table;  // reference table id, or "control"
  std::string row;
  std::string column;
  double model = 0;
  double reference = 0;
  double abs = 0;
  double rel = 0;
  double tolerance = 0;  // relative; absolute for baseline efficiency cells
  bool ok = true;
};

struct ScalingCheck {
  std::string name;
  double expected = 0;
  double observed = 0;
  double tolerance = 0;  // relative, or absolute window for the bounds checks
  bool ok = true;
};

struct Comparison {
  std::vector<Delta> deltas;
  std::vector<ScalingCheck> scaling;
  bool ok() const;
};

struct Tolerances {
  double throughput = 0.05;
  double efficiency = 0.06;
  double control = 0.20;
};

/// Deltas of every reference cell plus the scaling laws visible in the report
/// (fraction doubling, frequency linearity, CCM = CBC/2, SHA-3 rate ratios,
/// HMAC/SHA-3 window, GCM/CBC ratio) and control-overhead counts.
Comparison compare_to_reference(const PerfReport& report, const Tolerances& tol = {});

std::string format_text(const PerfReport& report, const Comparison* comparison = nullptr);
std::string format_json(const PerfReport& report, const Comparison* comparison = nullptr);

}  // namespace csram
