#include "cryptosram/perfmodel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "cryptosram/error.hpp"
#include "cryptosram/ghash_kernels.hpp"
#include "cryptosram/keccak_kernels.hpp"

namespace csram {

const std::array<PowerMode, 3>& power_modes() {
  static const std::array<PowerMode, 3> modes{{
      {"RUN-Range0", 110e6, 1.8, 11.21e-3},
      {"RUN-Range2", 26e6, 1.8, 1.87e-3},
      {"SLEEP", 2e6, 1.8, 230e-6},
  }};
  return modes;
}

const PowerMode& find_power_mode(std::string_view name) {
  std::string s;
  for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto& m = power_modes();
  if (s == "run-range0" || s == "run0" || s == "range0" || s == "110mhz") return m[0];
  if (s == "run-range2" || s == "run2" || s == "range2" || s == "26mhz") return m[1];
  if (s == "sleep" || s == "low-power-sleep" || s == "2mhz") return m[2];
  throw Error(ErrorCode::kInvalidArgument, "unknown power mode '" + std::string(name) + "'");
}

std::string_view to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::kAes: return "aes";
    case KernelFamily::kSha3: return "sha3";
    case KernelFamily::kGhash: return "ghash";
  }
  return "?";
}

double Calibration::of(KernelFamily f) const {
  switch (f) {
    case KernelFamily::kAes: return aes;
    case KernelFamily::kSha3: return sha3;
    case KernelFamily::kGhash: return ghash;
  }
  return 1.0;
}

void FabricConfig::validate() const {
  if (isc_fraction != 0.25 && isc_fraction != 0.5 && isc_fraction != 1.0)
    throw Error(ErrorCode::kInvalidArgument, "ISC fraction must be 25%, 50% or 100%");
  if (isc_power_factor < 1.0) throw Error(ErrorCode::kInvalidArgument, "ISC power factor below 1");
  if (subarray_bytes == 0 || sram_total < subarray_bytes)
    throw Error(ErrorCode::kInvalidArgument, "SRAM smaller than one subarray");
  for (double c : {calibration.aes, calibration.sha3, calibration.ghash})
    if (!(c > 0)) throw Error(ErrorCode::kInvalidArgument, "calibration must be positive");
}

double FabricConfig::active_subarrays() const {
  return static_cast<double>(sram_total / subarray_bytes) * isc_fraction;
}

// --- counts -----------------------------------------------------------------

const FunctionCount* ProgramCounts::find(std::string_view name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

ProgramCounts count_commands(const KernelProgram& program) {
  ProgramCounts out;
  const auto iters = program.scheduled_iterations();
  for (std::size_t i = 0; i < program.functions.size(); ++i) {
    const auto& f = program.functions[i];
    out.functions.push_back({program.name, f.name, f.inst_count, iters[i], f.inst_count * iters[i]});
    out.total_inst += f.inst_count;
    out.total_executed += f.inst_count * iters[i];
  }
  return out;
}

ExecutionStats profile_program(const KernelProgram& program, const CycleCostModel& costs) {
  Bindings zeros;
  for (const auto& step : program.schedule)
    if (const auto* h = std::get_if<HostAction>(&step); h && h->kind == HostAction::Kind::kLoadBinding)
      zeros.emplace(h->binding, Row{});
  const Controller ctrl(program);
  Subarray sub(program.geometry.m ? program.geometry.m : kColumns, costs);
  return ctrl.run(sub, zeros);
}

// --- workloads --------------------------------------------------------------

std::string Workload::label() const {
  const std::string dir = direction == CipherDirection::kEncrypt ? " encrypt" : " decrypt";
  switch (kind) {
    case WorkloadKind::kAesCbc: return std::string(to_string(aes)) + "-CBC" + dir;
    case WorkloadKind::kAesCcm: return std::string(to_string(aes)) + "-CCM" + dir;
    case WorkloadKind::kAesGcm: return std::string(to_string(aes)) + "-GCM" + dir;
    case WorkloadKind::kSha3: return std::string(to_string(sha));
    case WorkloadKind::kHmac: return "HMAC-" + std::string(to_string(sha));
  }
  return "?";
}

std::uint64_t WorkloadCost::cycles() const {
  std::uint64_t c = 0;
  for (const auto& [f, n] : segments) c += n;
  return c;
}

PerfModel::PerfModel(CycleCostModel costs) : costs_(costs) {}

const WorkloadCost& PerfModel::cost(const Workload& w) {
  const auto key = w.label();
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  WorkloadCost c;
  const auto aes_pass = [&](DataXor x) {
    return profile_program(build_aes_program(w.aes, w.direction, x), costs_).total_cycles;
  };
  const DataXor chained = w.direction == CipherDirection::kEncrypt ? DataXor::kBefore : DataXor::kAfter;
  switch (w.kind) {
    case WorkloadKind::kAesCbc:
      c.segments = {{KernelFamily::kAes, aes_pass(chained)}};
      c.payload_bytes = kAesTiles * 16;
      break;
    case WorkloadKind::kAesCcm:
      c.segments = {{KernelFamily::kAes, aes_pass(chained) + aes_pass(DataXor::kAfter)}};
      c.payload_bytes = kAesTiles * 16;
      break;
    case WorkloadKind::kAesGcm: {
      const auto ghash = profile_program(build_ghash_program(kGhashBlocksPerPass, false), costs_).total_cycles;
      c.segments = {{KernelFamily::kAes, aes_pass(DataXor::kAfter)}, {KernelFamily::kGhash, ghash}};
      c.payload_bytes = kAesTiles * 16;
      break;
    }
    case WorkloadKind::kSha3:
      c.segments = {{KernelFamily::kSha3, profile_program(build_sha3_program(w.sha, 1), costs_).total_cycles}};
      c.payload_bytes = kKeccakTiles * sha3_rate_bytes(w.sha);
      break;
    case WorkloadKind::kHmac:
      // A rate-length message pads to two inner blocks.
      c.segments = {{KernelFamily::kSha3, profile_program(build_hmac_program(w.sha, 2), costs_).total_cycles}};
      c.payload_bytes = kKeccakTiles * sha3_rate_bytes(w.sha);
      break;
  }
  return cache_.emplace(key, std::move(c)).first->second;
}

double throughput(const WorkloadCost& cost, const FabricConfig& config, const PowerMode& mode) {
  config.validate();
  double cycles = 0;
  for (const auto& [f, n] : cost.segments) cycles += static_cast<double>(n) / config.calibration.of(f);
  if (cycles == 0) return 0;
  return config.active_subarrays() * static_cast<double>(cost.payload_bytes) * mode.frequency / cycles;
}

double energy_efficiency(double tput, const PowerMode& mode, double power_factor) {
  if (tput == 0) return 0;
  return tput / (mode.supply * mode.current * power_factor);
}

// --- reference tables -------------------------------------------------------

namespace {

const char* const kCpu = "CPU (Software)";
const char* const kAsic = "ASIC (Hardware)";
const char* const kIsc[3] = {"CryptoSRAM (25%)", "CryptoSRAM (50%)", "CryptoSRAM (100%)"};
constexpr double kFractions[3] = {0.25, 0.5, 1.0};

struct AesColumn {
  AesVariant v;
  CipherDirection d;
  WorkloadKind k;
};

std::vector<AesColumn> aes_columns() {
  std::vector<AesColumn> out;
  for (auto d : {CipherDirection::kEncrypt, CipherDirection::kDecrypt})
    for (auto v : {AesVariant::k128, AesVariant::k256})
      for (auto k : {WorkloadKind::kAesCbc, WorkloadKind::kAesCcm, WorkloadKind::kAesGcm})
        out.push_back({v, d, k});
  return out;
}

constexpr Sha3Variant kShaVariants[4] = {Sha3Variant::k224, Sha3Variant::k256, Sha3Variant::k384, Sha3Variant::k512};

ReferenceTable make_table(std::string id, std::string title, std::string unit, std::vector<std::string> rows,
                      std::vector<std::string> columns, const std::vector<std::vector<double>>& values) {
  ReferenceTable t{std::move(id), std::move(title), std::move(unit), std::move(rows), std::move(columns), {}};
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      if (!std::isnan(values[r][c])) t.cells.push_back({t.rows[r], t.columns[c], values[r][c]});
  return t;
}

std::vector<std::string> isc_rows() { return {kIsc[0], kIsc[1], kIsc[2]}; }

}  // namespace

std::optional<double> ReferenceTable::find(std::string_view row, std::string_view column) const {
  for (const auto& c : cells)
    if (c.row == row && c.column == column) return c.value;
  return std::nullopt;
}

const std::vector<ReferenceTable>& reference_tables() {
  static const std::vector<ReferenceTable> tables = [] {
    std::vector<ReferenceTable> t;
    std::vector<std::string> aes_cols;
    for (const auto& c : aes_columns()) aes_cols.push_back(Workload::aes_mode(c.k, c.v, c.d).label());
    t.push_back(make_table("aes-throughput", "Throughput over AES modes", "MB/s",
                           {kCpu, kAsic, kIsc[0], kIsc[1], kIsc[2]}, aes_cols,
                           {{1.448, 0.86, 0.876, 1.145, 0.654, 0.756, 1.32, 0.858, 0.878, 1.061, 0.653, 0.758},
                            {17.543, 9.661, 15.847, 13.55, 7.507, 12.437, 17.361, 9.718, 15.6, 13.404, 7.535, 12.269},
                            {28.337, 14.169, 10.999, 21.406, 10.703, 9.771, 24.208, 12.104, 10.316, 18.086, 9.043,
                             9.016},
                            {56.674, 28.337, 21.998, 42.813, 21.406, 19.542, 48.416, 24.208, 20.632, 36.172, 18.086,
                             18.031},
                            {113.348, 56.674, 43.996, 85.625, 42.813, 39.084, 96.832, 48.416, 41.264, 72.344, 36.172,
                             36.062}}));
    t.push_back(make_table("sha3-throughput", "Throughput over SHA3 variants", "MB/s", {kCpu, kIsc[0], kIsc[1], kIsc[2]},
                           {"SHA3-224", "SHA3-256", "SHA3-384", "SHA3-512"},
                           {{0.893, 0.844, 0.648, 0.45},
                            {15.098, 14.260, 10.904, 7.549},
                            {30.197, 28.519, 21.809, 15.098},
                            {60.393, 57.038, 43.617, 30.197}}));
    t.push_back(make_table("hmac-throughput", "HMAC throughput, rate-length key and message", "MB/s", isc_rows(),
                           {"HMAC-SHA3-224", "HMAC-SHA3-256", "HMAC-SHA3-384", "HMAC-SHA3-512"},
                           {{4.034, 3.810, 2.914, 2.017}, {8.069, 7.621, 5.828, 4.034}, {16.138, 15.241, 11.655, 8.069}}));
    const std::vector<std::string> freq = {"110 MHz", "26 MHz", "2 MHz"};
    t.push_back(make_table("aes-efficiency", "Energy efficiency of AES-128-CBC encrypt over power modes", "GB/s/W",
                           {kCpu, kAsic, kIsc[0], kIsc[1], kIsc[2]}, freq,
                           {{0.0718, 0.1017, 0.0000},
                            {0.8694, 1.2319, 0.7704},
                            {1.3396, 1.8982, 1.1872},
                            {2.6793, 3.7963, 2.3743},
                            {5.3586, 7.5927, 4.7486}}));
    t.push_back(make_table("sha3-efficiency", "Energy efficiency of SHA3-256 over power modes", "GB/s/W",
                           {kCpu, kIsc[0], kIsc[1], kIsc[2]}, freq,
                           {{0.0418, 0.0593, 0.0000},
                            {0.7067, 1.0013, 0.6262},
                            {1.4134, 2.0026, 1.2525},
                            {2.8267, 4.0053, 2.5050}}));
    return t;
  }();
  return tables;
}

const ReferenceTable& reference_table(std::string_view id) {
  for (const auto& t : reference_tables())
    if (t.id == id) return t;
  throw Error(ErrorCode::kInvalidArgument, "no reference table " + std::string(id));
}

const std::vector<ReferenceFunction>& reference_control_overhead() {
  static const std::vector<ReferenceFunction> f = {
      {"AES-128", "BitSlicing", 288, 0.58, 2},    {"AES-128", "AddRoundKey", 24, 0.05, 11},
      {"AES-128", "SubBytes", 357, 0.71, 10},     {"AES-128", "ShiftRows", 456, 0.91, 10},
      {"AES-128", "MixColumns", 258, 0.52, 9},    {"GHASH", "ByteArrange", 63, 0.13, 1},
      {"GHASH", "ByteAligning", 138, 0.28, 8},    {"GHASH", "GaloisMult", 16, 0.03, 1024},
      {"SHA3", "StatePermute", 633, 1.27, 24},
  };
  return f;
}

// --- calibration ------------------------------------------------------------

Calibration calibrate(PerfModel& model, const FabricConfig& base) {
  const auto& run0 = power_modes()[0];
  FabricConfig cfg = base;
  cfg.isc_fraction = 1.0;
  cfg.calibration = {};
  Calibration cal;

  const auto aes_anchor = Workload::aes_mode(WorkloadKind::kAesCbc, AesVariant::k128, CipherDirection::kEncrypt);
  cal.aes = *reference_table("aes-throughput").find(kIsc[2], aes_anchor.label()) / throughput(model.cost(aes_anchor), cfg, run0) *
            1e6;
  const auto sha_anchor = Workload::sha3(Sha3Variant::k256);
  cal.sha3 = *reference_table("sha3-throughput").find(kIsc[2], "SHA3-256") / throughput(model.cost(sha_anchor), cfg, run0) * 1e6;

  // GHASH: bisect (in log space) for the scalar that balances the largest and
  // smallest GCM ratio, with the AES scalar held fixed.
  std::vector<std::pair<Workload, double>> gcm;
  for (const auto& c : aes_columns())
    if (c.k == WorkloadKind::kAesGcm) {
      const auto w = Workload::aes_mode(c.k, c.v, c.d);
      gcm.emplace_back(w, *reference_table("aes-throughput").find(kIsc[2], w.label()) * 1e6);
    }
  const auto balance = [&](double g) {
    cfg.calibration = {cal.aes, 1.0, g};
    double lo = 1e300, hi = 0;
    for (const auto& [w, reference] : gcm) {
      const double r = throughput(model.cost(w), cfg, run0) / reference;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return lo + hi - 2.0;
  };
  double a = -10, b = 10;
  for (int i = 0; i < 200; ++i) {
    const double mid = (a + b) / 2;
    (balance(std::exp(mid)) < 0 ? a : b) = mid;
  }
  cal.ghash = std::exp((a + b) / 2);
  return cal;
}

// --- reports ----------------------------------------------------------------

const ReportCell* ReportTable::find(std::string_view row, std::string_view column) const {
  for (const auto& c : cells)
    if (c.row == row && c.column == column) return &c;
  return nullptr;
}

const ReportTable* PerfReport::table(std::string_view id) const {
  for (const auto& t : tables)
    if (t.id == id) return &t;
  return nullptr;
}

namespace {

constexpr double kMega = 1e6, kGiga = 1e9;

ReportTable shape_of(const ReferenceTable& p) { return {p.id, p.title, p.unit, p.rows, p.columns, {}}; }

void put(ReportTable& t, const ReferenceTable& p, const std::string& row, const std::string& col, double model) {
  t.cells.push_back({row, col, model, p.find(row, col)});
}

// Baseline platforms cannot compute with the CPU clock off.
double baseline_tput(double at_run0, const PowerMode& m, bool cpu) {
  if (cpu && m.name == "SLEEP") return 0;
  return at_run0 * m.frequency / power_modes()[0].frequency;
}

}  // namespace

PerfReport build_report(PerfModel& model, const Calibration& calibration, double isc_power_factor) {
  PerfReport r;
  r.costs = model.costs();
  r.calibration = calibration;
  r.isc_power_factor = isc_power_factor;

  const auto& run0 = power_modes()[0];
  const auto config = [&](double fraction) {
    FabricConfig c;
    c.isc_fraction = fraction;
    c.costs = model.costs();
    c.calibration = calibration;
    c.isc_power_factor = isc_power_factor;
    return c;
  };
  const auto kernel_row = [&](const Workload& w) {
    const auto& c = model.cost(w);
    KernelCycles k{w.label(), c.payload_bytes, 0, 0, 0};
    for (const auto& [f, n] : c.segments)
      (f == KernelFamily::kAes ? k.aes_cycles : f == KernelFamily::kGhash ? k.ghash_cycles : k.sha3_cycles) += n;
    r.kernels.push_back(k);
  };

  // AES modes.
  {
    const auto& p = reference_table("aes-throughput");
    auto t = shape_of(p);
    for (const auto& c : aes_columns()) {
      const auto w = Workload::aes_mode(c.k, c.v, c.d);
      kernel_row(w);
      put(t, p, kCpu, w.label(), *p.find(kCpu, w.label()));
      put(t, p, kAsic, w.label(), *p.find(kAsic, w.label()));
      for (int i = 0; i < 3; ++i)
        put(t, p, kIsc[i], w.label(), throughput(model.cost(w), config(kFractions[i]), run0) / kMega);
    }
    r.tables.push_back(std::move(t));
  }
  // SHA-3 and HMAC.
  for (const bool hmac : {false, true}) {
    const auto& p = reference_table(hmac ? "hmac-throughput" : "sha3-throughput");
    auto t = shape_of(p);
    for (auto v : kShaVariants) {
      const auto w = hmac ? Workload::hmac(v) : Workload::sha3(v);
      kernel_row(w);
      if (!hmac) put(t, p, kCpu, w.label(), *p.find(kCpu, w.label()));
      for (int i = 0; i < 3; ++i)
        put(t, p, kIsc[i], w.label(), throughput(model.cost(w), config(kFractions[i]), run0) / kMega);
    }
    r.tables.push_back(std::move(t));
  }
  // Efficiency over power modes.
  for (const bool aes : {true, false}) {
    const auto& p = reference_table(aes ? "aes-efficiency" : "sha3-efficiency");
    auto t = shape_of(p);
    const auto w = aes
                       ? Workload::aes_mode(WorkloadKind::kAesCbc, AesVariant::k128, CipherDirection::kEncrypt)
                       : Workload::sha3(Sha3Variant::k256);
    const auto& src = reference_table(aes ? "aes-throughput" : "sha3-throughput");
    for (std::size_t m = 0; m < power_modes().size(); ++m) {
      const auto& mode = power_modes()[m];
      const auto& col = p.columns[m];
      put(t, p, kCpu, col,
          energy_efficiency(baseline_tput(*src.find(kCpu, w.label()) * kMega, mode, true), mode) / kGiga);
      if (aes)
        put(t, p, kAsic, col,
            energy_efficiency(baseline_tput(*src.find(kAsic, w.label()) * kMega, mode, false), mode) / kGiga);
      for (int i = 0; i < 3; ++i)
        put(t, p, kIsc[i], col,
            energy_efficiency(throughput(model.cost(w), config(kFractions[i]), mode), mode, isc_power_factor) /
                kGiga);
    }
    r.tables.push_back(std::move(t));
  }
  // Control overhead.
  for (const auto& prog : {build_aes_program(AesVariant::k128, CipherDirection::kEncrypt),
                           build_ghash_program(kGhashBlocksPerPass, true), build_sha3_program(Sha3Variant::k256, 1)}) {
    auto counts = count_commands(prog);
    for (auto& f : counts.functions) r.control.push_back(f);
    r.control_total_inst += counts.total_inst;
  }
  return r;
}

bool Comparison::ok() const {
  return std::all_of(deltas.begin(), deltas.end(), [](const Delta& d) { return d.ok; }) &&
         std::all_of(scaling.begin(), scaling.end(), [](const ScalingCheck& s) { return s.ok; });
}

namespace {

// Efficiency tables print four decimals; a baseline cell matches when the model
// rounds to the printed value.
bool matches_printed(double model, double reference) { return std::fabs(model - reference) <= 0.5e-4 * (1 + 1e-9); }

ScalingCheck ratio_check(std::string name, double expected, double observed, double tol) {
  const double rel = expected == 0 ? std::fabs(observed) : std::fabs(observed / expected - 1);
  return {std::move(name), expected, observed, tol, rel <= tol};
}

}  // namespace

Comparison compare_to_reference(const PerfReport& report, const Tolerances& tol) {
  Comparison out;
  for (const auto& t : report.tables) {
    const bool efficiency = t.id.ends_with("efficiency");
    for (const auto& c : t.cells) {
      if (!c.reference) continue;
      Delta d{t.id, c.row, c.column, c.model, *c.reference, c.model - *c.reference, 0, 0, true};
      d.rel = *c.reference == 0 ? 0 : d.abs / *c.reference;
      const bool baseline = c.row == kCpu || c.row == kAsic;
      if (efficiency && baseline) {
        d.tolerance = 0.5e-4;
        d.ok = matches_printed(c.model, *c.reference);
      } else {
        d.tolerance = efficiency ? tol.efficiency : tol.throughput;
        d.ok = *c.reference == 0 ? c.model == 0 : std::fabs(d.rel) <= d.tolerance;
      }
      out.deltas.push_back(std::move(d));
    }
  }

  // Control overhead: instruction counts within tolerance, iterations exact.
  for (const auto& pf : reference_control_overhead()) {
    const auto it = std::find_if(report.control.begin(), report.control.end(),
                                 [&](const FunctionCount& f) { return f.name == pf.name; });
    Delta d{"control", pf.name, "#Inst.", 0, static_cast<double>(pf.inst), 0, 0, tol.control, false};
    Delta i{"control", pf.name, "#Iter.", 0, static_cast<double>(pf.iterations), 0, 0, 0, false};
    if (it != report.control.end()) {
      d.model = static_cast<double>(it->inst_count);
      d.abs = d.model - d.reference;
      d.rel = d.abs / d.reference;
      d.ok = std::fabs(d.rel) <= tol.control;
      i.model = static_cast<double>(it->iterations);
      i.abs = i.model - i.reference;
      i.rel = i.abs / i.reference;
      i.ok = it->iterations == pf.iterations;
    }
    out.deltas.push_back(std::move(d));
    out.deltas.push_back(std::move(i));
  }
  {
    const double kb = 2.0 * static_cast<double>(report.control_total_inst) / 1000.0;
    Delta d{"control", "Total", "Capacity (KB)", kb, kReferenceTotalKb, kb - kReferenceTotalKb, kb / kReferenceTotalKb - 1,
            tol.control, true};
    d.ok = std::fabs(d.rel) <= tol.control;
    out.deltas.push_back(std::move(d));
  }

  // Scaling laws.
  constexpr double exact = 1e-9;
  for (const char* id : {"aes-throughput", "sha3-throughput", "hmac-throughput"}) {
    const auto* t = report.table(id);
    if (!t) continue;
    for (const auto& col : t->columns) {
      const auto* q = t->find(kIsc[0], col);
      const auto* h = t->find(kIsc[1], col);
      const auto* f = t->find(kIsc[2], col);
      if (!q || !h || !f) continue;
      out.scaling.push_back(ratio_check("fraction 50/25 " + col, 2.0, h->model / q->model, exact));
      out.scaling.push_back(ratio_check("fraction 100/25 " + col, 4.0, f->model / q->model, exact));
    }
  }
  for (const char* id : {"aes-efficiency", "sha3-efficiency"}) {
    const auto* t = report.table(id);
    if (!t) continue;
    for (const auto* row : kIsc) {
      const auto* base = t->find(row, t->columns[0]);
      for (std::size_t m = 1; m < power_modes().size(); ++m) {
        const auto* c = t->find(row, t->columns[m]);
        if (!base || !c) continue;
        const auto& pm = power_modes()[m];
        const auto& p0 = power_modes()[0];
        out.scaling.push_back(ratio_check("frequency " + pm.name + " " + id + " " + row,
                                          pm.frequency / p0.frequency,
                                          (c->model * pm.current) / (base->model * p0.current), exact));
      }
    }
  }
  if (const auto* t = report.table("aes-throughput")) {
    for (auto d : {CipherDirection::kEncrypt, CipherDirection::kDecrypt})
      for (auto v : {AesVariant::k128, AesVariant::k256}) {
        const auto* cbc = t->find(kIsc[2], Workload::aes_mode(WorkloadKind::kAesCbc, v, d).label());
        const auto* ccm = t->find(kIsc[2], Workload::aes_mode(WorkloadKind::kAesCcm, v, d).label());
        if (cbc && ccm)
          out.scaling.push_back(ratio_check("CCM = CBC/2 " + std::string(to_string(v)) +
                                                (d == CipherDirection::kEncrypt ? " encrypt" : " decrypt"),
                                            0.5, ccm->model / cbc->model, exact));
      }
  }
  if (const auto* t = report.table("sha3-throughput")) {
    const auto* ref = t->find(kIsc[2], "SHA3-256");
    for (auto v : kShaVariants) {
      const auto* c = t->find(kIsc[2], std::string(to_string(v)));
      if (ref && c && v != Sha3Variant::k256)
        out.scaling.push_back(ratio_check("SHA3 rate ratio " + std::string(to_string(v)) + "/SHA3-256",
                                          static_cast<double>(sha3_rate_bytes(v)) / 136.0, c->model / ref->model,
                                          0.01));
    }
  }
  if (const auto* t3 = report.table("sha3-throughput"); t3)
    if (const auto* t4 = report.table("hmac-throughput"))
      for (auto v : kShaVariants) {
        const auto* s = t3->find(kIsc[2], std::string(to_string(v)));
        const auto* h = t4->find(kIsc[2], "HMAC-" + std::string(to_string(v)));
        if (!s || !h) continue;
        const double r = s->model / h->model;
        out.scaling.push_back({"HMAC/SHA3 ratio " + std::string(to_string(v)) + " in [3.5, 4.0]", 3.743, r, 0.25,
                               r >= 3.5 && r <= 4.0});
      }
  {
    const auto find_cycles = [&](const std::string& label) -> const KernelCycles* {
      for (const auto& k : report.kernels)
        if (k.workload == label) return &k;
      return nullptr;
    };
    const auto* cbc = find_cycles("AES-128-CBC encrypt");
    const auto* gcm = find_cycles("AES-128-GCM encrypt");
    if (cbc && gcm) {
      const double ratio = static_cast<double>(gcm->aes_cycles + gcm->ghash_cycles) / static_cast<double>(cbc->aes_cycles);
      out.scaling.push_back(ratio_check("GCM/CBC cycle ratio AES-128 encrypt", 28.337 / 10.999, ratio, 0.15));
    }
  }
  return out;
}

// --- formatting -------------------------------------------------------------

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }
std::string lpad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

}  // namespace

std::string format_text(const PerfReport& report, const Comparison* comparison) {
  std::ostringstream os;
  os << "cycle model: " << report.costs.base_cost << " per command + " << report.costs.shift_unit_cost
     << " per shift step\n";
  os << "calibration: aes " << fixed(report.calibration.aes, 4) << ", sha3 " << fixed(report.calibration.sha3, 4)
     << ", ghash " << fixed(report.calibration.ghash, 4) << "; isc power factor "
     << fixed(report.isc_power_factor, 3) << "\n\n";

  os << "Cycles per subarray pass\n";
  os << pad("workload", 24) << lpad("payload B", 10) << lpad("aes", 10) << lpad("ghash", 10) << lpad("sha3", 10)
     << "\n";
  for (const auto& k : report.kernels)
    os << pad(k.workload, 24) << lpad(std::to_string(k.payload_bytes), 10) << lpad(std::to_string(k.aes_cycles), 10)
       << lpad(std::to_string(k.ghash_cycles), 10) << lpad(std::to_string(k.sha3_cycles), 10) << "\n";

  for (const auto& t : report.tables) {
    const int digits = t.id.ends_with("efficiency") ? 4 : 3;
    os << "\n" << t.title << " (" << t.unit << "; model / reference)\n";
    std::size_t w = 0;
    for (const auto& c : t.columns) w = std::max(w, c.size());
    w = std::max<std::size_t>(w, 18) + 2;
    os << pad("", 20);
    for (const auto& c : t.columns) os << lpad(c, w);
    os << "\n";
    for (const auto& row : t.rows) {
      os << pad(row, 20);
      for (const auto& col : t.columns) {
        const auto* c = t.find(row, col);
        std::string cell = c ? fixed(c->model, digits) : "-";
        if (c && c->reference) cell += " / " + fixed(*c->reference, digits);
        os << lpad(cell, w);
      }
      os << "\n";
    }
  }

  os << "\nControl overhead\n";
  os << pad("program", 24) << pad("function", 16) << lpad("#Inst.", 8) << lpad("KB", 8) << lpad("#Iter.", 8)
     << lpad("ref #Inst.", 12) << lpad("ref #Iter.", 12) << "\n";
  for (const auto& f : report.control) {
    const auto& pf = reference_control_overhead();
    const auto it = std::find_if(pf.begin(), pf.end(), [&](const ReferenceFunction& p) { return p.name == f.name; });
    os << pad(f.program, 24) << pad(f.name, 16) << lpad(std::to_string(f.inst_count), 8)
       << lpad(fixed(static_cast<double>(f.bytes()) / 1000.0, 2), 8) << lpad(std::to_string(f.iterations), 8)
       << lpad(it != pf.end() ? std::to_string(it->inst) : "-", 12)
       << lpad(it != pf.end() ? std::to_string(it->iterations) : "-", 12) << "\n";
  }
  os << pad("Total", 40) << lpad(std::to_string(report.control_total_inst), 8)
     << lpad(fixed(2.0 * static_cast<double>(report.control_total_inst) / 1000.0, 2), 8) << lpad("", 8)
     << lpad(std::to_string(kReferenceTotalInst), 12) << "\n";

  if (comparison) {
    std::size_t bad = 0;
    for (const auto& d : comparison->deltas) bad += !d.ok;
    os << "\nDeltas outside tolerance: " << bad << " of " << comparison->deltas.size() << "\n";
    for (const auto& d : comparison->deltas)
      if (!d.ok)
        os << "  " << d.table << " " << d.row << " / " << d.column << ": " << fixed(d.model, 4) << " vs "
           << fixed(d.reference, 4) << " (" << fixed(100 * d.rel, 2) << "%)\n";
    os << "Scaling checks:\n";
    for (const auto& s : comparison->scaling)
      os << "  [" << (s.ok ? "ok" : "FAIL") << "] " << s.name << ": " << fixed(s.observed, 6) << " (expected "
         << fixed(s.expected, 6) << ")\n";
  }
  return os.str();
}

std::string format_json(const PerfReport& report, const Comparison* comparison) {
  using nlohmann::json;
  json j;
  j["costs"] = {{"base_cost", report.costs.base_cost}, {"shift_unit_cost", report.costs.shift_unit_cost}};
  j["calibration"] = {{"aes", report.calibration.aes},
                      {"sha3", report.calibration.sha3},
                      {"ghash", report.calibration.ghash}};
  j["isc_power_factor"] = report.isc_power_factor;
  j["kernels"] = json::array();
  for (const auto& k : report.kernels)
    j["kernels"].push_back({{"workload", k.workload},
                            {"payload_bytes", k.payload_bytes},
                            {"aes_cycles", k.aes_cycles},
                            {"ghash_cycles", k.ghash_cycles},
                            {"sha3_cycles", k.sha3_cycles}});
  j["tables"] = json::array();
  for (const auto& t : report.tables) {
    json cells = json::array();
    for (const auto& c : t.cells) {
      json cell = {{"row", c.row}, {"column", c.column}, {"model", c.model}};
      cell["reference"] = c.reference ? json(*c.reference) : json(nullptr);
      cells.push_back(std::move(cell));
    }
    j["tables"].push_back({{"id", t.id}, {"title", t.title}, {"unit", t.unit}, {"cells", std::move(cells)}});
  }
  j["control"] = json::array();
  for (const auto& f : report.control)
    j["control"].push_back({{"program", f.program},
                            {"function", f.name},
                            {"inst", f.inst_count},
                            {"bytes", f.bytes()},
                            {"iterations", f.iterations},
                            {"executed", f.executed}});
  j["control_total_inst"] = report.control_total_inst;
  j["control_total_bytes"] = 2 * report.control_total_inst;
  if (comparison) {
    json deltas = json::array();
    for (const auto& d : comparison->deltas)
      deltas.push_back({{"table", d.table},
                        {"row", d.row},
                        {"column", d.column},
                        {"model", d.model},
                        {"reference", d.reference},
                        {"abs", d.abs},
                        {"rel", d.rel},
                        {"tolerance", d.tolerance},
                        {"ok", d.ok}});
    json scaling = json::array();
    for (const auto& s : comparison->scaling)
      scaling.push_back({{"name", s.name},
                         {"expected", s.expected},
                         {"observed", s.observed},
                         {"tolerance", s.tolerance},
                         {"ok", s.ok}});
    j["comparison"] = {{"ok", comparison->ok()}, {"deltas", std::move(deltas)}, {"scaling", std::move(scaling)}};
  }
  return j.dump(2);
}

}  // namespace csram
