#include "cryptosram/program.hpp"

#include "cryptosram/error.hpp"

namespace csram {

BlockGeometry BlockGeometry::make(std::size_t n, std::size_t m, std::size_t k) {
  width_code(m);  // throws for widths without a code
  if (m > kColumns) throw Error(ErrorCode::kWidthMismatch, "block width exceeds subarray columns");
  if (n + k + 1 > kRows) throw Error(ErrorCode::kInvalidArgument, "n + k + 1 exceeds subarray rows");
  return {n, m, k, kColumns / m};
}

std::string_view to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::kState: return "state";
    case RegionKind::kKey: return "key";
    case RegionKind::kTemp: return "temp";
    case RegionKind::kConstant: return "constant";
    case RegionKind::kMessage: return "message";
    case RegionKind::kData: return "data";
    case RegionKind::kExtension: return "extension";
  }
  return "?";
}

RegionKind region_kind_from_string(std::string_view s) {
  for (auto k : {RegionKind::kState, RegionKind::kKey, RegionKind::kTemp, RegionKind::kConstant,
                 RegionKind::kMessage, RegionKind::kData, RegionKind::kExtension})
    if (to_string(k) == s) return k;
  throw Error(ErrorCode::kParseError, "unknown region kind '" + std::string(s) + "'");
}

const LayoutRegion& LayoutMap::add(std::string name, RegionKind kind, std::size_t first_row,
                                   std::size_t row_count) {
  if (row_count == 0 || first_row + row_count > kRows)
    throw Error(ErrorCode::kInvalidArgument, "region '" + name + "' outside the subarray");
  for (const auto& r : regions_) {
    if (r.name == name) throw Error(ErrorCode::kInvalidArgument, "duplicate region '" + name + "'");
    if (first_row < r.first_row + r.row_count && r.first_row < first_row + row_count)
      throw Error(ErrorCode::kInvalidArgument, "region '" + name + "' overlaps '" + r.name + "'");
  }
  regions_.push_back({std::move(name), kind, first_row, row_count});
  return regions_.back();
}

const LayoutRegion* LayoutMap::find_row(std::size_t row) const {
  for (const auto& r : regions_)
    if (r.contains(row)) return &r;
  return nullptr;
}

const LayoutRegion& LayoutMap::region(std::string_view name) const {
  for (const auto& r : regions_)
    if (r.name == name) return r;
  throw Error(ErrorCode::kInvalidArgument, "no layout region '" + std::string(name) + "'");
}

std::size_t LayoutMap::row(std::string_view name, std::size_t offset) const {
  const auto& r = region(name);
  if (offset >= r.row_count)
    throw Error(ErrorCode::kRowOutOfRange, "offset " + std::to_string(offset) + " in region '" + r.name + "'");
  return r.first_row + offset;
}

const FunctionDescriptor& KernelProgram::add_function(std::string fn_name, std::span<const CommandWord> cmds,
                                                      std::vector<StrideRule> strides) {
  if (find_function(fn_name)) throw Error(ErrorCode::kInvalidArgument, "duplicate function '" + fn_name + "'");
  FunctionDescriptor fd;
  fd.name = std::move(fn_name);
  fd.base_address = static_cast<std::uint32_t>(command_array.words.size());
  fd.inst_count = static_cast<std::uint32_t>(cmds.size());
  fd.strides = std::move(strides);
  command_array.words.insert(command_array.words.end(), cmds.begin(), cmds.end());
  functions.push_back(std::move(fd));
  return functions.back();
}

void KernelProgram::invoke(std::string_view fn_name, std::uint32_t iterations) {
  schedule.emplace_back(Invocation{std::string(fn_name), iterations});
}

void KernelProgram::host_write(std::size_t row, const Row& data) {
  schedule.emplace_back(HostAction{HostAction::Kind::kWriteConstant, row, data, {}});
}

void KernelProgram::host_load(std::size_t row, std::string binding) {
  schedule.emplace_back(HostAction{HostAction::Kind::kLoadBinding, row, {}, std::move(binding)});
}

void KernelProgram::host_capture(std::size_t row, std::string binding) {
  schedule.emplace_back(HostAction{HostAction::Kind::kCaptureRow, row, {}, std::move(binding)});
}

const FunctionDescriptor* KernelProgram::find_function(std::string_view fn_name) const {
  for (const auto& f : functions)
    if (f.name == fn_name) return &f;
  return nullptr;
}

std::vector<std::uint64_t> KernelProgram::scheduled_iterations() const {
  std::vector<std::uint64_t> iters(functions.size(), 0);
  for (const auto& step : schedule) {
    const auto* inv = std::get_if<Invocation>(&step);
    if (!inv) continue;
    for (std::size_t i = 0; i < functions.size(); ++i)
      if (functions[i].name == inv->function) iters[i] += inv->iterations;
  }
  return iters;
}

std::uint64_t KernelProgram::scheduled_commands() const {
  const auto iters = scheduled_iterations();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < functions.size(); ++i) total += iters[i] * functions[i].inst_count;
  return total;
}

}  // namespace csram
