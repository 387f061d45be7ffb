#include "cryptosram/program_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cryptosram/error.hpp"

namespace csram {

using nlohmann::json;

namespace {

constexpr std::string_view kFormat = "cryptosram-program";
constexpr int kVersion = 1;

std::string word_hex(std::uint16_t w) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%04x", w);
  return buf;
}

std::uint16_t parse_word(const std::string& s) {
  if (s.size() != 4) throw Error(ErrorCode::kParseError, "command word '" + s + "' is not 4 hex digits");
  std::uint32_t v = 0;
  for (char c : s) {
    v <<= 4;
    if (c >= '0' && c <= '9') v |= static_cast<std::uint32_t>(c - '0');
    else if (c >= 'a' && c <= 'f') v |= static_cast<std::uint32_t>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') v |= static_cast<std::uint32_t>(c - 'A' + 10);
    else throw Error(ErrorCode::kParseError, "command word '" + s + "' is not hex");
  }
  return static_cast<std::uint16_t>(v);
}

}  // namespace

std::string program_to_json(const KernelProgram& p, int indent) {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["name"] = p.name;
  j["geometry"] = {{"n", p.geometry.n}, {"m", p.geometry.m}, {"k", p.geometry.k}, {"p", p.geometry.p}};
  j["layout"] = json::array();
  for (const auto& r : p.layout.regions())
    j["layout"].push_back(
        {{"name", r.name}, {"kind", to_string(r.kind)}, {"first_row", r.first_row}, {"row_count", r.row_count}});
  j["capacity_bytes"] = p.command_array.capacity_bytes;
  j["commands"] = json::array();
  for (const auto& w : p.command_array.words) j["commands"].push_back(word_hex(encode(w)));

  const auto iters = p.scheduled_iterations();
  j["functions"] = json::array();
  for (std::size_t i = 0; i < p.functions.size(); ++i) {
    const auto& f = p.functions[i];
    json strides = json::array();
    for (const auto& s : f.strides)
      strides.push_back({{"offset", s.offset}, {"increment", s.increment}, {"period", s.period}});
    j["functions"].push_back({{"name", f.name},
                              {"base_address", f.base_address},
                              {"inst_count", f.inst_count},
                              {"iterations", iters[i]},
                              {"strides", strides}});
  }

  j["schedule"] = json::array();
  for (const auto& step : p.schedule) {
    if (const auto* inv = std::get_if<Invocation>(&step)) {
      j["schedule"].push_back({{"invoke", inv->function}, {"iterations", inv->iterations}});
      continue;
    }
    const auto& h = std::get<HostAction>(step);
    switch (h.kind) {
      case HostAction::Kind::kWriteConstant:
        j["schedule"].push_back({{"write", h.row}, {"data", h.data.to_hex()}});
        break;
      case HostAction::Kind::kLoadBinding:
        j["schedule"].push_back({{"load", h.row}, {"binding", h.binding}});
        break;
      case HostAction::Kind::kCaptureRow:
        j["schedule"].push_back({{"capture", h.row}, {"binding", h.binding}});
        break;
    }
  }
  return j.dump(indent);
}

KernelProgram program_from_json(std::string_view text) {
  KernelProgram p;
  try {
    const json j = json::parse(text);
    if (j.value("format", std::string{}) != kFormat)
      throw Error(ErrorCode::kParseError, "not a program container");
    if (j.value("version", 0) != kVersion)
      throw Error(ErrorCode::kParseError, "unsupported container version");
    p.name = j.value("name", std::string{});
    const auto& g = j.at("geometry");
    p.geometry = BlockGeometry::make(g.at("n"), g.at("m"), g.at("k"));
    for (const auto& r : j.at("layout"))
      p.layout.add(r.at("name"), region_kind_from_string(r.at("kind").get<std::string>()), r.at("first_row"),
                   r.at("row_count"));
    p.command_array.capacity_bytes = j.value("capacity_bytes", kDefaultCommandCapacityBytes);
    for (const auto& w : j.at("commands")) p.command_array.words.push_back(decode(parse_word(w)));
    for (const auto& f : j.at("functions")) {
      FunctionDescriptor fd;
      fd.name = f.at("name");
      fd.base_address = f.at("base_address");
      fd.inst_count = f.at("inst_count");
      for (const auto& s : f.value("strides", json::array()))
        fd.strides.push_back({s.at("offset"), s.at("increment"), s.value("period", 0u)});
      p.functions.push_back(std::move(fd));
    }
    for (const auto& s : j.at("schedule")) {
      if (s.contains("invoke")) {
        p.invoke(s.at("invoke").get<std::string>(), s.value("iterations", 1u));
      } else if (s.contains("write")) {
        p.host_write(s.at("write"), Row::from_hex(s.at("data").get<std::string>()));
      } else if (s.contains("load")) {
        p.host_load(s.at("load"), s.at("binding"));
      } else if (s.contains("capture")) {
        p.host_capture(s.at("capture"), s.at("binding"));
      } else {
        throw Error(ErrorCode::kParseError, "unknown schedule step " + s.dump());
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return p;
}

void save_program(const KernelProgram& program, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << program_to_json(program) << '\n';
}

KernelProgram load_program(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return program_from_json(ss.str());
}

}  // namespace csram
