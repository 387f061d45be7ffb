#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cryptosram/program.hpp"

namespace csram {

// JSON program container: geometry, layout, hex command words, function table
// and schedule. Parse failures raise kParseError.
std::string program_to_json(const KernelProgram& program, int indent = 2);
KernelProgram program_from_json(std::string_view text);

void save_program(const KernelProgram& program, const std::filesystem::path& path);
KernelProgram load_program(const std::filesystem::path& path);

}  // namespace csram
