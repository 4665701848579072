#pragma once

#include "vwl/config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace vwl {

/// Environment variable that, when set, is prepended to relative output paths.
inline constexpr const char* kOutputRootVar = "VWL_OUTPUT_ROOT";

const std::vector<std::string>& subcommands();

/// Output directory for a config, honoring the root override.
std::filesystem::path output_directory(const RunConfig& cfg);

/// 64-bit FNV-1a of a file's bytes.
std::uint64_t file_checksum(const std::filesystem::path& path);

/// Runs one subcommand, writing artifacts plus manifest.json to the output
/// directory and one verdict line per experiment to `out`.
/// Returns 0 if every verdict passes, 1 if any fails, 2 on usage/config errors.
int run(const std::string& subcommand, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace vwl
