#pragma once

#include <filesystem>
#include <string>

namespace potfuse {

/// Writes to "<path>.tmp" and renames over `path`, so readers never see a
/// half-written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// "%.12g" formatting used by every numeric report field.
std::string format_value(double v);

}  // namespace potfuse
