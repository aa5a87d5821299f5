#pragma once

#include <filesystem>
#include <string>

namespace embedlab {

// Whole-file read; throws DataError when the path cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Write-temp-then-rename so readers never observe a torn file. Experiment
// resume relies on this.
void atomic_write(const std::filesystem::path& path, const std::string& bytes);

}  // namespace embedlab
