#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace oamlink {

// %.10g, except infinities render as the bare tokens "inf" / "-inf".
std::string format_sig(double v);

std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

// Write-to-temp then rename, so readers never observe a partial file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

std::string iso8601_utc_now();

}  // namespace oamlink
