#pragma once

#include <cstdint>
#include <filesystem>

#include "gsparse/trainer.hpp"

namespace gsparse {

constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary container: magic "SGSG", u32 version, u32 tensor count, then per
/// tensor u32 name length, name bytes, u64 rows, u64 cols and rows*cols
/// little-endian f64 values in row-major order.
void save_checkpoint(const ModelState& state, const std::filesystem::path& file);
ModelState load_checkpoint(const std::filesystem::path& file);

} // namespace gsparse
