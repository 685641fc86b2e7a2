#pragma once

#include <filesystem>

#include "hsu/network.hpp"

namespace hsu {

inline constexpr std::uint32_t kModelFormatVersion = 1;

// Versioned self-describing binary document: header (format version,
// vocabulary with stable indices, k, d_max, training configuration echo,
// duplicate-content table) followed by the named weight matrices with shape
// and row-major values. save -> load -> save is byte-identical.
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace hsu
