#pragma once

#include <string>

#include "f2a/image.hpp"

namespace f2a {

// 8-bit RGB PNG/JPEG decode into [0,1] (values divided by 255).
// Throws DataError when the file is missing or cannot be decoded.
Image load_image(const std::string& path);

// Encodes round(255 * v) per channel; format chosen by extension (.png/.jpg).
void save_image(const std::string& path, const Image& img);

// Single-channel 8-bit PNG with value round(255 * M).
void save_attention_png(const std::string& path, const AttentionMap& map);

} // namespace f2a
