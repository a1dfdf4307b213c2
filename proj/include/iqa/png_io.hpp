#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iqa/image.hpp"

namespace iqa {

/// Decodes 8- or 16-bit grayscale/RGB PNG (palette and alpha variants are
/// expanded; alpha is dropped). Samples are scaled to [0,1].
/// Throws DecodeError carrying the byte offset reached.
Image decode_png(std::span<const std::uint8_t> bytes);

/// 8-bit PNG, gray or RGB depending on the channel count.
std::vector<std::uint8_t> encode_png(const Image& img);

}  // namespace iqa
