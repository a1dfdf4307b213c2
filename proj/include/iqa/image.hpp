#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace iqa {

/// Planar raster, channel-major: sample (c, y, x) lives at
/// `data[(c * height + y) * width + x]`.
template <typename T>
struct Raster {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<T> data;

  Raster() = default;
  Raster(int w, int h, int c, T fill = T(0))
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {}

  std::size_t plane_size() const { return static_cast<std::size_t>(width) * height; }
  std::size_t size() const { return data.size(); }

  T& at(int c, int y, int x) { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
  const T& at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }

  std::span<T> plane(int c) { return {data.data() + c * plane_size(), plane_size()}; }
  std::span<const T> plane(int c) const { return {data.data() + c * plane_size(), plane_size()}; }

  bool same_shape(const Raster& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
  template <typename U>
  bool same_shape(const Raster<U>& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }

  friend bool operator==(const Raster&, const Raster&) = default;
};

/// Pixel samples in [0,1]; 1 (gray) or 3 (RGB) channels.
using Image = Raster<float>;

/// Double-precision working raster used by metrics, gradients and the
/// optimizer. Not range-restricted.
using ImageD = Raster<double>;

/// Throws ArgumentError unless `img` satisfies the Image invariants
/// (channels in {1,3}, consistent length, finite samples in [0,1]).
void validate(const Image& img);

Image make_image(int width, int height, int channels, std::vector<float> data);

ImageD to_double(const Image& img);
/// Rounds to float and clamps to [0,1].
Image to_image(const ImageD& img);

/// Rec.601 luma; identity for single-channel input.
Image to_luminance(const Image& img);
ImageD to_luminance(const ImageD& img);

inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

template <typename T>
Raster<T> flip_horizontal(const Raster<T>& img) {
  Raster<T> out(img.width, img.height, img.channels);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) out.at(c, y, img.width - 1 - x) = img.at(c, y, x);
  return out;
}

/// Raw tensor side-format: "IMGF", u32 height, u32 width, u32 channels
/// (little endian), then float32 samples in planar order.
std::vector<std::uint8_t> encode_raw(const Image& img);
Image decode_raw(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Loads .png or the raw "IMGF" format, chosen by content.
Image load_image(const std::filesystem::path& path);
/// Writes PNG unless the extension is ".imgf".
void save_image(const std::filesystem::path& path, const Image& img);

}  // namespace iqa
