#include "iqa/image.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "iqa/errors.hpp"
#include "iqa/png_io.hpp"

namespace iqa {

void validate(const Image& img) {
  if (img.channels != 1 && img.channels != 3)
    throw ArgumentError("image must have 1 or 3 channels, got " + std::to_string(img.channels));
  if (img.width <= 0 || img.height <= 0) throw ArgumentError("image dimensions must be positive");
  if (img.data.size() != static_cast<std::size_t>(img.width) * img.height * img.channels)
    throw ArgumentError("image data length does not match width*height*channels");
  for (float v : img.data)
    if (!std::isfinite(v) || v < 0.0f || v > 1.0f)
      throw ArgumentError("image samples must be finite and within [0,1]");
}

Image make_image(int width, int height, int channels, std::vector<float> data) {
  Image img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.data = std::move(data);
  validate(img);
  return img;
}

ImageD to_double(const Image& img) {
  ImageD out(img.width, img.height, img.channels);
  std::copy(img.data.begin(), img.data.end(), out.data.begin());
  return out;
}

Image to_image(const ImageD& img) {
  Image out(img.width, img.height, img.channels);
  std::transform(img.data.begin(), img.data.end(), out.data.begin(),
                 [](double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); });
  return out;
}

namespace {

template <typename T>
Raster<T> luminance_impl(const Raster<T>& img) {
  if (img.channels == 1) return img;
  if (img.channels != 3) throw ArgumentError("luminance needs 1 or 3 channels");
  Raster<T> out(img.width, img.height, 1);
  auto r = img.plane(0), g = img.plane(1), b = img.plane(2);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    double y = kLumaR * r[i] + kLumaG * g[i] + kLumaB * b[i];
    out.data[i] = static_cast<T>(y);
  }
  return out;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

}  // namespace

Image to_luminance(const Image& img) {
  Image out = luminance_impl(img);
  for (float& v : out.data) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

ImageD to_luminance(const ImageD& img) { return luminance_impl(img); }

std::vector<std::uint8_t> encode_raw(const Image& img) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + img.data.size() * 4);
  out.insert(out.end(), {'I', 'M', 'G', 'F'});
  put_u32(out, static_cast<std::uint32_t>(img.height));
  put_u32(out, static_cast<std::uint32_t>(img.width));
  put_u32(out, static_cast<std::uint32_t>(img.channels));
  for (float v : img.data) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

Image decode_raw(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) throw DecodeError("raw tensor shorter than its header", bytes.size());
  if (std::memcmp(bytes.data(), "IMGF", 4) != 0) throw DecodeError("bad raw tensor magic", 0);
  const std::uint32_t h = get_u32(bytes, 4);
  const std::uint32_t w = get_u32(bytes, 8);
  const std::uint32_t c = get_u32(bytes, 12);
  const std::size_t n = static_cast<std::size_t>(h) * w * c;
  if (bytes.size() != 16 + 4 * n)
    throw DecodeError("raw tensor payload length does not match header", bytes.size());
  std::vector<float> data(n);
  for (std::size_t i = 0; i < n; ++i) data[i] = std::bit_cast<float>(get_u32(bytes, 16 + 4 * i));
  return make_image(static_cast<int>(w), static_cast<int>(h), static_cast<int>(c), std::move(data));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ArgumentError("short write to " + path.string());
}

Image load_image(const std::filesystem::path& path) {
  auto bytes = read_file(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "IMGF", 4) == 0) return decode_raw(bytes);
  return decode_png(bytes);
}

void save_image(const std::filesystem::path& path, const Image& img) {
  if (path.extension() == ".imgf")
    write_file(path, encode_raw(img));
  else
    write_file(path, encode_png(img));
}

}  // namespace iqa
