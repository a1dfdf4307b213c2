#include "iqa/png_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstring>

#include "iqa/errors.hpp"

namespace iqa {
namespace {

struct ReadContext {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
  char message[256];
};

void on_error(png_structp png, png_const_charp msg) {
  auto* ctx = static_cast<ReadContext*>(png_get_error_ptr(png));
  std::strncpy(ctx->message, msg, sizeof(ctx->message) - 1);
  png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

void on_read(png_structp png, png_bytep out, png_size_t len) {
  auto* ctx = static_cast<ReadContext*>(png_get_io_ptr(png));
  if (ctx->size - ctx->pos < len) {
    png_error(png, "unexpected end of stream");
  }
  std::memcpy(out, ctx->data + ctx->pos, len);
  ctx->pos += len;
}

struct DecodedRaw {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;   // after transforms (gray, gray+alpha, rgb, rgba)
  int bytes_per_sample = 1;
};

// Keeps setjmp in a frame holding only trivially destructible locals.
bool decode_into(ReadContext& ctx, DecodedRaw& info, std::vector<std::uint8_t>& pixels,
                 std::vector<png_bytep>& rows) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &ctx, on_error, on_warning);
  if (png == nullptr) return false;
  png_infop pinfo = png_create_info_struct(png);
  if (pinfo == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &pinfo, nullptr);
    return false;
  }
  png_set_read_fn(png, &ctx, on_read);
  png_read_info(png, pinfo);

  const int color = png_get_color_type(png, pinfo);
  const int depth = png_get_bit_depth(png, pinfo);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, pinfo, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (depth == 16) png_set_swap(png);  // little-endian samples in memory
  png_read_update_info(png, pinfo);

  info.width = png_get_image_width(png, pinfo);
  info.height = png_get_image_height(png, pinfo);
  info.channels = png_get_channels(png, pinfo);
  info.bytes_per_sample = png_get_bit_depth(png, pinfo) == 16 ? 2 : 1;
  const std::size_t stride = png_get_rowbytes(png, pinfo);
  pixels.resize(stride * info.height);
  rows.resize(info.height);
  for (png_uint_32 y = 0; y < info.height; ++y) rows[y] = pixels.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &pinfo, nullptr);
  return true;
}

struct WriteContext {
  std::vector<std::uint8_t>* out;
  char message[256];
};

void on_write(png_structp png, png_bytep data, png_size_t len) {
  auto* ctx = static_cast<WriteContext*>(png_get_io_ptr(png));
  ctx->out->insert(ctx->out->end(), data, data + len);
}

void on_flush(png_structp) {}

void on_write_error(png_structp png, png_const_charp msg) {
  auto* ctx = static_cast<WriteContext*>(png_get_error_ptr(png));
  std::strncpy(ctx->message, msg, sizeof(ctx->message) - 1);
  png_longjmp(png, 1);
}

bool encode_into(WriteContext& ctx, const Image& img, std::vector<png_bytep>& rows) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &ctx, on_write_error, on_warning);
  if (png == nullptr) return false;
  png_infop pinfo = png_create_info_struct(png);
  if (pinfo == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &pinfo);
    return false;
  }
  png_set_write_fn(png, &ctx, on_write, on_flush);
  png_set_IHDR(png, pinfo, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height),
               8, img.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, pinfo);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &pinfo);
  return true;
}

}  // namespace

Image decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
    throw DecodeError("not a PNG stream (bad signature)", 0);

  ReadContext ctx{bytes.data(), bytes.size(), 0, {}};
  DecodedRaw info;
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  if (!decode_into(ctx, info, pixels, rows))
    throw DecodeError(std::string("PNG decode failed: ") + ctx.message, ctx.pos);

  const bool has_alpha = info.channels == 2 || info.channels == 4;
  const int color_channels = info.channels - (has_alpha ? 1 : 0);
  const int w = static_cast<int>(info.width), h = static_cast<int>(info.height);
  const double scale = info.bytes_per_sample == 2 ? 65535.0 : 255.0;
  Image img(w, h, color_channels);
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* row = rows[y];
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < color_channels; ++c) {
        const std::size_t s = static_cast<std::size_t>(x) * info.channels + c;
        unsigned v = info.bytes_per_sample == 2
                         ? static_cast<unsigned>(row[2 * s]) | (static_cast<unsigned>(row[2 * s + 1]) << 8)
                         : row[s];
        img.at(c, y, x) = static_cast<float>(v / scale);
      }
    }
  }
  return img;
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  validate(img);
  const int w = img.width, h = img.height, ch = img.channels;
  std::vector<std::uint8_t> interleaved(static_cast<std::size_t>(w) * h * ch);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < ch; ++c)
        interleaved[(static_cast<std::size_t>(y) * w + x) * ch + c] =
            static_cast<std::uint8_t>(std::lround(img.at(c, y, x) * 255.0));
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = interleaved.data() + static_cast<std::size_t>(y) * w * ch;

  std::vector<std::uint8_t> out;
  WriteContext ctx{&out, {}};
  if (!encode_into(ctx, img, rows)) throw ArgumentError(std::string("PNG encode failed: ") + ctx.message);
  return out;
}

}  // namespace iqa
