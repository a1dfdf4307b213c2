#include <gtest/gtest.h>

#include <cstring>

#include "iqa/errors.hpp"
#include "iqa/image.hpp"
#include "iqa/png_io.hpp"
#include "test_util.hpp"

namespace iqa {
namespace {

Image quantized(int w, int h, int c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(0, 255);
  Image img(w, h, c);
  for (float& v : img.data) v = static_cast<float>(u(rng)) / 255.0f;
  return img;
}

TEST(Png, SinglePixelExtremes) {
  EXPECT_EQ(decode_png(encode_png(make_image(1, 1, 1, {1.0f}))).data, std::vector<float>{1.0f});
  EXPECT_EQ(decode_png(encode_png(make_image(1, 1, 1, {0.0f}))).data, std::vector<float>{0.0f});
}

TEST(Png, RoundTripIsBitExactFor8BitContent) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (int c : {1, 3}) {
      const Image img = quantized(7 + static_cast<int>(seed), 5, c, seed);
      const Image back = decode_png(encode_png(img));
      ASSERT_TRUE(back.same_shape(img));
      EXPECT_EQ(back.data, img.data) << "seed " << seed << " channels " << c;
    }
  }
}

TEST(Png, TruncatedStreamReportsOffset) {
  auto bytes = encode_png(quantized(16, 16, 3, 3));
  bytes.resize(bytes.size() / 2);
  try {
    decode_png(bytes);
    FAIL() << "expected DecodeError";
  } catch (const DecodeError& e) {
    EXPECT_GT(e.offset(), 0u);
    EXPECT_LE(e.offset(), bytes.size());
  }
}

TEST(Png, GarbageIsRejectedAtStart) {
  const std::vector<std::uint8_t> junk(64, 0x42);
  try {
    decode_png(junk);
    FAIL() << "expected DecodeError";
  } catch (const DecodeError& e) {
    EXPECT_LE(e.offset(), 8u);
  }
}

TEST(RawFormat, RoundTripAndHeader) {
  const Image img = test::random_image(5, 3, 3, 9);
  const auto bytes = encode_raw(img);
  ASSERT_EQ(bytes.size(), 16 + img.size() * 4);
  EXPECT_EQ(std::memcmp(bytes.data(), "IMGF", 4), 0);
  EXPECT_EQ(bytes[4], 3);  // height, little endian
  EXPECT_EQ(bytes[8], 5);  // width
  EXPECT_EQ(bytes[12], 3);
  EXPECT_EQ(decode_raw(bytes), img);
}

TEST(RawFormat, RejectsShortPayload) {
  auto bytes = encode_raw(test::random_image(4, 4, 1, 1));
  bytes.pop_back();
  EXPECT_THROW(decode_raw(bytes), DecodeError);
}

TEST(ImageIo, LoadSniffsFormat) {
  test::TempDir dir("img");
  const Image img = quantized(6, 4, 3, 5);
  save_image(dir / "a.png", img);
  save_image(dir / "a.imgf", img);
  EXPECT_EQ(load_image(dir / "a.png"), img);
  EXPECT_EQ(load_image(dir / "a.imgf"), img);
}

TEST(Image, ValidateRejectsBadInvariants) {
  EXPECT_NO_THROW(validate(Image(2, 2, 1)));
  EXPECT_THROW(validate(Image(2, 2, 2)), ArgumentError);
  Image bad(2, 2, 1);
  bad.data[0] = 1.5f;
  EXPECT_THROW(validate(bad), ArgumentError);
  bad.data[0] = std::nanf("");
  EXPECT_THROW(validate(bad), ArgumentError);
  EXPECT_THROW(make_image(2, 2, 1, {0.0f}), ArgumentError);
}

TEST(Luminance, Weights) {
  const Image gray = test::random_image(3, 3, 1, 2);
  EXPECT_EQ(to_luminance(gray), gray);
  EXPECT_FLOAT_EQ(to_luminance(make_image(1, 1, 3, {1.0f, 1.0f, 1.0f})).data[0], 1.0f);
  EXPECT_NEAR(to_luminance(make_image(1, 1, 3, {1.0f, 0.0f, 0.0f})).data[0], 0.299, 1e-7);
}

TEST(Image, FlipTwiceIsIdentity) {
  const Image img = test::random_image(5, 4, 3, 4);
  EXPECT_EQ(flip_horizontal(flip_horizontal(img)), img);
  EXPECT_EQ(flip_horizontal(img).at(1, 2, 0), img.at(1, 2, 4));
}

}  // namespace
}  // namespace iqa
