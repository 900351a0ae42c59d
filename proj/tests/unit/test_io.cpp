#include <gtest/gtest.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <random>

#include "boxspline/io.hpp"
#include "boxspline/pipelines.hpp"

using namespace boxspline;

namespace {

Image random_image(int w, int h, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  Image img(w, h);
  for (auto& v : img.data) v = static_cast<float>(u(rng));
  return img;
}

std::string u32le(std::uint32_t v) {
  std::string s(4, '\0');
  for (int i = 0; i < 4; ++i) s[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  return s;
}

std::string f32le(float f) {
  return u32le(std::bit_cast<std::uint32_t>(f));
}

std::string svcm(std::uint32_t w, std::uint32_t h, const std::vector<float>& rec, int version = 1) {
  std::string s = "SVCM";
  s += static_cast<char>(version);
  s += std::string(3, '\0');
  s += u32le(w) + u32le(h);
  for (float f : rec) s += f32le(f);
  return s;
}

template <typename F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const IoError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Pgm, EightBitRoundTripIsValueIdentical) {
  Image img(7, 5);
  for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = static_cast<double>(i * 7 % 256) / 255.0;
  const std::string bytes = encode_pgm(img, 8);
  EXPECT_EQ(bytes.substr(0, 11), "P5\n7 5\n255\n");
  EXPECT_EQ(bytes.size(), 11u + 35u);
  const LoadedImage back = decode_image(bytes);
  EXPECT_EQ(back.format, ImageFormat::Pgm8);
  ASSERT_EQ(back.image.width, 7);
  ASSERT_EQ(back.image.height, 5);
  for (std::size_t i = 0; i < img.data.size(); ++i) EXPECT_DOUBLE_EQ(back.image.data[i], img.data[i]);
  EXPECT_EQ(encode_pgm(back.image, 8), bytes);
}

TEST(Pgm, SixteenBitIsBigEndian) {
  Image img(2, 1);
  img.data = {258.0 / 65535.0, 1.0};
  const std::string bytes = encode_pgm(img, 16);
  const std::string header = "P5\n2 1\n65535\n";
  ASSERT_EQ(bytes.substr(0, header.size()), header);
  EXPECT_EQ(static_cast<unsigned char>(bytes[header.size()]), 1);
  EXPECT_EQ(static_cast<unsigned char>(bytes[header.size() + 1]), 2);
  const LoadedImage back = decode_image(bytes);
  EXPECT_EQ(back.format, ImageFormat::Pgm16);
  EXPECT_DOUBLE_EQ(back.image.data[0], 258.0 / 65535.0);
  EXPECT_EQ(encode_pgm(back.image, 16), bytes);
}

TEST(Pgm, OutputIsClampedAndRounded) {
  Image img(3, 1);
  img.data = {-0.5, 1.7, 0.5};
  const LoadedImage back = decode_image(encode_pgm(img, 8));
  EXPECT_EQ(back.image.data[0], 0.0);
  EXPECT_EQ(back.image.data[1], 1.0);
  EXPECT_DOUBLE_EQ(back.image.data[2], 128.0 / 255.0);
}

TEST(Pgm, HeaderCommentsAndWhitespace) {
  const std::string bytes = std::string("P5 # comment\n3\t# another\n 1\n255\n") + std::string("\x00\x80\xff", 3);
  const LoadedImage img = decode_image(bytes);
  ASSERT_EQ(img.image.width, 3);
  EXPECT_DOUBLE_EQ(img.image.data[1], 128.0 / 255.0);
}

TEST(Pgm, MalformedInputIsRejected) {
  EXPECT_NE(error_of([] { decode_image("P5\n2 2\n255\n\x01\x02\x03"); }), "");
  EXPECT_NE(error_of([] { decode_image(std::string("P5\n2 1\n255\n\x01\x02\x03", 14)); }), "");
  EXPECT_NE(error_of([] { decode_image("P5\n2 1\n1000\n\x01\x02"); }).find("maxval"), std::string::npos);
  EXPECT_NE(error_of([] { decode_image("P5\n0 1\n255\n"); }), "");
  EXPECT_NE(error_of([] { decode_image("P2\n1 1\n255\n1"); }), "");
  EXPECT_NE(error_of([] { decode_image(""); }), "");
  EXPECT_NE(error_of([] { decode_image("P5\n-3 1\n255\n"); }), "");
  EXPECT_NE(error_of([] { decode_image("P5\n99999999 99999999\n255\n"); }), "");
}

TEST(Pfm, RoundTripIsBitIdenticalInBothByteOrders) {
  const Image img = random_image(9, 4, 1);
  for (bool big : {false, true}) {
    const std::string bytes = encode_pfm(img, big);
    EXPECT_EQ(bytes.substr(0, 3), "Pf\n");
    EXPECT_NE(bytes.find(big ? "\n1.0\n" : "\n-1.0\n"), std::string::npos);
    const LoadedImage back = decode_image(bytes);
    EXPECT_EQ(back.format, ImageFormat::Pfm);
    EXPECT_EQ(back.image.data, img.data);
    EXPECT_EQ(encode_pfm(back.image, big), bytes);
  }
}

TEST(Pfm, RowsAreStoredBottomToTop) {
  Image img(1, 2);
  img.data = {1.0, 2.0};
  const std::string bytes = encode_pfm(img);
  const std::size_t off = bytes.size() - 8;
  float first = 0;
  std::memcpy(&first, bytes.data() + off, 4);
  if constexpr (std::endian::native == std::endian::little) {
    EXPECT_EQ(first, 2.0f);
  }
}

TEST(Pfm, MalformedInputIsRejected) {
  EXPECT_NE(error_of([] { decode_image("PF\n1 1\n-1.0\n\0\0\0\0\0\0\0\0\0\0\0\0"); }), "");
  EXPECT_NE(error_of([] { decode_image("Pf\n1 1\n0.0\n\0\0\0\0"); }), "");
  EXPECT_NE(error_of([] { decode_image(std::string("Pf\n2 1\n-1.0\n\0\0\0\0", 16)); }), "");
  EXPECT_NE(error_of([] { decode_image("Pf\n1 1\nabc\n"); }), "");
}

TEST(Files, WriteAndReadThroughTheFilesystem) {
  const auto dir = std::filesystem::temp_directory_path() / "boxspline_io_test";
  std::filesystem::create_directories(dir);
  const Image img = random_image(5, 6, 2);
  const std::string pfm = (dir / "a.pfm").string(), pgm = (dir / "a.pgm").string();
  EXPECT_EQ(format_for_path(pfm), ImageFormat::Pfm);
  EXPECT_EQ(format_for_path(pgm), ImageFormat::Pgm16);
  EXPECT_EQ(format_for_path(pgm, 8), ImageFormat::Pgm8);
  write_image(pfm, img, format_for_path(pfm));
  EXPECT_EQ(read_image(pfm).image.data, img.data);
  write_image(pgm, img, ImageFormat::Pgm8);
  EXPECT_EQ(read_image(pgm).format, ImageFormat::Pgm8);
  const std::string missing = (dir / "missing.pgm").string();
  EXPECT_NE(error_of([&] { read_image(missing); }).find(missing), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Svcm, RoundTripIsBitIdentical) {
  CovarianceMap m(3, 2);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.5, 4), v(-0.4, 0.4);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 3; ++x) {
      const auto a = static_cast<float>(u(rng)), c = static_cast<float>(u(rng));
      const auto b = static_cast<float>(v(rng) * std::sqrt(a * c));
      m.set(x, y, a, b, c);
    }
  const std::string bytes = encode_covmap(m);
  EXPECT_EQ(bytes.size(), 16u + 12u * 6u);
  EXPECT_EQ(bytes.substr(0, 4), "SVCM");
  EXPECT_EQ(bytes[4], 1);
  const CovarianceMap back = decode_covmap(bytes);
  EXPECT_EQ(back.width, 3);
  EXPECT_EQ(back.height, 2);
  EXPECT_EQ(back.c11, m.c11);
  EXPECT_EQ(back.c12, m.c12);
  EXPECT_EQ(back.c22, m.c22);
  EXPECT_EQ(encode_covmap(back), bytes);
}

TEST(Svcm, LayoutIsLittleEndianRowMajor) {
  const std::string bytes = svcm(2, 1, {1, 0, 2, 3, 0.5f, 4});
  const CovarianceMap m = decode_covmap(bytes);
  EXPECT_EQ(m.c11[1], 3.0);
  EXPECT_EQ(m.c12[1], 0.5);
  EXPECT_EQ(m.c22[0], 2.0);
}

TEST(Svcm, MalformedInputIsRejectedWithDiagnostic) {
  const std::vector<float> ok{1, 0, 1};
  std::string bad_magic = svcm(1, 1, ok);
  bad_magic[0] = 'X';
  EXPECT_NE(error_of([&] { decode_covmap(bad_magic); }).find("magic"), std::string::npos);
  EXPECT_NE(error_of([&] { decode_covmap(svcm(1, 1, ok, 2)); }).find("version"), std::string::npos);
  std::string reserved = svcm(1, 1, ok);
  reserved[6] = 1;
  EXPECT_NE(error_of([&] { decode_covmap(reserved); }), "");
  EXPECT_NE(error_of([&] { decode_covmap(svcm(1, 1, ok).substr(0, 20)); }).find("length"), std::string::npos);
  EXPECT_NE(error_of([&] { decode_covmap(svcm(1, 1, ok) + "x"); }).find("length"), std::string::npos);
  EXPECT_NE(error_of([&] { decode_covmap(svcm(2, 1, {1, 0, 1, 1, 2, 1})); }).find("(1, 0)"), std::string::npos);
  EXPECT_NE(error_of([&] { decode_covmap(svcm(1, 1, {NAN, 0, 1})); }), "");
  EXPECT_NE(error_of([&] { decode_covmap("SVC"); }), "");
  EXPECT_NE(error_of([&] { decode_covmap(svcm(0xffffffffu, 0xffffffffu, {})); }), "");
}
