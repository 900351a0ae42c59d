#include "boxspline/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace boxspline {

namespace {

constexpr std::uint64_t kMaxPixels = std::uint64_t(1) << 30;

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  bool at_end() const { return pos >= s.size(); }

  void skip_space_and_comments() {
    while (pos < s.size()) {
      const char c = s[pos];
      if (c == '#') {
        while (pos < s.size() && s[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
        ++pos;
      } else {
        break;
      }
    }
  }

  std::string_view token() {
    skip_space_and_comments();
    const std::size_t b = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return s.substr(b, pos - b);
  }

  long long integer(const char* what) {
    const std::string_view t = token();
    long long v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || p != t.data() + t.size())
      throw IoError(std::string("malformed header: expected ") + what);
    return v;
  }

  // Exactly one whitespace byte separates the header from the raster.
  void single_space() {
    if (pos >= s.size() || !std::isspace(static_cast<unsigned char>(s[pos])))
      throw IoError("malformed header: missing separator before raster data");
    ++pos;
  }
};

void check_dims(long long w, long long h) {
  if (w <= 0 || h <= 0) throw IoError("image dimensions must be positive");
  if (static_cast<std::uint64_t>(w) * static_cast<std::uint64_t>(h) > kMaxPixels)
    throw IoError("image dimensions too large");
}

float load_f32(const char* p, bool little) {
  std::uint32_t u = 0;
  for (int i = 0; i < 4; ++i) {
    const std::uint32_t byte = static_cast<unsigned char>(p[little ? i : 3 - i]);
    u |= byte << (8 * i);
  }
  return std::bit_cast<float>(u);
}

void store_f32(std::string& out, float f, bool little) {
  const std::uint32_t u = std::bit_cast<std::uint32_t>(f);
  for (int i = 0; i < 4; ++i) {
    const int shift = 8 * (little ? i : 3 - i);
    out.push_back(static_cast<char>((u >> shift) & 0xFFu));
  }
}

std::uint32_t load_u32le(const char* p) {
  std::uint32_t u = 0;
  for (int i = 0; i < 4; ++i) u |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return u;
}

void store_u32le(std::string& out, std::uint32_t u) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xFFu));
}

LoadedImage decode_pgm(std::string_view bytes) {
  Cursor c{bytes, 2};
  const long long w = c.integer("width");
  const long long h = c.integer("height");
  const long long maxval = c.integer("maxval");
  check_dims(w, h);
  if (maxval != 255 && maxval != 65535) throw IoError("PGM maxval must be 255 or 65535");
  c.single_space();
  const std::size_t bps = maxval == 255 ? 1 : 2;
  const std::size_t need = static_cast<std::size_t>(w) * h * bps;
  if (bytes.size() - c.pos < need) throw IoError("PGM raster is truncated");
  if (bytes.size() - c.pos > need) throw IoError("PGM has trailing bytes after the raster");
  LoadedImage r;
  r.format = bps == 1 ? ImageFormat::Pgm8 : ImageFormat::Pgm16;
  r.image = Image(static_cast<int>(w), static_cast<int>(h));
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + c.pos);
  const double scale = 1.0 / static_cast<double>(maxval);
  for (std::size_t i = 0; i < r.image.data.size(); ++i) {
    const unsigned v = bps == 1 ? p[i] : (static_cast<unsigned>(p[2 * i]) << 8) | p[2 * i + 1];
    r.image.data[i] = v * scale;
  }
  return r;
}

LoadedImage decode_pfm(std::string_view bytes) {
  Cursor c{bytes, 2};
  const long long w = c.integer("width");
  const long long h = c.integer("height");
  const std::string sc(c.token());
  check_dims(w, h);
  double scale = 0.0;
  {
    std::istringstream is(sc);
    is >> scale;
    if (!is || !is.eof() || scale == 0.0 || !std::isfinite(scale)) throw IoError("malformed PFM scale field");
  }
  c.single_space();
  const bool little = scale < 0.0;
  const std::size_t need = static_cast<std::size_t>(w) * h * 4;
  if (bytes.size() - c.pos < need) throw IoError("PFM raster is truncated");
  if (bytes.size() - c.pos > need) throw IoError("PFM has trailing bytes after the raster");
  LoadedImage r;
  r.format = ImageFormat::Pfm;
  r.image = Image(static_cast<int>(w), static_cast<int>(h));
  const char* base = bytes.data() + c.pos;
  for (int y = 0; y < r.image.height; ++y) {
    const char* row = base + static_cast<std::size_t>(r.image.height - 1 - y) * w * 4;
    for (int x = 0; x < r.image.width; ++x) r.image.at(x, y) = load_f32(row + 4 * x, little);
  }
  return r;
}

void check_image(const Image& img) {
  if (img.width <= 0 || img.height <= 0) throw IoError("cannot encode an empty image");
}

}  // namespace

LoadedImage decode_image(std::string_view bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == 'f') return decode_pfm(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == 'F') throw IoError("colour PFM images are not supported");
  throw IoError("unrecognized image format (expected binary PGM 'P5' or grayscale PFM 'Pf')");
}

LoadedImage read_image(const std::string& path) {
  try {
    return decode_image(read_file(path));
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::string encode_pgm(const Image& img, int bits) {
  check_image(img);
  if (bits != 8 && bits != 16) throw IoError("PGM bit depth must be 8 or 16");
  const unsigned maxval = bits == 8 ? 255u : 65535u;
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n" +
                    std::to_string(maxval) + "\n";
  out.reserve(out.size() + img.data.size() * (bits / 8));
  for (double v : img.data) {
    const double c = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    const auto q = static_cast<unsigned>(std::lround(c * maxval));
    if (bits == 16) out.push_back(static_cast<char>(q >> 8));
    out.push_back(static_cast<char>(q & 0xFFu));
  }
  return out;
}

std::string encode_pfm(const Image& img, bool big_endian) {
  check_image(img);
  std::string out = "Pf\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n" +
                    (big_endian ? "1.0" : "-1.0") + "\n";
  out.reserve(out.size() + img.data.size() * 4);
  for (int y = img.height - 1; y >= 0; --y)
    for (int x = 0; x < img.width; ++x) store_f32(out, static_cast<float>(img.at(x, y)), !big_endian);
  return out;
}

std::string encode_image(const Image& img, ImageFormat fmt) {
  switch (fmt) {
    case ImageFormat::Pgm8: return encode_pgm(img, 8);
    case ImageFormat::Pgm16: return encode_pgm(img, 16);
    case ImageFormat::Pfm: break;
  }
  return encode_pfm(img);
}

void write_image(const std::string& path, const Image& img, ImageFormat fmt) {
  write_file(path, encode_image(img, fmt));
}

ImageFormat format_for_path(const std::string& path, int pgm_bits) {
  std::string ext;
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos) ext = path.substr(dot);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (ext == ".pgm") return pgm_bits == 8 ? ImageFormat::Pgm8 : ImageFormat::Pgm16;
  return ImageFormat::Pfm;
}

CovarianceMap decode_covmap(std::string_view bytes) {
  if (bytes.size() < 16) throw IoError("covariance map is shorter than its 16-byte header");
  if (bytes.substr(0, 4) != "SVCM") throw IoError("covariance map has bad magic (expected 'SVCM')");
  if (static_cast<unsigned char>(bytes[4]) != 1)
    throw IoError("unsupported covariance map version " + std::to_string(static_cast<unsigned char>(bytes[4])));
  if (bytes[5] != 0 || bytes[6] != 0 || bytes[7] != 0) throw IoError("covariance map reserved bytes are not zero");
  const std::uint32_t w = load_u32le(bytes.data() + 8);
  const std::uint32_t height = load_u32le(bytes.data() + 12);
  if (w == 0 || height == 0) throw IoError("covariance map dimensions must be positive");
  if (static_cast<std::uint64_t>(w) * height > kMaxPixels) throw IoError("covariance map dimensions too large");
  const std::uint64_t expect = 16 + 12ull * w * height;
  if (bytes.size() != expect) {
    std::ostringstream os;
    os << "covariance map length " << bytes.size() << " does not match " << expect << " for " << w << "x"
       << height;
    throw IoError(os.str());
  }
  CovarianceMap m(static_cast<int>(w), static_cast<int>(height));
  const char* p = bytes.data() + 16;
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x, p += 12) {
      const double a = load_f32(p, true), b = load_f32(p + 4, true), c = load_f32(p + 8, true);
      if (!Covariance::is_valid(a, b, c)) {
        std::ostringstream os;
        os << "covariance map record at pixel (" << x << ", " << y << ") is not positive definite: (" << a << ", "
           << b << ", " << c << ")";
        throw IoError(os.str());
      }
      m.set(x, y, a, b, c);
    }
  return m;
}

CovarianceMap read_covmap(const std::string& path) {
  try {
    return decode_covmap(read_file(path));
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::string encode_covmap(const CovarianceMap& m) {
  if (m.width <= 0 || m.height <= 0) throw IoError("cannot encode an empty covariance map");
  std::string out = "SVCM";
  out.push_back(1);
  out.append(3, '\0');
  store_u32le(out, static_cast<std::uint32_t>(m.width));
  store_u32le(out, static_cast<std::uint32_t>(m.height));
  for (std::size_t i = 0; i < m.c11.size(); ++i) {
    store_f32(out, static_cast<float>(m.c11[i]), true);
    store_f32(out, static_cast<float>(m.c12[i]), true);
    store_f32(out, static_cast<float>(m.c22[i]), true);
  }
  return out;
}

void write_covmap(const std::string& path, const CovarianceMap& m) { write_file(path, encode_covmap(m)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path);
  return s;
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path);
}

}  // namespace boxspline
