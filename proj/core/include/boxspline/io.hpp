#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "boxspline/pipelines.hpp"
#include "boxspline/types.hpp"

namespace boxspline {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ImageFormat { Pgm8, Pgm16, Pfm };

struct LoadedImage {
  Image image;
  ImageFormat format = ImageFormat::Pfm;
};

/// PGM (P5, maxval 255 or 65535) samples are normalized to [0, 1]; PFM ("Pf")
/// samples are returned as stored. Row 0 is the top row for both formats.
LoadedImage decode_image(std::string_view bytes);
LoadedImage read_image(const std::string& path);

/// PGM output is clamped to [0, 1] and rounded to the bit depth.
std::string encode_pgm(const Image& img, int bits);
/// PFM output is written little-endian (negative scale) unless `big_endian`.
std::string encode_pfm(const Image& img, bool big_endian = false);
std::string encode_image(const Image& img, ImageFormat fmt);
void write_image(const std::string& path, const Image& img, ImageFormat fmt);

/// Format implied by the extension: ".pgm" -> 16-bit unless `pgm_bits` says 8, otherwise PFM.
ImageFormat format_for_path(const std::string& path, int pgm_bits = 16);

/// "SVCM" covariance maps. Every record must be positive definite.
CovarianceMap decode_covmap(std::string_view bytes);
CovarianceMap read_covmap(const std::string& path);
std::string encode_covmap(const CovarianceMap& m);
void write_covmap(const std::string& path, const CovarianceMap& m);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace boxspline
