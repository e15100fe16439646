#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "psog/errors.hpp"
#include "psog/kvconfig.hpp"

namespace psog {

/// Rectangular grid of reflectance intensities in [0,1] plus the projection
/// metadata the sensing stage needs. Continuous pixel coordinates put pixel
/// (r, c) at [r, r+1) x [c, c+1); optical_center is the sensor-frame anchor
/// (the unshifted optical axis), which detection areas are placed against.
struct EyeImage {
  int rows = 0;
  int cols = 0;
  std::vector<double> intensities; // row-major
  double mm_per_pixel_x = 1.0;
  double mm_per_pixel_y = 1.0;
  double optical_center_row = 0.0;
  double optical_center_col = 0.0;
  double outside_fill = 0.0; // intensity assumed beyond the frame (periocular skin)

  double at(int r, int c) const { return intensities[static_cast<std::size_t>(r) * cols + c]; }
  double& at(int r, int c) { return intensities[static_cast<std::size_t>(r) * cols + c]; }

  bool in_bounds(int r, int c) const { return r >= 0 && r < rows && c >= 0 && c < cols; }

  double at_or_fill(int r, int c) const { return in_bounds(r, c) ? at(r, c) : outside_fill; }
};

namespace detail {

inline int pgm_next_token(std::string_view bytes, std::size_t& pos, std::string& token) {
  // Skips whitespace and '#' comments per the graymap grammar.
  while (pos < bytes.size()) {
    const char ch = bytes[pos];
    if (ch == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  token.clear();
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) &&
         bytes[pos] != '#')
    token.push_back(bytes[pos++]);
  if (token.empty())
    throw ParseError("graymap: unexpected end of header at byte offset " + std::to_string(start));
  return static_cast<int>(start);
}

inline long pgm_int_token(std::string_view bytes, std::size_t& pos, const char* what) {
  std::string token;
  const int at = pgm_next_token(bytes, pos, token);
  long v = 0;
  std::size_t used = 0;
  try {
    v = std::stol(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || v < 0)
    throw ParseError(std::string("graymap: bad ") + what + " '" + token + "' at byte offset " +
                     std::to_string(at));
  return v;
}

} // namespace detail

/// Sidecar metadata for imported/exported graymaps, in the run-config format.
struct ImageMeta {
  double mm_per_pixel_x = 0.0;
  double mm_per_pixel_y = 0.0;
  double optical_center_row = 0.0;
  double optical_center_col = 0.0;
  double outside_fill = 0.65;
};

inline std::string serialize_image_meta(const ImageMeta& m) {
  KvDocument doc;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  doc.set("image", "mm_per_pixel_x", num(m.mm_per_pixel_x));
  doc.set("image", "mm_per_pixel_y", num(m.mm_per_pixel_y));
  doc.set("image", "optical_center_row", num(m.optical_center_row));
  doc.set("image", "optical_center_col", num(m.optical_center_col));
  doc.set("image", "outside_fill", num(m.outside_fill));
  return doc.serialize();
}

inline ImageMeta parse_image_meta(std::string_view text) {
  const KvDocument doc = KvDocument::parse(text);
  SectionReader image(doc, "image");
  if (!image.present())
    throw ConfigError("image sidecar: missing [image] section");
  ImageMeta m;
  if (!image.has("mm_per_pixel_x") || !image.has("mm_per_pixel_y"))
    throw ConfigError("image sidecar: mm_per_pixel_x and mm_per_pixel_y are required");
  if (!image.has("optical_center_row") || !image.has("optical_center_col"))
    throw ConfigError("image sidecar: optical_center_row and optical_center_col are required");
  m.mm_per_pixel_x = image.get_double("mm_per_pixel_x", 0.0);
  m.mm_per_pixel_y = image.get_double("mm_per_pixel_y", 0.0);
  m.optical_center_row = image.get_double("optical_center_row", 0.0);
  m.optical_center_col = image.get_double("optical_center_col", 0.0);
  m.outside_fill = image.get_double("outside_fill", 0.65);
  image.finish();
  if (!(m.mm_per_pixel_x > 0.0) || !(m.mm_per_pixel_y > 0.0))
    throw ConfigError("image sidecar: mm_per_pixel values must be > 0");
  return m;
}

/// Parses a binary portable graymap (magic "P5", maxval <= 65535) and
/// normalizes samples to [0,1] by maxval. 16-bit samples are big-endian.
inline EyeImage import_eye_image(std::string_view bytes, const ImageMeta& meta) {
  std::size_t pos = 0;
  std::string magic;
  detail::pgm_next_token(bytes, pos, magic);
  if (magic != "P5")
    throw ParseError("graymap: magic '" + magic +
                     "' unsupported at byte offset 0 (binary \"P5\" required; ASCII "
                     "variants are not accepted)");
  const long width = detail::pgm_int_token(bytes, pos, "width");
  const long height = detail::pgm_int_token(bytes, pos, "height");
  const long maxval = detail::pgm_int_token(bytes, pos, "maxval");
  if (width <= 0 || height <= 0)
    throw ParseError("graymap: non-positive dimensions at byte offset " + std::to_string(pos));
  if (maxval <= 0 || maxval > 65535)
    throw ParseError("graymap: maxval " + std::to_string(maxval) +
                     " out of range (0, 65535] at byte offset " + std::to_string(pos));
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
    throw ParseError("graymap: missing whitespace after maxval at byte offset " +
                     std::to_string(pos));
  ++pos; // single whitespace separates header from raster

  const int bytes_per_sample = maxval > 255 ? 2 : 1;
  const std::size_t need = static_cast<std::size_t>(width) * height * bytes_per_sample;
  if (bytes.size() - pos < need)
    throw ParseError("graymap: raster truncated at byte offset " + std::to_string(bytes.size()) +
                     " (need " + std::to_string(need) + " bytes from offset " +
                     std::to_string(pos) + ")");

  EyeImage img;
  img.rows = static_cast<int>(height);
  img.cols = static_cast<int>(width);
  img.intensities.resize(static_cast<std::size_t>(width) * height);
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data()) + pos;
  const double scale = 1.0 / static_cast<double>(maxval);
  for (std::size_t i = 0; i < img.intensities.size(); ++i) {
    unsigned v = bytes_per_sample == 1
                     ? data[i]
                     : (static_cast<unsigned>(data[2 * i]) << 8) | data[2 * i + 1];
    if (v > static_cast<unsigned>(maxval))
      throw ParseError("graymap: sample " + std::to_string(v) + " exceeds maxval at byte offset " +
                       std::to_string(pos + i * bytes_per_sample));
    img.intensities[i] = static_cast<double>(v) * scale;
  }
  img.mm_per_pixel_x = meta.mm_per_pixel_x;
  img.mm_per_pixel_y = meta.mm_per_pixel_y;
  img.optical_center_row = meta.optical_center_row;
  img.optical_center_col = meta.optical_center_col;
  img.outside_fill = meta.outside_fill;
  return img;
}

/// Serializes to binary P5 with the given maxval (default 16-bit).
/// Intensities are quantized to round(v * maxval); an image that has already
/// been through one export->import cycle round-trips bit-identically.
inline std::string export_eye_image(const EyeImage& img, int maxval = 65535) {
  if (maxval <= 0 || maxval > 65535)
    throw ConfigError("graymap export: maxval must lie in (0, 65535]");
  std::string out = "P5\n" + std::to_string(img.cols) + " " + std::to_string(img.rows) + "\n" +
                    std::to_string(maxval) + "\n";
  out.reserve(out.size() + img.intensities.size() * (maxval > 255 ? 2 : 1));
  for (double v : img.intensities) {
    const long q = std::lround(v * maxval);
    const unsigned u = static_cast<unsigned>(std::min<long>(std::max<long>(q, 0), maxval));
    if (maxval > 255) out.push_back(static_cast<char>((u >> 8) & 0xff));
    out.push_back(static_cast<char>(u & 0xff));
  }
  return out;
}

inline ImageMeta meta_of(const EyeImage& img) {
  return ImageMeta{img.mm_per_pixel_x, img.mm_per_pixel_y, img.optical_center_row,
                   img.optical_center_col, img.outside_fill};
}

} // namespace psog
