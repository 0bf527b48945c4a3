#pragma once

// Netpbm readers/writers. P1/P4 bitmaps, P2/P5 graymaps and P3/P6 pixmaps
// are read; bitmaps and graymaps are written. Pixmaps are reduced to
// luminance on load.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tablescout/error.hpp"
#include "tablescout/raster.hpp"

namespace tablescout {

/// Rounded integer luminance (299 R + 587 G + 114 B) / 1000.
constexpr std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const unsigned sum = 299u * r + 587u * g + 114u * b;
  return static_cast<std::uint8_t>((sum + 500u) / 1000u);
}

namespace pnm_detail {

inline void skip_space_and_comments(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == EOF) return;
    if (c == '#') {
      std::string dummy;
      std::getline(in, dummy);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

inline int read_header_int(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  long long v = -1;
  if (!(in >> v) || v < 0 || v > (1 << 24)) {
    throw Error(Errc::CorruptImage, std::string("bad or missing ") + what + " in header");
  }
  return static_cast<int>(v);
}

inline int read_plain_int(std::istream& in) {
  skip_space_and_comments(in);
  long long v = -1;
  if (!(in >> v) || v < 0) throw Error(Errc::CorruptImage, "truncated plain pixel data");
  return static_cast<int>(v);
}

inline int read_plain_bit(std::istream& in) {
  skip_space_and_comments(in);
  int c = in.get();
  if (c == '0') return 0;
  if (c == '1') return 1;
  throw Error(Errc::CorruptImage, "truncated plain bitmap data");
}

inline std::uint8_t scale_sample(int v, int maxval) {
  if (v > maxval) throw Error(Errc::CorruptImage, "sample exceeds maxval");
  if (maxval == 255) return static_cast<std::uint8_t>(v);
  return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
}

struct Decoded {
  char magic = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> samples;  // gray intensities, or ink flags for bitmaps
};

inline Decoded decode(std::istream& in) {
  char p = 0, m = 0;
  if (!in.get(p) || !in.get(m) || p != 'P' || m < '1' || m > '6') {
    throw Error(Errc::UnsupportedFormat, "not a netpbm P1-P6 stream");
  }
  Decoded d;
  d.magic = m;
  d.width = read_header_int(in, "width");
  d.height = read_header_int(in, "height");
  if (d.width == 0 || d.height == 0) throw Error(Errc::CorruptImage, "zero image dimension");
  const bool bitmap = m == '1' || m == '4';
  int maxval = 1;
  if (!bitmap) {
    maxval = read_header_int(in, "maxval");
    if (maxval == 0) throw Error(Errc::CorruptImage, "maxval must be positive");
    if (maxval > 255) throw Error(Errc::UnsupportedFormat, "16-bit samples are not supported");
  }
  const std::size_t npix = static_cast<std::size_t>(d.width) * static_cast<std::size_t>(d.height);
  d.samples.resize(npix);
  const bool raw = m >= '4';
  if (raw) {
    // exactly one whitespace byte separates the header from raster data
    if (!std::isspace(in.get())) throw Error(Errc::CorruptImage, "missing header terminator");
  }

  switch (m) {
    case '1':
      for (auto& s : d.samples) s = static_cast<std::uint8_t>(read_plain_bit(in));
      break;
    case '2':
      for (auto& s : d.samples) s = scale_sample(read_plain_int(in), maxval);
      break;
    case '3':
      for (auto& s : d.samples) {
        int r = read_plain_int(in), g = read_plain_int(in), b = read_plain_int(in);
        s = luminance(scale_sample(r, maxval), scale_sample(g, maxval), scale_sample(b, maxval));
      }
      break;
    case '4': {
      const std::size_t stride = (static_cast<std::size_t>(d.width) + 7) / 8;
      std::vector<char> rowbuf(stride);
      for (int y = 0; y < d.height; ++y) {
        if (!in.read(rowbuf.data(), static_cast<std::streamsize>(stride))) {
          throw Error(Errc::CorruptImage, "truncated raw bitmap data");
        }
        for (int x = 0; x < d.width; ++x) {
          const auto byte = static_cast<unsigned char>(rowbuf[static_cast<std::size_t>(x) / 8]);
          d.samples[static_cast<std::size_t>(y) * d.width + x] = (byte >> (7 - x % 8)) & 1u;
        }
      }
      break;
    }
    case '5': {
      if (!in.read(reinterpret_cast<char*>(d.samples.data()), static_cast<std::streamsize>(npix))) {
        throw Error(Errc::CorruptImage, "truncated raw graymap data");
      }
      for (auto& s : d.samples) s = scale_sample(s, maxval);
      break;
    }
    case '6': {
      std::vector<std::uint8_t> rgb(npix * 3);
      if (!in.read(reinterpret_cast<char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()))) {
        throw Error(Errc::CorruptImage, "truncated raw pixmap data");
      }
      for (std::size_t i = 0; i < npix; ++i) {
        d.samples[i] = luminance(scale_sample(rgb[3 * i], maxval), scale_sample(rgb[3 * i + 1], maxval),
                                 scale_sample(rgb[3 * i + 2], maxval));
      }
      break;
    }
  }
  return d;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(Errc::FileNotFound, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, path.string());
  return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  return out;
}

}  // namespace pnm_detail

/// Reads any P1-P6 stream as a graymap. Bitmap ink (1) becomes 0, paper 255.
inline GrayImage read_gray(std::istream& in) {
  auto d = pnm_detail::decode(in);
  if (d.magic == '1' || d.magic == '4') {
    for (auto& s : d.samples) s = s ? 0 : 255;
  }
  return GrayImage(d.width, d.height, std::move(d.samples));
}

/// Reads a P1/P4 bitmap.
inline BinaryImage read_binary(std::istream& in) {
  auto d = pnm_detail::decode(in);
  if (d.magic != '1' && d.magic != '4') {
    throw Error(Errc::UnsupportedFormat, "expected a portable bitmap (P1/P4)");
  }
  return BinaryImage(d.width, d.height, std::move(d.samples));
}

inline GrayImage load_gray(const std::filesystem::path& path) {
  auto in = pnm_detail::open_input(path);
  try {
    return read_gray(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

inline BinaryImage load_binary(const std::filesystem::path& path) {
  auto in = pnm_detail::open_input(path);
  try {
    return read_binary(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

enum class PnmEncoding { Plain, Raw };

inline void write_gray(std::ostream& out, const GrayImage& img, PnmEncoding enc = PnmEncoding::Raw) {
  out << (enc == PnmEncoding::Raw ? "P5" : "P2") << '\n'
      << img.width() << ' ' << img.height() << "\n255\n";
  if (enc == PnmEncoding::Raw) {
    auto px = img.pixels();
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  } else {
    for (int y = 0; y < img.height(); ++y) {
      auto row = img.row(y);
      for (int x = 0; x < img.width(); ++x) {
        out << static_cast<int>(row[static_cast<std::size_t>(x)]) << (x + 1 == img.width() ? '\n' : ' ');
      }
    }
  }
}

inline void write_binary(std::ostream& out, const BinaryImage& img, PnmEncoding enc = PnmEncoding::Raw) {
  out << (enc == PnmEncoding::Raw ? "P4" : "P1") << '\n' << img.width() << ' ' << img.height() << '\n';
  if (enc == PnmEncoding::Raw) {
    const std::size_t stride = (static_cast<std::size_t>(img.width()) + 7) / 8;
    std::vector<char> rowbuf(stride);
    for (int y = 0; y < img.height(); ++y) {
      std::fill(rowbuf.begin(), rowbuf.end(), 0);
      auto row = img.row(y);
      for (int x = 0; x < img.width(); ++x) {
        if (row[static_cast<std::size_t>(x)]) {
          rowbuf[static_cast<std::size_t>(x) / 8] |= static_cast<char>(0x80u >> (x % 8));
        }
      }
      out.write(rowbuf.data(), static_cast<std::streamsize>(stride));
    }
  } else {
    for (int y = 0; y < img.height(); ++y) {
      auto row = img.row(y);
      for (int x = 0; x < img.width(); ++x) {
        out << static_cast<int>(row[static_cast<std::size_t>(x)]) << (x + 1 == img.width() ? '\n' : ' ');
      }
    }
  }
}

inline void save_gray(const std::filesystem::path& path, const GrayImage& img,
                      PnmEncoding enc = PnmEncoding::Raw) {
  auto out = pnm_detail::open_output(path);
  write_gray(out, img, enc);
  if (!out) throw Error(Errc::Io, "write failed: " + path.string());
}

inline void save_binary(const std::filesystem::path& path, const BinaryImage& img,
                        PnmEncoding enc = PnmEncoding::Raw) {
  auto out = pnm_detail::open_output(path);
  write_binary(out, img, enc);
  if (!out) throw Error(Errc::Io, "write failed: " + path.string());
}

/// Extensions the batch runner treats as page images.
inline bool is_supported_image(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  return ext == ".pgm" || ext == ".pbm" || ext == ".ppm" || ext == ".pnm";
}

}  // namespace tablescout
