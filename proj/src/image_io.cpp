// Copyright (c) the fsg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fsg/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cstdio>
#include <csetjmp>
#include <filesystem>
#include <memory>

#include "fsg/errors.hpp"

namespace fsg {

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

constexpr unsigned char kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a,
                                      '\n'};

void check_png_signature(FILE* f, const std::string& path) {
  unsigned char sig[8] = {};
  const size_t got = std::fread(sig, 1, 8, f);
  if (got != 8 || !std::equal(sig, sig + 8, kPngSig)) {
    throw io_error("imagecore", "unsupported format (expected PNG): " + path);
  }
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                 nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                  nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

// Reads any 8-bit PNG into packed rows; returns channel count (1 or 3).
int read_png_rows(const std::string& path, std::vector<unsigned char>& pixels,
                  int& width, int& height, bool want_gray) {
  if (!std::filesystem::exists(path)) {
    throw io_error("imagecore", "missing file: " + path);
  }
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw io_error("imagecore", "cannot open: " + path);
  check_png_signature(f.get(), path);

  PngReader r;
  if (!r.png || !r.info) throw io_error("imagecore", "libpng init failed");
  if (setjmp(png_jmpbuf(r.png))) {
    throw io_error("imagecore", "PNG decode failed: " + path);
  }
  png_init_io(r.png, f.get());
  png_set_sig_bytes(r.png, 8);
  png_read_info(r.png, r.info);

  width = static_cast<int>(png_get_image_width(r.png, r.info));
  height = static_cast<int>(png_get_image_height(r.png, r.info));
  int color_type = png_get_color_type(r.png, r.info);
  int bit_depth = png_get_bit_depth(r.png, r.info);

  if (bit_depth == 16) png_set_strip_16(r.png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(r.png);
  png_read_update_info(r.png, r.info);
  color_type = png_get_color_type(r.png, r.info);

  int channels;
  if (want_gray) {
    if (color_type != PNG_COLOR_TYPE_GRAY) {
      throw io_error("imagecore",
                     "mask must be a single-channel image: " + path);
    }
    channels = 1;
  } else {
    if (color_type != PNG_COLOR_TYPE_RGB) {
      throw io_error("imagecore", "non-RGB channel count in " + path);
    }
    channels = 3;
  }

  pixels.resize(static_cast<size_t>(width) * height * channels);
  std::vector<png_bytep> rows(static_cast<size_t>(height));
  for (int y = 0; y < height; ++y) {
    rows[static_cast<size_t>(y)] =
        pixels.data() + static_cast<size_t>(y) * width * channels;
  }
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return channels;
}

void write_png_rows(const std::string& path, const unsigned char* pixels,
                    int width, int height, int channels) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty() && !std::filesystem::exists(parent)) {
    throw io_error("imagecore", "parent directory missing: " + parent.string());
  }
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw io_error("imagecore", "unwritable path: " + path);

  PngWriter w;
  if (!w.png || !w.info) throw io_error("imagecore", "libpng init failed");
  if (setjmp(png_jmpbuf(w.png))) {
    throw io_error("imagecore", "PNG encode failed: " + path);
  }
  png_init_io(w.png, f.get());
  png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  for (int y = 0; y < height; ++y) {
    png_write_row(w.png, const_cast<png_bytep>(
                             pixels + static_cast<size_t>(y) * width * channels));
  }
  png_write_end(w.png, nullptr);
}

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  longjmp(mgr->jump, 1);
}

}  // namespace

ImageTensor load_image(const std::string& path) {
  std::vector<unsigned char> pixels;
  int w = 0, h = 0;
  read_png_rows(path, pixels, w, h, /*want_gray=*/false);
  Tensor t({3, h, w});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        t.at(c, y, x) =
            pixels[(static_cast<size_t>(y) * w + x) * 3 + c] / 255.0;
      }
  return ImageTensor(std::move(t),
                     std::filesystem::path(path).stem().string());
}

void save_image(const ImageTensor& img, const std::string& path) {
  const int h = img.height(), w = img.width();
  std::vector<unsigned char> pixels(static_cast<size_t>(h) * w * 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        pixels[(static_cast<size_t>(y) * w + x) * 3 + c] =
            static_cast<unsigned char>(quantize_byte(img.at(c, y, x)));
      }
  write_png_rows(path, pixels.data(), w, h, 3);
}

FaceMask load_mask(const std::string& path) {
  std::vector<unsigned char> pixels;
  int w = 0, h = 0;
  read_png_rows(path, pixels, w, h, /*want_gray=*/true);
  Tensor t({h, w});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      t.at(y, x) = pixels[static_cast<size_t>(y) * w + x] > 127 ? 1.0 : 0.0;
    }
  return FaceMask(std::move(t));
}

void save_mask(const FaceMask& mask, const std::string& path) {
  const int h = mask.height(), w = mask.width();
  std::vector<unsigned char> pixels(static_cast<size_t>(h) * w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      pixels[static_cast<size_t>(y) * w + x] = mask.at(y, x) > 0.5 ? 255 : 0;
    }
  write_png_rows(path, pixels.data(), w, h, 1);
}

std::vector<uint8_t> jpeg_encode(const ImageTensor& img, int quality) {
  if (quality < 10 || quality > 95) {
    throw config_error("evalharness",
                       "jpeg quality must be in [10,95], got " +
                           std::to_string(quality));
  }
  const int h = img.height(), w = img.width();
  std::vector<unsigned char> pixels(static_cast<size_t>(h) * w * 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        pixels[(static_cast<size_t>(y) * w + x) * 3 + c] =
            static_cast<unsigned char>(quantize_byte(img.at(c, y, x)));

  jpeg_compress_struct cinfo{};
  JpegErrorMgr err{};
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  unsigned char* buf = nullptr;
  unsigned long buf_size = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    if (buf) free(buf);
    throw io_error("evalharness", "JPEG encode failed");
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buf, &buf_size);
  cinfo.image_width = static_cast<JDIMENSION>(w);
  cinfo.image_height = static_cast<JDIMENSION>(h);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row =
        pixels.data() + static_cast<size_t>(cinfo.next_scanline) * w * 3;
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  std::vector<uint8_t> out(buf, buf + buf_size);
  jpeg_destroy_compress(&cinfo);
  free(buf);
  return out;
}

ImageTensor jpeg_decode(const std::vector<uint8_t>& bytes,
                        const std::string& tag) {
  jpeg_decompress_struct cinfo{};
  JpegErrorMgr err{};
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw io_error("evalharness", "JPEG decode failed");
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  const int w = static_cast<int>(cinfo.output_width);
  const int h = static_cast<int>(cinfo.output_height);
  std::vector<unsigned char> rowbuf(static_cast<size_t>(w) * 3);
  Tensor t({3, h, w});
  while (cinfo.output_scanline < cinfo.output_height) {
    const int y = static_cast<int>(cinfo.output_scanline);
    JSAMPROW row = rowbuf.data();
    jpeg_read_scanlines(&cinfo, &row, 1);
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        t.at(c, y, x) = rowbuf[static_cast<size_t>(x) * 3 + c] / 255.0;
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return ImageTensor(std::move(t), tag);
}

bool is_lossless_image_path(const std::string& path) {
  auto ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return ext == ".png";
}

}  // namespace fsg
