#include "chartensor/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace chartensor {

namespace {

ColorImage finish_read(png_image& img) {
  img.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
  png_color white{255, 255, 255};
  if (!png_image_finish_read(&img, &white, buf.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    fail(ErrorKind::kIo, "png decode failed: " + msg);
  }
  RgbImage rgb;
  rgb.width = static_cast<int>(img.width);
  rgb.height = static_cast<int>(img.height);
  rgb.pixels = std::move(buf);
  return from_rgb8(rgb);
}

std::vector<std::uint8_t> encode(const std::uint8_t* pixels, int width, int height,
                                 png_uint_32 format) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(width);
  img.height = static_cast<png_uint_32>(height);
  img.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, pixels, 0, nullptr)) {
    fail(ErrorKind::kIo, std::string("png encode failed: ") + img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, pixels, 0, nullptr)) {
    fail(ErrorKind::kIo, std::string("png encode failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::kIo, "cannot open '" + path + "' for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) fail(ErrorKind::kIo, "write to '" + path + "' failed");
}

}  // namespace

ColorImage read_png(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::kIo, "cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_png(bytes);
  } catch (const Error& e) {
    fail(ErrorKind::kIo, "'" + path + "': " + e.what());
  }
}

ColorImage decode_png(const std::vector<std::uint8_t>& bytes) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (bytes.empty() || !png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    std::string msg = bytes.empty() ? "empty file" : img.message;
    png_image_free(&img);
    fail(ErrorKind::kIo, "not a readable PNG: " + msg);
  }
  return finish_read(img);
}

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
  if (image.width <= 0 || image.height <= 0) fail(ErrorKind::kInvalidInput, "empty image");
  return encode(image.pixels.data(), image.width, image.height, PNG_FORMAT_RGB);
}

std::vector<std::uint8_t> encode_png(const GrayImage& image) {
  if (image.empty()) fail(ErrorKind::kInvalidInput, "empty image");
  std::vector<std::uint8_t> px(image.size());
  auto v = image.values();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double c = v[i] < 0.0 ? 0.0 : (v[i] > 1.0 ? 1.0 : v[i]);
    px[i] = static_cast<std::uint8_t>(std::lround(c * 255.0));
  }
  return encode(px.data(), image.width(), image.height(), PNG_FORMAT_GRAY);
}

void write_png(const std::string& path, const RgbImage& image) {
  write_bytes(path, encode_png(image));
}

void write_png(const std::string& path, const GrayImage& image) {
  write_bytes(path, encode_png(image));
}

}  // namespace chartensor
