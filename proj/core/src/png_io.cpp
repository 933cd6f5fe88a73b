#include <png.h>

#include <cstring>

#include "starrgb/export.hpp"

namespace starrgb {

void write_png(const std::filesystem::path& path, const Image8& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw Error(ErrorKind::InvalidInput, "PNG export supports 1 or 3 channels");
  }
  if (image.bytes.size() != image.extent.area() * image.channels) {
    throw Error(ErrorKind::InvalidInput, "image byte count does not match its extent");
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.extent.width);
  png.height = static_cast<png_uint_32>(image.extent.height);
  png.format = image.channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, image.bytes.data(), 0, nullptr)) {
    const std::string message = png.message;
    png_image_free(&png);
    throw Error(ErrorKind::Io, "cannot write " + path.string() + ": " + message);
  }
}

Image8 read_png(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    const std::string message = png.message;
    png_image_free(&png);
    throw Error(ErrorKind::Io, "cannot read " + path.string() + ": " + message);
  }
  const bool gray = (png.format & PNG_FORMAT_FLAG_COLOR) == 0;
  png.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;

  Image8 out;
  out.extent = Extent{png.width, png.height};
  out.channels = gray ? 1 : 3;
  out.bytes.resize(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, out.bytes.data(), 0, nullptr)) {
    const std::string message = png.message;
    png_image_free(&png);
    throw Error(ErrorKind::Io, "cannot decode " + path.string() + ": " + message);
  }
  return out;
}

}  // namespace starrgb
