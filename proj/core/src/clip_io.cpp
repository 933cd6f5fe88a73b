#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>

#include "json.hpp"
#include "starrgb/corpus.hpp"

namespace starrgb {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kContainerMagic = "STRV1\n";

struct ContainerHeader {
  ContainerInfo info;
  std::streamoff payload_offset = 0;
};

ContainerHeader read_container_header(std::ifstream& in, const fs::path& path) {
  std::string magic(kContainerMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (!in || magic != kContainerMagic) {
    throw Error(ErrorKind::Parse, path.string() + " is not an STRV1 container");
  }
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw Error(ErrorKind::Parse, path.string() + ": missing container header");
  }
  ContainerHeader out;
  try {
    const auto header = nlohmann::json::parse(header_line);
    out.info.extent = Extent{header.at("width").get<std::size_t>(),
                             header.at("height").get<std::size_t>()};
    out.info.frame_count = header.at("frame_count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, path.string() + ": malformed container header: " + e.what());
  }
  if (out.info.extent.area() == 0) {
    throw Error(ErrorKind::Parse, path.string() + ": container frames must be at least 1x1");
  }
  out.payload_offset = in.tellg();
  return out;
}

std::vector<Frame> read_container_frames(const fs::path& path, std::size_t first,
                                         std::size_t last) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  const ContainerHeader header = read_container_header(in, path);
  const ContainerInfo& info = header.info;
  if (last > info.frame_count) {
    throw Error(ErrorKind::MissingFrame, "missing frame " + std::to_string(info.frame_count + 1) +
                                             " in " + path.string() + " (container holds " +
                                             std::to_string(info.frame_count) + " frames)");
  }
  const std::size_t area = info.extent.area();
  const std::size_t frame_bytes = area * 3;
  in.seekg(header.payload_offset + static_cast<std::streamoff>((first - 1) * frame_bytes));

  std::vector<Frame> frames;
  frames.reserve(last - first + 1);
  std::vector<unsigned char> buffer(frame_bytes);
  for (std::size_t k = first; k <= last; ++k) {
    in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(frame_bytes));
    if (!in) {
      throw Error(ErrorKind::MissingFrame,
                  "missing frame " + std::to_string(k) + " in " + path.string() + " (truncated)");
    }
    std::vector<Pixel> pixels(area);
    for (std::size_t idx = 0; idx < area; ++idx) {
      pixels[idx] = Pixel{static_cast<double>(buffer[idx]), static_cast<double>(buffer[area + idx]),
                          static_cast<double>(buffer[2 * area + idx])};
    }
    frames.emplace_back(info.extent, std::move(pixels));
  }
  return frames;
}

bool is_frame_extension(const fs::path& ext) {
  std::string e = ext.string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ".png" || e == ".ppm";
}

// Numbered frame files keyed by index; any zero padding is accepted.
std::map<std::size_t, fs::path> index_frame_directory(const fs::path& dir) {
  std::map<std::size_t, fs::path> frames;
  std::error_code ec;
  for (const auto& item : fs::directory_iterator(dir, ec)) {
    if (!item.is_regular_file() || !is_frame_extension(item.path().extension())) continue;
    const std::string stem = item.path().stem().string();
    std::size_t index = 0;
    const auto [end, err] = std::from_chars(stem.data(), stem.data() + stem.size(), index);
    if (err != std::errc{} || end != stem.data() + stem.size()) continue;
    if (!frames.emplace(index, item.path()).second) {
      throw Error(ErrorKind::Parse, "frame index " + std::to_string(index) +
                                        " appears twice in " + dir.string());
    }
  }
  if (ec) throw Error(ErrorKind::Io, "cannot list " + dir.string() + ": " + ec.message());
  return frames;
}

Frame read_frame_file(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return frame_from_image(ext == ".ppm" ? read_ppm(path) : read_png(path));
}

std::vector<Frame> read_directory_frames(const fs::path& dir, std::size_t first,
                                         std::size_t last) {
  const auto index = index_frame_directory(dir);
  std::vector<Frame> frames;
  frames.reserve(last - first + 1);
  for (std::size_t k = first; k <= last; ++k) {
    const auto it = index.find(k);
    if (it == index.end()) {
      throw Error(ErrorKind::MissingFrame,
                  "missing frame " + std::to_string(k) + " in " + dir.string());
    }
    frames.push_back(read_frame_file(it->second));
  }
  return frames;
}

std::vector<Frame> read_frames(const fs::path& source, std::size_t first, std::size_t last) {
  std::error_code ec;
  if (fs::is_directory(source, ec)) return read_directory_frames(source, first, last);
  if (fs::is_regular_file(source, ec)) return read_container_frames(source, first, last);
  throw Error(ErrorKind::InvalidInput, "source " + source.string() + " does not exist");
}

}  // namespace

ClipSource load_clip(const ManifestEntry& entry) {
  auto frames = read_frames(entry.source, entry.start_frame, entry.end_frame);
  std::optional<std::string> label;
  if (!entry.label.empty()) label = entry.label;
  return ClipSource(std::move(frames), entry.clip_id, std::move(label));
}

ClipSource load_clip(const fs::path& source) {
  std::error_code ec;
  std::size_t count = 0;
  if (fs::is_directory(source, ec)) {
    const auto index = index_frame_directory(source);
    if (!index.empty()) {
      if (index.begin()->first != 1) {
        throw Error(ErrorKind::MissingFrame, "missing frame 1 in " + source.string());
      }
      count = index.rbegin()->first;
    }
  } else if (fs::is_regular_file(source, ec)) {
    count = read_container_info(source).frame_count;
  } else {
    throw Error(ErrorKind::InvalidInput, "source " + source.string() + " does not exist");
  }
  if (count < 2) {
    throw Error(ErrorKind::InvalidInput,
                source.string() + " holds " + std::to_string(count) + " frames, need at least 2");
  }
  return ClipSource(read_frames(source, 1, count), source.stem().string());
}

ContainerInfo read_container_info(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_container_header(in, path).info;
}

void write_container(const fs::path& path, std::span<const Frame> frames) {
  if (frames.empty()) throw Error(ErrorKind::InvalidInput, "container needs at least one frame");
  const Extent extent = frames.front().extent();
  const nlohmann::json header = {{"frame_count", frames.size()},
                                 {"height", extent.height},
                                 {"width", extent.width}};
  std::string bytes(kContainerMagic);
  bytes += header.dump();
  bytes.push_back('\n');
  const std::size_t area = extent.area();
  for (const Frame& f : frames) {
    if (f.extent() != extent) {
      throw Error(ErrorKind::DimensionMismatch, "container frames must share one extent");
    }
    const std::size_t base = bytes.size();
    bytes.resize(base + area * 3);
    for (std::size_t idx = 0; idx < area; ++idx) {
      bytes[base + idx] = static_cast<char>(quantize_round_half_up(f[idx].r));
      bytes[base + area + idx] = static_cast<char>(quantize_round_half_up(f[idx].g));
      bytes[base + 2 * area + idx] = static_cast<char>(quantize_round_half_up(f[idx].b));
    }
  }
  write_file(path, bytes);
}

void write_frame_directory(const fs::path& dir, std::span<const Frame> frames) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t k = 0; k < frames.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "%06zu.png", k + 1);
    write_png(dir / name, image_from_frame(frames[k]));
  }
}

Frame frame_from_image(const Image8& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw Error(ErrorKind::InvalidInput, "frames need 1 or 3 channels");
  }
  std::vector<Pixel> pixels(image.extent.area());
  for (std::size_t idx = 0; idx < pixels.size(); ++idx) {
    if (image.channels == 1) {
      const double v = image.bytes[idx];
      pixels[idx] = Pixel{v, v, v};
    } else {
      pixels[idx] = Pixel{static_cast<double>(image.bytes[idx * 3]),
                          static_cast<double>(image.bytes[idx * 3 + 1]),
                          static_cast<double>(image.bytes[idx * 3 + 2])};
    }
  }
  return Frame(image.extent, std::move(pixels));
}

Image8 image_from_frame(const Frame& frame) {
  Image8 out{frame.extent(), 3, std::vector<std::uint8_t>(frame.size() * 3)};
  for (std::size_t idx = 0; idx < frame.size(); ++idx) {
    out.bytes[idx * 3] = quantize_round_half_up(frame[idx].r);
    out.bytes[idx * 3 + 1] = quantize_round_half_up(frame[idx].g);
    out.bytes[idx * 3 + 2] = quantize_round_half_up(frame[idx].b);
  }
  return out;
}

Image8 read_ppm(const fs::path& path) {
  const std::string bytes = read_file(path);
  std::size_t pos = 0;
  const auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
  };
  const std::string magic = next_token();
  if (magic != "P6" && magic != "P5") throw Error(ErrorKind::Parse, path.string() + ": not a binary PPM/PGM");
  std::size_t width = 0, height = 0, maxval = 0;
  try {
    width = std::stoul(next_token());
    height = std::stoul(next_token());
    maxval = std::stoul(next_token());
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, path.string() + ": malformed PPM header");
  }
  if (maxval != 255) throw Error(ErrorKind::Parse, path.string() + ": only 8-bit PPM is supported");
  ++pos;  // single whitespace before the raster
  Image8 out{Extent{width, height}, magic == "P6" ? 3u : 1u, {}};
  const std::size_t count = out.extent.area() * out.channels;
  if (out.extent.area() == 0 || bytes.size() < pos + count) {
    throw Error(ErrorKind::Parse, path.string() + ": truncated PPM raster");
  }
  out.bytes.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                   bytes.begin() + static_cast<std::ptrdiff_t>(pos + count));
  return out;
}

}  // namespace starrgb
