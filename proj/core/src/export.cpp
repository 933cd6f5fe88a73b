#include "starrgb/export.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

#include "json.hpp"

namespace starrgb {

std::uint8_t quantize_round_half_up(double x) noexcept {
  const double q = std::floor(x + 0.5);
  if (!(q > 0.0)) return 0;
  if (q >= 255.0) return 255;
  return static_cast<std::uint8_t>(q);
}

namespace {

void quantize_plane(const Grid<double>& plane, std::optional<double> scale, std::size_t channel,
                    Image8& out) {
  for (std::size_t idx = 0; idx < plane.size(); ++idx) {
    std::uint8_t q = 0;
    if (!scale) {
      q = quantize_round_half_up(plane[idx]);
    } else if (*scale > 0.0) {
      q = quantize_round_half_up(plane[idx] / *scale * 255.0);
    }
    out.bytes[idx * out.channels + channel] = q;
  }
}

std::optional<double> scale_for(Normalization mode, double global, double channel) {
  switch (mode) {
    case Normalization::GlobalMax:
      return global;
    case Normalization::PerChannelMax:
      return channel;
    case Normalization::None:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Image8 normalize_for_export(const StarRgb& star, Normalization mode) {
  Image8 out{star.extent(), 3, std::vector<std::uint8_t>(star.extent().area() * 3, 0)};
  const double global = star.max_value();
  quantize_plane(star.r, scale_for(mode, global, star.r.max_value()), 0, out);
  quantize_plane(star.g, scale_for(mode, global, star.g.max_value()), 1, out);
  quantize_plane(star.b, scale_for(mode, global, star.b.max_value()), 2, out);
  return out;
}

Image8 quantize_signed(const SignedMatrix& m) {
  Image8 out{m.extent(), 1, std::vector<std::uint8_t>(m.size(), 128)};
  const double peak = m.max_abs();
  if (peak <= 0.0) return out;
  for (std::size_t idx = 0; idx < m.size(); ++idx) {
    const double q = std::floor(m[idx] / peak * 127.0 + 0.5) + 128.0;
    out.bytes[idx] = static_cast<std::uint8_t>(std::clamp(q, 0.0, 255.0));
  }
  return out;
}

GrayExport normalize_for_export(const StarGray& star, Normalization mode) {
  GrayExport out;
  out.m = Image8{star.m.extent(), 1, std::vector<std::uint8_t>(star.m.size(), 0)};
  const double peak = star.m.max_value();
  quantize_plane(star.m, scale_for(mode, peak, peak), 0, out.m);
  if (star.m_x) out.m_x = quantize_signed(*star.m_x);
  if (star.m_y) out.m_y = quantize_signed(*star.m_y);
  return out;
}

namespace {

std::vector<float> to_float_plane(const Grid<double>& m) {
  std::vector<float> out;
  out.reserve(m.size());
  for (double v : m) out.push_back(static_cast<float>(v));
  return out;
}

}  // namespace

Sidecar make_sidecar(const StarRgb& star, std::string clip_id, const EncodeConfig& config) {
  Sidecar out;
  out.header = SidecarHeader{star.extent(),
                             3,
                             std::move(clip_id),
                             std::string(to_string(config.metric())),
                             "star-rgb",
                             std::string(to_string(config.normalization())),
                             {star.segment_bounds.begin(), star.segment_bounds.end()},
                             false};
  out.planes = {to_float_plane(star.r), to_float_plane(star.g), to_float_plane(star.b)};
  return out;
}

Sidecar make_sidecar(const StarGray& star, std::string clip_id, const EncodeConfig& config,
                     std::size_t frame_count) {
  Sidecar out;
  out.planes.push_back(to_float_plane(star.m));
  if (star.m_x) out.planes.push_back(to_float_plane(*star.m_x));
  if (star.m_y) out.planes.push_back(to_float_plane(*star.m_y));
  out.header = SidecarHeader{star.m.extent(),
                             out.planes.size(),
                             std::move(clip_id),
                             std::string(to_string(config.metric())),
                             "legacy",
                             std::string(to_string(config.normalization())),
                             {FrameRange{1, frame_count}},
                             config.weighted_shadow()};
  return out;
}

namespace {

constexpr std::string_view kSidecarFormat = "starrgb-f32";
constexpr int kSidecarVersion = 1;

void append_le32(std::string& out, float value) {
  const auto bits = std::bit_cast<std::uint32_t>(value);
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<char>((bits >> shift) & 0xFFu));
  }
}

float read_le32(const unsigned char* p) {
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                             (static_cast<std::uint32_t>(p[1]) << 8) |
                             (static_cast<std::uint32_t>(p[2]) << 16) |
                             (static_cast<std::uint32_t>(p[3]) << 24);
  return std::bit_cast<float>(bits);
}

}  // namespace

std::string encode_sidecar(const Sidecar& sidecar) {
  const SidecarHeader& h = sidecar.header;
  if (sidecar.planes.size() != h.channels) {
    throw Error(ErrorKind::InvalidInput, "sidecar plane count does not match channel count");
  }
  nlohmann::json bounds = nlohmann::json::array();
  for (const FrameRange& r : h.segment_bounds) bounds.push_back({r.first, r.last});
  const nlohmann::json header = {
      {"channels", h.channels},
      {"clip_id", h.clip_id},
      {"format", kSidecarFormat},
      {"height", h.extent.height},
      {"metric", h.metric},
      {"mode", h.mode},
      {"normalization", h.normalization},
      {"segment_bounds", bounds},
      {"version", kSidecarVersion},
      {"weighted_shadow", h.weighted_shadow},
      {"width", h.extent.width},
  };

  std::string out = header.dump();
  out.push_back('\n');
  out.reserve(out.size() + h.channels * h.extent.area() * 4);
  for (const auto& plane : sidecar.planes) {
    if (plane.size() != h.extent.area()) {
      throw Error(ErrorKind::InvalidInput, "sidecar plane size does not match extent");
    }
    for (float v : plane) append_le32(out, v);
  }
  return out;
}

Sidecar decode_sidecar(std::string_view bytes) {
  const auto newline = bytes.find('\n');
  if (newline == std::string_view::npos) {
    throw Error(ErrorKind::Parse, "sidecar has no header line");
  }
  Sidecar out;
  try {
    const auto header = nlohmann::json::parse(bytes.substr(0, newline));
    if (header.at("format").get<std::string>() != kSidecarFormat) {
      throw Error(ErrorKind::Parse, "not a starrgb float sidecar");
    }
    SidecarHeader& h = out.header;
    h.extent = Extent{header.at("width").get<std::size_t>(), header.at("height").get<std::size_t>()};
    h.channels = header.at("channels").get<std::size_t>();
    h.clip_id = header.value("clip_id", "");
    h.metric = header.value("metric", "");
    h.mode = header.value("mode", "");
    h.normalization = header.value("normalization", "");
    h.weighted_shadow = header.value("weighted_shadow", false);
    for (const auto& r : header.value("segment_bounds", nlohmann::json::array())) {
      h.segment_bounds.push_back(FrameRange{r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed sidecar header: ") + e.what());
  }

  const SidecarHeader& h = out.header;
  const std::size_t area = h.extent.area();
  const std::string_view payload = bytes.substr(newline + 1);
  if (payload.size() != h.channels * area * 4) {
    throw Error(ErrorKind::Parse, "sidecar payload is " + std::to_string(payload.size()) +
                                      " bytes, expected " + std::to_string(h.channels * area * 4));
  }
  const auto* p = reinterpret_cast<const unsigned char*>(payload.data());
  out.planes.assign(h.channels, std::vector<float>(area));
  for (auto& plane : out.planes) {
    for (float& v : plane) {
      v = read_le32(p);
      p += 4;
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::Io, "failed reading " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

void write_sidecar(const std::filesystem::path& path, const Sidecar& sidecar) {
  write_file(path, encode_sidecar(sidecar));
}

Sidecar read_sidecar(const std::filesystem::path& path) { return decode_sidecar(read_file(path)); }

}  // namespace starrgb
