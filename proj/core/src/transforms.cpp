#include <algorithm>
#include <cmath>
#include <numbers>

#include "starrgb/corpus.hpp"

namespace starrgb {

void TransformSpec::validate() const {
  if (resize_to && resize_to->area() == 0) {
    throw Error(ErrorKind::InvalidInput, "resize target must be at least 1x1");
  }
  if (crop) {
    if (crop->size.area() == 0) throw Error(ErrorKind::InvalidInput, "crop must be at least 1x1");
    if (resize_to && (crop->size.width > resize_to->width || crop->size.height > resize_to->height)) {
      throw Error(ErrorKind::InvalidInput, "crop " + to_string(crop->size) +
                                               " exceeds resize target " + to_string(*resize_to));
    }
  }
  if (!(hflip_prob >= 0.0 && hflip_prob <= 1.0)) {
    throw Error(ErrorKind::InvalidInput, "hflip probability must lie in [0, 1]");
  }
  if (!(rotation_degrees >= 0.0 && std::isfinite(rotation_degrees))) {
    throw Error(ErrorKind::InvalidInput, "rotation bound must be a finite nonnegative angle");
  }
  if (noise && !(noise->stddev >= 0.0 && std::isfinite(noise->mean))) {
    throw Error(ErrorKind::InvalidInput, "noise needs a finite mean and nonnegative sigma");
  }
}

TransformSpec TransformSpec::training() {
  return TransformSpec{Extent{160, 120}, CropSpec{CropMode::Random, Extent{140, 110}, 0}, 0.5,
                       5.0, NoiseSpec{0.0, 1.0}};
}

TransformSpec TransformSpec::evaluation() {
  return TransformSpec{Extent{160, 120}, CropSpec{CropMode::Center, Extent{140, 110}, 0}, 0.0, 0.0,
                       std::nullopt};
}

Frame resize(const Frame& frame, Extent size) {
  if (size.area() == 0) throw Error(ErrorKind::InvalidInput, "resize target must be at least 1x1");
  const std::size_t src_w = frame.width();
  const std::size_t src_h = frame.height();
  const auto source_coord = [](std::size_t dst, std::size_t src_n, std::size_t dst_n) {
    const double s = (static_cast<double>(dst) + 0.5) * static_cast<double>(src_n) /
                         static_cast<double>(dst_n) -
                     0.5;
    return std::clamp(s, 0.0, static_cast<double>(src_n - 1));
  };

  std::vector<Pixel> out;
  out.reserve(size.area());
  for (std::size_t y = 0; y < size.height; ++y) {
    const double sy = source_coord(y, src_h, size.height);
    const auto y0 = static_cast<std::size_t>(sy);
    const std::size_t y1 = std::min(y0 + 1, src_h - 1);
    const double ty = sy - static_cast<double>(y0);
    for (std::size_t x = 0; x < size.width; ++x) {
      const double sx = source_coord(x, src_w, size.width);
      const auto x0 = static_cast<std::size_t>(sx);
      const std::size_t x1 = std::min(x0 + 1, src_w - 1);
      const double tx = sx - static_cast<double>(x0);
      const Pixel& p00 = frame.at(y0, x0);
      const Pixel& p01 = frame.at(y0, x1);
      const Pixel& p10 = frame.at(y1, x0);
      const Pixel& p11 = frame.at(y1, x1);
      const auto lerp2 = [&](double a, double b, double c, double d) {
        return (1.0 - ty) * ((1.0 - tx) * a + tx * b) + ty * ((1.0 - tx) * c + tx * d);
      };
      out.push_back(Pixel{lerp2(p00.r, p01.r, p10.r, p11.r), lerp2(p00.g, p01.g, p10.g, p11.g),
                          lerp2(p00.b, p01.b, p10.b, p11.b)});
    }
  }
  return Frame(size, std::move(out));
}

namespace {

void check_window(Extent frame, Extent window) {
  if (window.area() == 0 || window.width > frame.width || window.height > frame.height) {
    throw Error(ErrorKind::InvalidInput,
                "crop window " + to_string(window) + " does not fit a " + to_string(frame) + " frame");
  }
}

CropOffsets random_offsets(Extent frame, Extent window, Rng& rng) {
  check_window(frame, window);
  const std::size_t top = rng.below_inclusive(frame.height - window.height);
  const std::size_t left = rng.below_inclusive(frame.width - window.width);
  return CropOffsets{top, left};
}

}  // namespace

CropOffsets crop_offsets(Extent frame, const CropSpec& spec) {
  check_window(frame, spec.size);
  if (spec.mode == CropMode::Center) {
    return CropOffsets{(frame.height - spec.size.height) / 2, (frame.width - spec.size.width) / 2};
  }
  Rng rng(spec.seed);
  return random_offsets(frame, spec.size, rng);
}

Frame crop_at(const Frame& frame, Extent size, CropOffsets offsets) {
  check_window(frame.extent(), size);
  if (offsets.top + size.height > frame.height() || offsets.left + size.width > frame.width()) {
    throw Error(ErrorKind::InvalidInput, "crop window falls outside the frame");
  }
  std::vector<Pixel> out;
  out.reserve(size.area());
  for (std::size_t y = 0; y < size.height; ++y) {
    for (std::size_t x = 0; x < size.width; ++x) out.push_back(frame.at(offsets.top + y, offsets.left + x));
  }
  return Frame(size, std::move(out));
}

Frame crop(const Frame& frame, const CropSpec& spec) {
  return crop_at(frame, spec.size, crop_offsets(frame.extent(), spec));
}

Frame hflip(const Frame& frame) {
  std::vector<Pixel> out;
  out.reserve(frame.size());
  for (std::size_t y = 0; y < frame.height(); ++y) {
    for (std::size_t x = frame.width(); x-- > 0;) out.push_back(frame.at(y, x));
  }
  return Frame(frame.extent(), std::move(out));
}

Frame rotate(const Frame& frame, double degrees) {
  const double theta = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cx = static_cast<double>(frame.width()) / 2.0;
  const double cy = static_cast<double>(frame.height()) / 2.0;
  const auto w = static_cast<std::ptrdiff_t>(frame.width());
  const auto h = static_cast<std::ptrdiff_t>(frame.height());

  std::vector<Pixel> out;
  out.reserve(frame.size());
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      // Inverse map the output pixel centre into the source.
      const double dx = static_cast<double>(x) + 0.5 - cx;
      const double dy = static_cast<double>(y) + 0.5 - cy;
      const double sx = c * dx - s * dy + cx - 0.5;
      const double sy = s * dx + c * dy + cy - 0.5;
      const double fx = std::floor(sx);
      const double fy = std::floor(sy);
      const double tx = sx - fx;
      const double ty = sy - fy;
      const auto x0 = static_cast<std::ptrdiff_t>(fx);
      const auto y0 = static_cast<std::ptrdiff_t>(fy);

      Pixel acc;
      const auto tap = [&](std::ptrdiff_t yy, std::ptrdiff_t xx, double weight) {
        if (weight == 0.0 || yy < 0 || yy >= h || xx < 0 || xx >= w) return;
        const Pixel& p = frame.at(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx));
        acc.r += weight * p.r;
        acc.g += weight * p.g;
        acc.b += weight * p.b;
      };
      tap(y0, x0, (1.0 - tx) * (1.0 - ty));
      tap(y0, x0 + 1, tx * (1.0 - ty));
      tap(y0 + 1, x0, (1.0 - tx) * ty);
      tap(y0 + 1, x0 + 1, tx * ty);
      out.push_back(acc);
    }
  }
  return Frame(frame.extent(), std::move(out));
}

Frame add_gaussian_noise(const Frame& frame, const NoiseSpec& noise, Rng& rng) {
  std::vector<Pixel> out;
  out.reserve(frame.size());
  const auto jitter = [&](double v) {
    return std::clamp(v + rng.normal(noise.mean, noise.stddev), 0.0, 255.0);
  };
  for (const Pixel& p : frame) {
    const double r = jitter(p.r);
    const double g = jitter(p.g);
    const double b = jitter(p.b);
    out.push_back(Pixel{r, g, b});
  }
  return Frame(frame.extent(), std::move(out));
}

Frame augment(const Frame& image, const TransformSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  Frame out = image;
  if (spec.crop) {
    const CropOffsets offsets = spec.crop->mode == CropMode::Center
                                    ? crop_offsets(out.extent(), *spec.crop)
                                    : random_offsets(out.extent(), spec.crop->size, rng);
    out = crop_at(out, spec.crop->size, offsets);
  }
  if (spec.hflip_prob > 0.0 && rng.bernoulli(spec.hflip_prob)) out = hflip(out);
  if (spec.rotation_degrees > 0.0) {
    out = rotate(out, rng.uniform(-spec.rotation_degrees, spec.rotation_degrees));
  }
  if (spec.noise) out = add_gaussian_noise(out, *spec.noise, rng);
  return out;
}

}  // namespace starrgb
