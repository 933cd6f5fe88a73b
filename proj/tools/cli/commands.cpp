#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "json.hpp"
#include "starrgb/attention_fusion.hpp"
#include "starrgb/export.hpp"
#include "starrgb/parallel.hpp"
#include "starrgb/random.hpp"

namespace starrgb::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const Error& error) noexcept {
  return error.kind() == ErrorKind::Io ? kExitIoError : kExitInputError;
}

EncodeConfig EncodeOptions::config() const {
  const Metric chosen =
      metric.value_or(layout == Layout::StarRgb ? Metric::CosineScaled : Metric::AbsGray);
  if (layout == Layout::StarRgb && (weighted_shadow || sobel)) {
    throw Error(ErrorKind::InvalidInput,
                "--weighted-shadow and --sobel belong to the legacy star, not --star-rgb");
  }
  if (center_crop && augment) {
    throw Error(ErrorKind::InvalidInput, "--center-crop and --augment are mutually exclusive");
  }
  return EncodeConfig(chosen, weighted_shadow, sobel, normalization);
}

void ensure_writable_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path probe = dir / ".star-write-probe";
  write_file(probe, "");
  fs::remove(probe, ec);
}

namespace {

fs::path require_existing(const fs::path& path, std::string_view what) {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + " " + path.string() + " does not exist");
  }
  return path;
}

ClipSource prepare_clip(const ClipSource& clip, const EncodeOptions& options) {
  if (!options.resize && !options.reverse) return clip;
  std::vector<Frame> frames;
  frames.reserve(clip.frame_count());
  for (const Frame& f : clip.frames()) {
    frames.push_back(options.resize ? resize(f, *options.resize) : f);
  }
  if (options.reverse) std::reverse(frames.begin(), frames.end());
  return ClipSource(std::move(frames), clip.clip_id(), clip.label());
}

// Crop / augmentation applied to the quantized image. Gray images go through
// the 3-channel path and come back as gray.
Image8 postprocess(const Image8& image, const EncodeOptions& options, std::string_view clip_id) {
  if (!options.center_crop && !options.augment) return image;
  Frame frame = frame_from_image(image);
  if (options.center_crop) {
    frame = crop(frame, CropSpec{CropMode::Center, *options.center_crop, 0});
  } else {
    TransformSpec spec;
    spec.crop = CropSpec{CropMode::Random, options.augment_crop, 0};
    spec.hflip_prob = 0.5;
    spec.rotation_degrees = 5.0;
    spec.noise = NoiseSpec{0.0, 1.0};
    frame = augment(frame, spec, derive_seed(options.seed, clip_id));
  }
  Image8 out = image_from_frame(frame);
  if (image.channels == 1) {
    Image8 gray{out.extent, 1, std::vector<std::uint8_t>(out.extent.area())};
    for (std::size_t idx = 0; idx < gray.bytes.size(); ++idx) gray.bytes[idx] = out.bytes[idx * 3];
    return gray;
  }
  return out;
}

std::vector<std::string> path_strings(const std::vector<fs::path>& paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) out.push_back(p.string());
  return out;
}

}  // namespace

EncodeOutcome encode_clip_to_files(const ClipSource& source, const EncodeOptions& options,
                                   const fs::path& out_dir) {
  const EncodeConfig config = options.config();
  const ClipSource clip = prepare_clip(source, options);
  const std::string& id = clip.clip_id();

  EncodeOutcome outcome;
  outcome.clip_id = id;
  outcome.frames = clip.frame_count();
  const auto emit_png = [&](const Image8& image, const std::string& suffix) {
    const fs::path path = out_dir / (id + suffix);
    write_png(path, postprocess(image, options, id));
    outcome.outputs.push_back(path);
  };

  Sidecar sidecar;
  if (options.layout == Layout::StarRgb) {
    const StarRgb star = encode_star_rgb(clip, config);
    outcome.max_value = star.max_value();
    emit_png(normalize_for_export(star, config.normalization()), ".png");
    sidecar = make_sidecar(star, id, config);
  } else {
    const StarGray star = encode_star_gray(clip, config);
    outcome.max_value = star.m.max_value();
    const GrayExport images = normalize_for_export(star, config.normalization());
    emit_png(images.m, ".png");
    if (images.m_x) emit_png(*images.m_x, ".mx.png");
    if (images.m_y) emit_png(*images.m_y, ".my.png");
    sidecar = make_sidecar(star, id, config, clip.frame_count());
  }
  const fs::path sidecar_path = out_dir / (id + ".f32");
  write_sidecar(sidecar_path, sidecar);
  outcome.outputs.push_back(sidecar_path);
  return outcome;
}

int run_encode(const EncodeCommand& cmd, std::ostream& out) {
  try {
    const EncodeConfig config = cmd.options.config();
    ensure_writable_directory(cmd.out_dir);

    std::optional<ClipSource> clip;
    if (cmd.manifest) {
      auto entries = read_manifest(require_existing(*cmd.manifest, "manifest"));
      resolve_sources(entries, cmd.manifest->parent_path());
      const ManifestEntry* chosen = nullptr;
      for (const auto& e : entries) {
        if (cmd.clip_id ? e.clip_id == *cmd.clip_id : entries.size() == 1) chosen = &e;
      }
      if (!chosen) {
        throw Error(ErrorKind::InvalidInput,
                    cmd.clip_id ? "clip '" + *cmd.clip_id + "' is not in the manifest"
                                : std::string("manifest has several entries; pass --clip-id"));
      }
      clip.emplace(load_clip(*chosen));
    } else if (cmd.source) {
      clip.emplace(load_clip(require_existing(*cmd.source, "source")));
    } else {
      throw Error(ErrorKind::InvalidInput, "encode needs a source path or --manifest");
    }

    const EncodeOutcome outcome = encode_clip_to_files(*clip, cmd.options, cmd.out_dir);
    const json summary = {
        {"clip_id", outcome.clip_id},
        {"frames", outcome.frames},
        {"metric", to_string(config.metric())},
        {"mode", cmd.options.layout == Layout::StarRgb ? "star-rgb" : "legacy"},
        {"max_value", outcome.max_value},
        {"outputs", path_strings(outcome.outputs)},
    };
    out << summary.dump() << '\n';
    spdlog::info("encoded {} ({} frames)", outcome.clip_id, outcome.frames);
    return kExitOk;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kExitIoError;
  }
}

namespace {

struct EntryReport {
  std::string clip_id;
  bool ok = false;
  std::string error;
  double wall_ms = 0.0;
  std::vector<fs::path> outputs;
};

std::vector<ManifestEntry> load_manifest_for_run(const fs::path& manifest) {
  auto entries = read_manifest(require_existing(manifest, "manifest"));
  resolve_sources(entries, manifest.parent_path());
  return entries;
}

// Runs work(entry) for every entry across `jobs` workers, collecting one
// report per entry in manifest order.
template <typename Work>
std::vector<EntryReport> run_entries(const std::vector<ManifestEntry>& entries, std::size_t jobs,
                                     Work work) {
  std::vector<EntryReport> reports(entries.size());
  parallel_for(entries.size(), jobs, [&](std::size_t i) {
    EntryReport& report = reports[i];
    report.clip_id = entries[i].clip_id;
    const auto start = std::chrono::steady_clock::now();
    try {
      report.outputs = work(entries[i]);
      report.ok = true;
    } catch (const std::exception& e) {
      report.error = e.what();
      spdlog::warn("{}: {}", report.clip_id, e.what());
    }
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });
  return reports;
}

int finish_run(const std::vector<EntryReport>& reports, std::size_t jobs, const fs::path& report_path,
               std::ostream& out) {
  json entries = json::array();
  std::size_t failed = 0;
  for (const EntryReport& r : reports) {
    json item = {{"clip_id", r.clip_id},
                 {"status", r.ok ? "ok" : "failed"},
                 {"wall_ms", r.wall_ms},
                 {"outputs", path_strings(r.outputs)}};
    if (!r.ok) {
      item["error"] = r.error;
      ++failed;
    }
    entries.push_back(std::move(item));
  }
  const json report = {{"jobs", jobs},
                       {"succeeded", reports.size() - failed},
                       {"failed", failed},
                       {"entries", entries}};
  write_file(report_path, report.dump(2) + "\n");
  out << json{{"succeeded", reports.size() - failed},
              {"failed", failed},
              {"report", report_path.string()}}
             .dump()
      << '\n';
  return failed == 0 ? kExitOk : kExitPartialFailure;
}

}  // namespace

int run_batch(const BatchCommand& cmd, std::ostream& out) {
  try {
    if (cmd.jobs < 1) throw Error(ErrorKind::InvalidInput, "--jobs must be at least 1");
    cmd.options.config();
    const auto entries = load_manifest_for_run(cmd.manifest);
    ensure_writable_directory(cmd.out_dir);
    spdlog::info("batch: {} entries on {} workers", entries.size(), cmd.jobs);
    const auto reports = run_entries(entries, cmd.jobs, [&](const ManifestEntry& entry) {
      return encode_clip_to_files(load_clip(entry), cmd.options, cmd.out_dir).outputs;
    });
    return finish_run(reports, cmd.jobs, cmd.out_dir / "report.json", out);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kExitIoError;
  }
}

int run_segment(const SegmentCommand& cmd, std::ostream& out) {
  try {
    if (cmd.jobs < 1) throw Error(ErrorKind::InvalidInput, "--jobs must be at least 1");
    const auto entries = load_manifest_for_run(cmd.manifest);
    ensure_writable_directory(cmd.out_dir);
    std::vector<ManifestEntry> segmented(entries.size());
    const auto reports = run_entries(entries, cmd.jobs, [&](const ManifestEntry& entry) {
      const ClipSource clip = load_clip(entry);
      write_frame_directory(cmd.out_dir / entry.clip_id, clip.frames());
      const auto index = static_cast<std::size_t>(&entry - entries.data());
      segmented[index] = ManifestEntry{entry.clip_id, entry.clip_id, 1, clip.frame_count(),
                                       entry.label, 0};
      return std::vector<fs::path>{cmd.out_dir / entry.clip_id};
    });
    std::vector<ManifestEntry> written;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (reports[i].ok) written.push_back(segmented[i]);
    }
    write_file(cmd.out_dir / "manifest.jsonl", serialize_manifest(written));
    return finish_run(reports, cmd.jobs, cmd.out_dir / "segment-report.json", out);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kExitIoError;
  }
}

namespace {

struct Planes {
  Extent extent;
  std::vector<std::vector<double>> channels;
  std::string metric;
};

Planes load_planes(const fs::path& path) {
  require_existing(path, "image");
  Planes out;
  if (path.extension() == ".f32") {
    const Sidecar sidecar = read_sidecar(path);
    out.extent = sidecar.header.extent;
    out.metric = sidecar.header.metric;
    for (const auto& plane : sidecar.planes) out.channels.emplace_back(plane.begin(), plane.end());
    return out;
  }
  const Image8 image = read_png(path);
  out.extent = image.extent;
  out.channels.assign(image.channels, std::vector<double>(image.extent.area()));
  for (std::size_t idx = 0; idx < image.extent.area(); ++idx) {
    for (std::size_t c = 0; c < image.channels; ++c) {
      out.channels[c][idx] = image.bytes[idx * image.channels + c];
    }
  }
  return out;
}

}  // namespace

int run_compare(const CompareCommand& cmd, std::ostream& out) {
  try {
    const Planes a = load_planes(cmd.a);
    Planes b = load_planes(cmd.b);
    if (a.extent != b.extent || a.channels.size() != b.channels.size()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "cannot compare " + to_string(a.extent) + "x" + std::to_string(a.channels.size()) +
                      " with " + to_string(b.extent) + "x" + std::to_string(b.channels.size()));
    }
    if (cmd.swap_rb) {
      if (b.channels.size() != 3) throw Error(ErrorKind::InvalidInput, "--swap-rb needs 3 channels");
      std::swap(b.channels[0], b.channels[2]);
    }

    double scale = 0.0;
    for (const Planes* p : {&a, static_cast<const Planes*>(&b)}) {
      for (const auto& plane : p->channels) {
        for (double v : plane) scale = std::max(scale, std::abs(v));
      }
    }
    const double denom = scale > 0.0 ? scale : 1.0;
    const std::size_t area = a.extent.area();

    std::vector<std::vector<double>> diff(a.channels.size(), std::vector<double>(area));
    json per_channel = json::array();
    double max_abs = 0.0;
    double sum_abs = 0.0;
    for (std::size_t c = 0; c < a.channels.size(); ++c) {
      double channel_max = 0.0;
      double channel_sum = 0.0;
      for (std::size_t idx = 0; idx < area; ++idx) {
        const double d = std::abs(a.channels[c][idx] - b.channels[c][idx]);
        diff[c][idx] = d;
        channel_max = std::max(channel_max, d);
        channel_sum += d;
      }
      max_abs = std::max(max_abs, channel_max);
      sum_abs += channel_sum;
      const double channel_mean = channel_sum / static_cast<double>(area);
      per_channel.push_back({{"max_abs", channel_max},
                             {"mean_abs", channel_mean},
                             {"max_rel", channel_max / denom},
                             {"mean_rel", channel_mean / denom}});
    }
    const double mean_abs = sum_abs / static_cast<double>(area * a.channels.size());

    std::vector<std::string> outputs;
    if (cmd.out_dir) {
      ensure_writable_directory(*cmd.out_dir);
      Sidecar sidecar;
      sidecar.header.extent = a.extent;
      sidecar.header.channels = diff.size();
      sidecar.header.clip_id = cmd.a.stem().string() + "-vs-" + cmd.b.stem().string();
      sidecar.header.metric = a.metric;
      sidecar.header.mode = "diff";
      sidecar.header.normalization = "none";
      for (const auto& plane : diff) sidecar.planes.emplace_back(plane.begin(), plane.end());
      write_sidecar(*cmd.out_dir / "diff.f32", sidecar);
      outputs.push_back((*cmd.out_dir / "diff.f32").string());

      // Each channel stretched to its own maximum so tiny differences show.
      if (diff.size() == 1 || diff.size() == 3) {
        Image8 vis{a.extent, diff.size(), std::vector<std::uint8_t>(area * diff.size(), 0)};
        for (std::size_t c = 0; c < diff.size(); ++c) {
          const double peak = *std::max_element(diff[c].begin(), diff[c].end());
          if (peak <= 0.0) continue;
          for (std::size_t idx = 0; idx < area; ++idx) {
            vis.bytes[idx * diff.size() + c] = quantize_round_half_up(diff[c][idx] / peak * 255.0);
          }
        }
        write_png(*cmd.out_dir / "diff.png", vis);
        outputs.push_back((*cmd.out_dir / "diff.png").string());
      }
    }

    const json summary = {{"channels", per_channel},
                          {"max_abs", max_abs},
                          {"mean_abs", mean_abs},
                          {"scale", scale},
                          {"max_rel", max_abs / denom},
                          {"mean_rel", mean_abs / denom},
                          {"outputs", outputs}};
    out << summary.dump() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kExitIoError;
  }
}

namespace {

FeatureVector read_feature_vector(const fs::path& path) {
  const std::string text = read_file(require_existing(path, "feature vector"));
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      return FeatureVector(json::parse(text).get<std::vector<double>>());
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
  }
  const Sidecar sidecar = decode_sidecar(text);
  std::vector<double> values;
  for (const auto& plane : sidecar.planes) values.insert(values.end(), plane.begin(), plane.end());
  return FeatureVector(std::move(values));
}

}  // namespace

int run_fuse(const FuseCommand& cmd, std::ostream& out) {
  try {
    if (cmd.vectors.size() < 2) {
      throw Error(ErrorKind::InvalidInput, "fuse needs at least 2 feature-vector files");
    }
    std::vector<FeatureVector> maps;
    for (const auto& path : cmd.vectors) maps.push_back(read_feature_vector(path));
    const std::size_t d = maps.front().size();

    ScorerParams params;
    if (cmd.params) {
      params = load_scorer_params(require_existing(*cmd.params, "parameter file"));
    } else if (cmd.seed) {
      params = ScorerParams::random(d, *cmd.seed);
    } else {
      throw Error(ErrorKind::InvalidInput, "fuse needs --params or --seed");
    }
    if (params.input_dim != d) {
      throw Error(ErrorKind::DimensionMismatch, "feature length " + std::to_string(d) +
                                                    " does not match parameter d=" +
                                                    std::to_string(params.input_dim));
    }

    const FusionResult result = fuse(maps, params);
    json summary = {{"d", d},
                    {"weights", result.weights},
                    {"fused", std::vector<double>(result.fused.values().begin(),
                                                  result.fused.values().end())}};
    if (cmd.out) {
      if (cmd.out->has_parent_path()) ensure_writable_directory(cmd.out->parent_path());
      Sidecar sidecar;
      sidecar.header.extent = Extent{d, 1};
      sidecar.header.channels = 1;
      sidecar.header.clip_id = "fused";
      sidecar.header.mode = "fused";
      sidecar.header.normalization = "none";
      sidecar.planes.emplace_back(result.fused.values().begin(), result.fused.values().end());
      write_sidecar(*cmd.out, sidecar);
      summary["output"] = cmd.out->string();
    }
    out << summary.dump() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kExitIoError;
  }
}

}  // namespace starrgb::cli
