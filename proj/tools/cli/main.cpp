#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using namespace starrgb;
using namespace starrgb::cli;

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("star");
  logger->set_pattern("star: %^%l%$: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("STAR_LOG")) {
    const std::string value = level;
    if (value == "error") {
      spdlog::set_level(spdlog::level::err);
    } else if (value == "debug") {
      spdlog::set_level(spdlog::level::debug);
    } else if (value != "info") {
      spdlog::warn("unknown STAR_LOG value '{}', using info", value);
    }
  }
}

Extent parse_extent(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x != std::string::npos) {
      const Extent e{std::stoul(text.substr(0, x)), std::stoul(text.substr(x + 1))};
      if (e.area() > 0) return e;
    }
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError("size", "expected WIDTHxHEIGHT, got '" + text + "'");
}

// Flags shared by encode and batch.
struct EncodeFlags {
  std::string metric;
  bool star_rgb = false;
  bool legacy = false;
  bool weighted_shadow = false;
  bool sobel = false;
  std::string normalize = "global";
  bool reverse = false;
  std::string resize;
  std::string center_crop;
  bool augment = false;
  std::string crop_size = "140x110";
  std::uint64_t seed = 0;

  void attach(CLI::App& app) {
    app.add_option("--metric", metric, "Pixel distance: abs-gray, euclidean or cosine")
        ->check(CLI::IsMember({"abs-gray", "euclidean", "cosine"}));
    auto* rgb = app.add_flag("--star-rgb", star_rgb, "Three-segment colour star (default)");
    auto* gray = app.add_flag("--legacy", legacy, "Single-channel star over the whole clip");
    rgb->excludes(gray);
    app.add_flag("--weighted-shadow", weighted_shadow, "Weight pair k by k/N (abs-gray only)");
    app.add_flag("--sobel", sobel, "Emit Sobel X/Y images of the star (abs-gray only)");
    app.add_option("--normalize", normalize, "PNG scaling: global, per-channel or none")
        ->check(CLI::IsMember({"global", "per-channel", "none"}));
    app.add_flag("--reverse", reverse, "Encode the clip with its frames reversed");
    app.add_option("--resize", resize, "Resize frames to WIDTHxHEIGHT before encoding");
    app.add_option("--center-crop", center_crop, "Center-crop the exported image to WIDTHxHEIGHT");
    app.add_flag("--augment", augment, "Random crop, flip, rotation and noise on the exported image");
    app.add_option("--crop-size", crop_size, "Random crop size used by --augment")->capture_default_str();
    app.add_option("--seed", seed, "Seed for --augment");
  }

  EncodeOptions options() const {
    EncodeOptions o;
    o.layout = legacy || (!star_rgb && (weighted_shadow || sobel)) ? Layout::Gray : Layout::StarRgb;
    if (!metric.empty()) o.metric = parse_metric(metric);
    o.weighted_shadow = weighted_shadow;
    o.sobel = sobel;
    o.normalization = *parse_normalization(normalize);
    o.reverse = reverse;
    if (!resize.empty()) o.resize = parse_extent(resize);
    if (!center_crop.empty()) o.center_crop = parse_extent(center_crop);
    o.augment = augment;
    o.augment_crop = parse_extent(crop_size);
    o.seed = seed;
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Condense gesture clips into star / star RGB images"};
  app.require_subcommand(1);

  EncodeCommand encode;
  EncodeFlags encode_flags;
  std::string encode_source, encode_manifest, encode_clip;
  auto* encode_app = app.add_subcommand("encode", "Encode one clip to PNG + float sidecar");
  encode_app->add_option("source", encode_source, "Frame directory or STRV1 container");
  encode_app->add_option("--manifest", encode_manifest, "Take the clip from a manifest");
  encode_app->add_option("--clip-id", encode_clip, "Manifest entry to encode");
  encode_app->add_option("--out", encode.out_dir, "Output directory");
  encode_flags.attach(*encode_app);

  BatchCommand batch;
  EncodeFlags batch_flags;
  auto* batch_app = app.add_subcommand("batch", "Encode every manifest entry in parallel");
  batch_app->add_option("--manifest", batch.manifest, "JSON Lines manifest")->required();
  batch_app->add_option("--out", batch.out_dir, "Output directory")->required();
  batch_app->add_option("--jobs", batch.jobs, "Worker count")->check(CLI::PositiveNumber);
  batch_flags.attach(*batch_app);

  SegmentCommand segment;
  auto* segment_app = app.add_subcommand("segment", "Cut manifest entries into frame directories");
  segment_app->add_option("--manifest", segment.manifest, "JSON Lines manifest")->required();
  segment_app->add_option("--out", segment.out_dir, "Output directory")->required();
  segment_app->add_option("--jobs", segment.jobs, "Worker count")->check(CLI::PositiveNumber);

  CompareCommand compare;
  std::string compare_out;
  auto* compare_app = app.add_subcommand("compare", "Absolute difference of two encodings");
  compare_app->add_option("a", compare.a, "First image (.f32 sidecar or PNG)")->required();
  compare_app->add_option("b", compare.b, "Second image (.f32 sidecar or PNG)")->required();
  compare_app->add_option("--out", compare_out, "Write diff.f32 and diff.png here");
  compare_app->add_flag("--swap-rb", compare.swap_rb, "Swap R and B of the second image first");

  FuseCommand fuse_cmd;
  std::string fuse_params, fuse_out;
  std::uint64_t fuse_seed = 0;
  auto* fuse_app = app.add_subcommand("fuse", "Soft-attention fusion of feature vectors");
  fuse_app->add_option("--params", fuse_params, "Scorer parameter JSON");
  auto* seed_opt = fuse_app->add_option("--seed", fuse_seed, "Random scorer seed (no --params)");
  fuse_app->add_option("vectors", fuse_cmd.vectors, "Feature vectors (JSON array or .f32)")
      ->required();
  fuse_app->add_option("--out", fuse_out, "Fused vector sidecar path");

  try {
    app.parse(argc, argv);
    if (*encode_app) {
      if (!encode_source.empty()) encode.source = encode_source;
      if (!encode_manifest.empty()) encode.manifest = encode_manifest;
      if (!encode_clip.empty()) encode.clip_id = encode_clip;
      encode.options = encode_flags.options();
      return run_encode(encode, std::cout);
    }
    if (*batch_app) {
      batch.options = batch_flags.options();
      return run_batch(batch, std::cout);
    }
    if (*segment_app) return run_segment(segment, std::cout);
    if (*compare_app) {
      if (!compare_out.empty()) compare.out_dir = compare_out;
      return run_compare(compare, std::cout);
    }
    if (*fuse_app) {
      if (!fuse_params.empty()) fuse_cmd.params = fuse_params;
      if (seed_opt->count() > 0) fuse_cmd.seed = fuse_seed;
      if (!fuse_out.empty()) fuse_cmd.out = fuse_out;
      return run_fuse(fuse_cmd, std::cout);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  } catch (const starrgb::Error& e) {
    spdlog::error("{}", e.what());
    return exit_code_for(e);
  }
  return kExitInputError;
}
