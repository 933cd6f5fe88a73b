#pragma once

// The `star` subcommands as plain functions so tests can drive them without
// spawning processes. Each returns the process exit code; machine-readable
// one-line JSON goes to `out`, diagnostics go through spdlog to stderr.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "starrgb/corpus.hpp"
#include "starrgb/model.hpp"
#include "starrgb/pixel_metrics.hpp"
#include "starrgb/star_encoder.hpp"

namespace starrgb::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitPartialFailure = 1,
  kExitInputError = 2,
  kExitIoError = 3,
};

int exit_code_for(const Error& error) noexcept;

enum class Layout { StarRgb, Gray };

struct EncodeOptions {
  Layout layout = Layout::StarRgb;
  std::optional<Metric> metric;  // cosine for star RGB, abs-gray for gray
  bool weighted_shadow = false;
  bool sobel = false;
  Normalization normalization = Normalization::GlobalMax;
  bool reverse = false;
  std::optional<Extent> resize;        // frames, before encoding
  std::optional<Extent> center_crop;   // encoded image
  bool augment = false;                // random crop/flip/rotate/noise on the encoded image
  Extent augment_crop{140, 110};
  std::uint64_t seed = 0;

  // Throws InvalidInput for contradictory flags.
  EncodeConfig config() const;
};

struct EncodeOutcome {
  std::string clip_id;
  std::size_t frames = 0;
  double max_value = 0.0;
  std::vector<std::filesystem::path> outputs;
};

// Encodes one clip and writes <out_dir>/<clip_id>.png (+ .mx.png/.my.png
// for Sobel channels) and <clip_id>.f32.
EncodeOutcome encode_clip_to_files(const ClipSource& clip, const EncodeOptions& options,
                                   const std::filesystem::path& out_dir);

// Creates the directory and proves it is writable. Throws Io.
void ensure_writable_directory(const std::filesystem::path& dir);

struct EncodeCommand {
  std::optional<std::filesystem::path> source;
  std::optional<std::filesystem::path> manifest;
  std::optional<std::string> clip_id;  // selects the manifest entry
  std::filesystem::path out_dir = ".";
  EncodeOptions options;
};

int run_encode(const EncodeCommand& cmd, std::ostream& out);

struct BatchCommand {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  std::size_t jobs = 1;
  EncodeOptions options;
};

// Writes <out_dir>/report.json. Encoded files depend only on the manifest
// and options; the report additionally records wall times.
int run_batch(const BatchCommand& cmd, std::ostream& out);

struct SegmentCommand {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  std::size_t jobs = 1;
};

// Writes <out_dir>/<clip_id>/000001.png... and <out_dir>/manifest.jsonl
// pointing at them.
int run_segment(const SegmentCommand& cmd, std::ostream& out);

struct CompareCommand {
  std::filesystem::path a;
  std::filesystem::path b;
  std::optional<std::filesystem::path> out_dir;
  bool swap_rb = false;  // compare A against B with its R and B channels exchanged
};

// Inputs are float sidecars (.f32) or PNGs. Prints per-channel max/mean
// absolute differences, absolute and relative to max |A|.
int run_compare(const CompareCommand& cmd, std::ostream& out);

struct FuseCommand {
  std::optional<std::filesystem::path> params;
  std::optional<std::uint64_t> seed;  // random scorer when no params file
  std::vector<std::filesystem::path> vectors;
  std::optional<std::filesystem::path> out;  // fused vector sidecar
};

// Vector files are JSON arrays of numbers or float sidecars.
int run_fuse(const FuseCommand& cmd, std::ostream& out);

}  // namespace starrgb::cli
