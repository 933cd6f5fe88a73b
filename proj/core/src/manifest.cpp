#include <set>
#include <sstream>

#include "json.hpp"
#include "starrgb/corpus.hpp"

namespace starrgb {

namespace {

Error line_error(std::size_t line, const std::string& what) {
  return Error(ErrorKind::Parse, "manifest line " + std::to_string(line) + ": " + what);
}

bool safe_clip_id(std::string_view id) {
  if (id.empty() || id == "." || id == "..") return false;
  for (char c : id) {
    if (c == '/' || c == '\\' || c == '\0') return false;
  }
  return true;
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto newline = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, newline == std::string_view::npos ? std::string_view::npos : newline - pos);
    pos = newline == std::string_view::npos ? text.size() : newline + 1;
    ++line_no;
    if (blank(line)) continue;

    ManifestEntry entry;
    entry.line = line_no;
    try {
      const auto obj = nlohmann::json::parse(line);
      if (!obj.is_object()) throw line_error(line_no, "expected a JSON object");
      entry.clip_id = obj.at("clip_id").get<std::string>();
      entry.source = obj.at("source").get<std::string>();
      const auto start = obj.at("start_frame").get<std::int64_t>();
      const auto end = obj.at("end_frame").get<std::int64_t>();
      if (start < 1) throw line_error(line_no, "start_frame must be >= 1");
      if (end < start + 1) {
        throw line_error(line_no, "end_frame must be at least start_frame + 1 (2 frames)");
      }
      entry.start_frame = static_cast<std::size_t>(start);
      entry.end_frame = static_cast<std::size_t>(end);
      if (obj.contains("label") && !obj["label"].is_null()) {
        entry.label = obj["label"].get<std::string>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw line_error(line_no, e.what());
    }
    if (!safe_clip_id(entry.clip_id)) {
      throw line_error(line_no, "clip_id '" + entry.clip_id + "' is not usable as a file name");
    }
    if (!seen.insert(entry.clip_id).second) {
      throw line_error(line_no, "duplicate clip_id '" + entry.clip_id + "'");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path));
}

std::string serialize_manifest(std::span<const ManifestEntry> entries) {
  std::ostringstream out;
  for (const ManifestEntry& e : entries) {
    const nlohmann::json obj = {
        {"clip_id", e.clip_id},
        {"source", e.source.string()},
        {"start_frame", e.start_frame},
        {"end_frame", e.end_frame},
        {"label", e.label},
    };
    out << obj.dump() << '\n';
  }
  return out.str();
}

void resolve_sources(std::vector<ManifestEntry>& entries, const std::filesystem::path& base_dir) {
  for (ManifestEntry& e : entries) {
    if (e.source.is_relative()) e.source = base_dir / e.source;
  }
}

}  // namespace starrgb
