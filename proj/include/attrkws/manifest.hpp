#pragma once

// JSON-lines manifests: {utt_id, path, keyword, language, split} per line.
// Relative paths resolve against the manifest's own directory.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "attrkws/error.hpp"
#include "attrkws/frame_matrix.hpp"
#include "attrkws/unicode.hpp"

namespace attrkws {

struct ManifestRecord {
  std::string utt_id;
  std::filesystem::path path;
  std::string keyword;
  std::string language;
  std::string split;
};

inline std::vector<ManifestRecord> parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {}) {
  std::vector<ManifestRecord> out;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  for (const auto& line : unicode::split_char(text, '\n')) {
    ++line_no;
    if (unicode::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("manifest: ") + e.what(), line_no);
    }
    auto field = [&](const char* name) -> std::string {
      if (!j.is_object() || !j.contains(name) || !j[name].is_string())
        throw ParseError(std::string("manifest: missing string field '") + name + "'", line_no);
      return j[name].get<std::string>();
    };
    ManifestRecord r{field("utt_id"), field("path"), field("keyword"), field("language"),
                     j.contains("split") && j["split"].is_string() ? j["split"].get<std::string>() : std::string()};
    if (r.path.is_relative() && !base_dir.empty()) r.path = base_dir / r.path;
    if (!ids.insert(r.utt_id).second) throw DuplicateError("manifest: duplicate utt_id '" + r.utt_id + "'");
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<ManifestRecord> load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

inline std::string manifest_line(const ManifestRecord& r) {
  nlohmann::ordered_json j;
  j["utt_id"] = r.utt_id;
  j["path"] = r.path.generic_string();
  j["keyword"] = r.keyword;
  j["language"] = r.language;
  j["split"] = r.split;
  return j.dump();
}

// utt_id -> predicted language, from JSON lines {utt_id, language}.
inline std::map<std::string, std::string> parse_language_predictions(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  for (const auto& line : unicode::split_char(text, '\n')) {
    ++line_no;
    if (unicode::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out[j.at("utt_id").get<std::string>()] = j.at("language").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("language predictions: ") + e.what(), line_no);
    }
  }
  return out;
}

}  // namespace attrkws
