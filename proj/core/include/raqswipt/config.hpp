#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "raqswipt/scenario.hpp"

namespace raq {

/// Flat "key = value" document grouped by "[section]" headers. '#' and ';'
/// start comments. Keys are unique within a section.
class KeyValueDocument {
 public:
  static KeyValueDocument parse(std::istream& in, const std::string& origin = "<input>");
  static KeyValueDocument load(const std::filesystem::path& path);

  bool has_section(const std::string& section) const;
  const std::map<std::string, std::string>* section(const std::string& name) const;
  std::vector<std::string> section_names() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// Reads typed values out of one section and rejects keys nobody asked for.
class SectionReader {
 public:
  SectionReader(const KeyValueDocument& doc, std::string section);
  ~SectionReader() = default;

  void read(const std::string& key, int& out);
  void read(const std::string& key, double& out);
  void read(const std::string& key, std::string& out);
  void read(const std::string& key, std::uint64_t& out);
  /// Comma-separated list; a single value is kept as a one-element list.
  void read(const std::string& key, std::vector<double>& out);

  /// Throws ConfigError naming the first unknown key.
  void finish() const;

 private:
  const std::string* lookup(const std::string& key);

  std::string section_;
  const std::map<std::string, std::string>* values_ = nullptr;
  std::vector<std::string> consumed_;
};

struct ConfigFile {
  SystemConfig system = default_system();
  FrontEnd raqr = default_raqr_frontend();
  FrontEnd rf = default_rf_frontend();
  ArrayPhase array;
  GeometryConfig geometry;

  void validate() const;
};

/// Sections: [system], [frontend.raqr], [frontend.rf], [geometry]. Missing
/// keys keep their defaults; other sections are ignored here.
ConfigFile read_config(const KeyValueDocument& doc);
ConfigFile load_config(const std::filesystem::path& path);

/// Serializes every field, so that load(write(c)) == c.
std::string write_config(const ConfigFile& config);

Scenario make_scenario(const ConfigFile& config, const Geometry& geometry, ReceiverKind receiver);

}  // namespace raq
