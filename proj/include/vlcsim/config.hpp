#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vlc {

std::uint64_t fnv1a64(const std::string& text);

// line-oriented key-value text with [section] headers, full-line # or ;
// comments, and a mandatory top-level `format = 1` key; later duplicates
// of a key win; relative paths resolve against the file's directory
struct ConfigFile {
  std::string dir;
  std::string raw_text;
  std::map<std::string, std::map<std::string, std::string>> sections;

  static ConfigFile load(const std::string& path);
  static ConfigFile parse(const std::string& text, const std::string& dir);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_str(const std::string& section, const std::string& key) const;
  std::string get_str(const std::string& section, const std::string& key,
                      const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_str_list(const std::string& section, const std::string& key) const;

  std::string resolve_path(const std::string& value) const;
};

}  // namespace vlc
