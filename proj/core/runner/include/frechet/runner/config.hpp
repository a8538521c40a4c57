#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frechet/metric.hpp"

namespace frechet::runner {

/// Plain-text configuration: `key = value` lines grouped under `[section]`
/// headers; `#` and `;` start comments. Keys before the first header belong to
/// the unnamed section "".
class Config {
 public:
  static Config parse(std::string_view text, std::string origin = "<config>");
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_int(const std::string& section, const std::string& key, long fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const;

  void set(const std::string& section, const std::string& key, std::string value);
  const std::map<std::string, std::map<std::string, std::string>>& sections() const noexcept { return sections_; }

  /// Directory that relative file references (dense(file.csv)) resolve against.
  const std::filesystem::path& base_dir() const noexcept { return base_dir_; }
  void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::filesystem::path base_dir_ = ".";
  std::string origin_;
};

double parse_double(std::string_view text, std::string_view what);
long parse_int(std::string_view text, std::string_view what);
std::vector<double> parse_list(std::string_view text, std::string_view what);

/// Reads [section] keys dim, weight_rule (geometric:a | dyadic | explicit:w1,w2,...),
/// seminorm_mode (coordinate-abs | cumulative-max), metric_mode (sup-form | sum-form)
/// and tail_bound, each defaulting to the corresponding property of `fallback`.
GradedSpace space_from_config(const Config& config, const std::string& section, const GradedSpace& fallback);

}  // namespace frechet::runner
