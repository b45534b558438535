#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netpop {

/// Flat key=value run configuration. Every key is known in advance and every
/// value is checked against its domain when it is set, so a RunConfig that
/// exists is valid. Keys not set explicitly fall back to built-in defaults.
class RunConfig {
public:
  RunConfig() = default;

  /// Lines of `key = value`; '#' starts a comment.
  static RunConfig parse(std::string_view text);
  static RunConfig from_file(const std::filesystem::path& path);
  /// Reads the "config" object of a run manifest.
  static RunConfig from_manifest(const std::filesystem::path& path);

  /// Throws UnknownKey or InvalidConfig.
  void set(const std::string& key, const std::string& value);
  /// Parses "key=value".
  void set_assignment(const std::string& assignment);

  /// True when the key was set explicitly or has a non-empty default.
  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;
  double get_real(const std::string& key) const;
  std::size_t get_size(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::vector<double> get_reals(const std::string& key) const;
  std::vector<std::size_t> get_sizes(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;
  std::optional<double> get_optional_real(const std::string& key) const;
  std::optional<std::size_t> get_optional_size(const std::string& key) const;

  /// Explicitly set values only.
  const std::map<std::string, std::string>& values() const noexcept { return values_; }
  /// Sorted key=value lines of the explicitly set values.
  std::string canonical() const;
  std::uint64_t hash() const;

  static std::vector<std::string> known_keys();

private:
  std::map<std::string, std::string> values_;
};

}  // namespace netpop
