#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace hmfp {

/// Flat "key = value" text with '#' comments. Values may be double-quoted.
class Config {
  public:
    static Config parse(std::string_view text);
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }

    /// Throw ConfigError naming the key when missing or malformed.
    std::string string(const std::string& key) const;
    double number(const std::string& key) const;
    std::size_t count(const std::string& key) const;
    bool flag(const std::string& key) const;

    std::string string_or(const std::string& key, const std::string& fallback) const;
    double number_or(const std::string& key, double fallback) const;
    std::size_t count_or(const std::string& key, std::size_t fallback) const;
    bool flag_or(const std::string& key, bool fallback) const;
    std::optional<double> optional_number(const std::string& key) const;

    /// Sorted "key = value" lines.
    std::string canonical() const;
    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

std::uint64_t fnv1a64(std::string_view data);

} // namespace hmfp
