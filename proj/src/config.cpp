#include "hmfp/config.hpp"

#include "hmfp/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hmfp {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

Config Config::parse(std::string_view text) {
    Config c;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        bool quoted = false;
        for (std::size_t k = 0; k < line.size(); ++k) {
            if (line[k] == '"') quoted = !quoted;
            if (line[k] == '#' && !quoted) {
                line = line.substr(0, k);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string_view key = trim(line.substr(0, eq));
        std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        c.entries_[std::string(key)] = std::string(value);
    }
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse(ss.str());
}

std::string Config::string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

double Config::number(const std::string& key) const {
    const std::string s = string(key);
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(x))
        throw ConfigError("config key '" + key + "' is not a number: '" + s + "'");
    return x;
}

std::size_t Config::count(const std::string& key) const {
    const std::string s = string(key);
    std::size_t x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError("config key '" + key + "' is not a nonnegative integer: '" + s + "'");
    return x;
}

bool Config::flag(const std::string& key) const {
    const std::string s = string(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: '" + s + "'");
}

std::string Config::string_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
}
double Config::number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }
std::size_t Config::count_or(const std::string& key, std::size_t fallback) const {
    return has(key) ? count(key) : fallback;
}
bool Config::flag_or(const std::string& key, bool fallback) const { return has(key) ? flag(key) : fallback; }
std::optional<double> Config::optional_number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace hmfp
