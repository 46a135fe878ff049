#include "lcc/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>

#include <charconv>
#include <sstream>

namespace lcc::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& text, const std::string& key, const std::string& source) {
    const std::string t = trim(text);
    T value{};
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
        throw ConfigError(source + ": key '" + key + "' has invalid value '" + text + "'");
    }
    return value;
}

}  // namespace

Config Config::from_file(const std::string& path) {
    Config c;
    c.source_ = path;
    try {
        boost::property_tree::ini_parser::read_ini(path, c.tree_);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("config " + path + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    return c;
}

Config Config::from_string(const std::string& text) {
    Config c;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, c.tree_);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("config: " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    return c;
}

void Config::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) { tree_.put(key, value); }

bool Config::has(const std::string& key) const { return static_cast<bool>(tree_.get_optional<std::string>(key)); }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return trim(tree_.get<std::string>(key, fallback));
}

std::string Config::require_string(const std::string& key) const {
    const auto v = tree_.get_optional<std::string>(key);
    if (!v || trim(*v).empty()) throw ConfigError(source_ + ": missing required key '" + key + "'");
    return trim(*v);
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto v = tree_.get_optional<std::string>(key);
    return v ? parse_number<double>(*v, key, source_) : fallback;
}

long long Config::get_int(const std::string& key, long long fallback) const {
    const auto v = tree_.get_optional<std::string>(key);
    return v ? parse_number<long long>(*v, key, source_) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto v = tree_.get_optional<std::string>(key);
    return v ? parse_number<std::uint64_t>(*v, key, source_) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto v = tree_.get_optional<std::string>(key);
    if (!v) return fallback;
    const std::string t = trim(*v);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError(source_ + ": key '" + key + "' is not a boolean: '" + t + "'");
}

std::vector<Index> Config::get_index_list(const std::string& key, const std::vector<Index>& fallback) const {
    const auto v = tree_.get_optional<std::string>(key);
    if (!v) return fallback;
    std::vector<Index> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        const auto n = parse_number<long long>(item, key, source_);
        if (n < 1) throw ConfigError(source_ + ": key '" + key + "' must list positive integers");
        out.push_back(static_cast<Index>(n));
    }
    return out;
}

}  // namespace lcc::cli
