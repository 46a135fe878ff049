#pragma once

#include "lcc/common.hpp"

#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace lcc::cli {

/// Flat INI-style configuration addressed as "section.key". Top-level keys
/// (before any section) are addressed by their bare name.
class Config {
public:
    Config() = default;
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    /// Applies an override of the form "section.key=value".
    void apply_override(const std::string& assignment);
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    /// Comma-separated list of positive integers; an empty value yields an empty list.
    std::vector<Index> get_index_list(const std::string& key, const std::vector<Index>& fallback) const;

private:
    boost::property_tree::ptree tree_;
    std::string source_ = "<config>";
};

}  // namespace lcc::cli
