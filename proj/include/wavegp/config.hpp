#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wavegp/core.hpp"

namespace wavegp {

// Plain `key = value` file; `#` starts a comment; keys are dotted
// (`fdtd.c = 0.5`). Vectors are comma separated.
class Config {
public:
    Config() = default;
    static Config parse(const std::string& text);
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    double get_double(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
    Vec3 get_vec3(const std::string& key, const Vec3& fallback) const;
    Vec3 get_vec3(const std::string& key) const;
    std::vector<double> get_list(const std::string& key) const;

    // Throws on any key outside `allowed`.
    void require_known(const std::vector<std::string>& allowed) const;

    const std::map<std::string, std::string>& entries() const { return values_; }
    // canonical `key = value` lines, sorted by key
    std::string canonical() const;
    // FNV-1a of canonical()
    std::uint64_t hash() const;

private:
    std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a(const std::string& text);

}  // namespace wavegp
