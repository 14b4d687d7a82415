#include "wavegp/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace wavegp {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& s) {
    const std::string v = trim(s);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0') throw InputError("config key '" + key + "': expected a number, got '" + s + "'");
    return x;
}

}  // namespace

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw InputError("config line " + std::to_string(line_no) + ": empty key");
        if (cfg.has(key)) throw InputError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        cfg.values_[key] = value;
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) { return parse(read_text_file(path)); }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string Config::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw InputError("missing config key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

double Config::get_double(const std::string& key) const { return to_double(key, get_string(key)); }

long long Config::get_int(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    const std::string v = trim(get_string(key));
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0') throw InputError("config key '" + key + "': expected an integer");
    return x;
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string v = trim(get_string(key));
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0' || v[0] == '-') throw InputError("config key '" + key + "': expected a seed");
    return x;
}

std::vector<double> Config::get_list(const std::string& key) const {
    std::vector<double> out;
    std::istringstream is(get_string(key));
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(to_double(key, item));
    return out;
}

Vec3 Config::get_vec3(const std::string& key) const {
    const auto v = get_list(key);
    if (v.size() != 3) throw InputError("config key '" + key + "': expected three comma-separated numbers");
    return {v[0], v[1], v[2]};
}

Vec3 Config::get_vec3(const std::string& key, const Vec3& fallback) const {
    return has(key) ? get_vec3(key) : fallback;
}

void Config::require_known(const std::vector<std::string>& allowed) const {
    for (const auto& [k, v] : values_)
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw InputError("unknown config key '" + k + "'");
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t Config::hash() const { return fnv1a(canonical()); }

}  // namespace wavegp
