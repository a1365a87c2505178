#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "otoclab/errors.hpp"

namespace otoclab {

// key = value lines; '#' or ';' starts a comment. A "[name]" header
// prefixes the following keys with "name.". Values are trimmed strings.
// Numbers accept "pi" multiples: "pi/8", "3*pi/16", "-pi".
class Config {
public:
    static Config parse(const std::string& text, const std::string& source = "<config>");
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    // Comma-separated lists.
    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<long long> get_ints(const std::string& key, const std::vector<long long>& fallback) const;

    const std::map<std::string, std::string>& values() const { return values_; }
    const std::string& source() const { return source_; }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;
    std::string source_;

    [[noreturn]] void bad_value(const std::string& key, const std::string& expected) const;
};

// Parses a real number, allowing "pi" multiples. Throws DomainError.
double parse_real(const std::string& text);

}  // namespace otoclab
