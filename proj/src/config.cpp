#include "otoclab/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <numbers>
#include <sstream>

namespace otoclab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    }
    return true;
}

double strict_double(const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) throw DomainError("not a number: '" + s + "'");
    return v;
}

}  // namespace

double parse_real(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw DomainError("empty number");
    double sign = 1.0;
    if (s[0] == '-') {
        sign = -1.0;
        s = trim(s.substr(1));
    }
    const auto pi_pos = s.find("pi");
    if (pi_pos == std::string::npos) return sign * strict_double(s);
    double factor = 1.0;
    double divisor = 1.0;
    const std::string head = trim(s.substr(0, pi_pos));
    std::string tail = trim(s.substr(pi_pos + 2));
    if (!head.empty()) {
        if (head.back() != '*') throw DomainError("malformed pi multiple: '" + text + "'");
        factor = strict_double(trim(head.substr(0, head.size() - 1)));
    }
    if (!tail.empty()) {
        if (tail[0] != '/') throw DomainError("malformed pi multiple: '" + text + "'");
        divisor = strict_double(trim(tail.substr(1)));
        if (divisor == 0.0) throw DomainError("division by zero in '" + text + "'");
    }
    return sign * factor * std::numbers::pi / divisor;
}

Config Config::parse(const std::string& text, const std::string& source) {
    Config c;
    c.source_ = source;
    std::stringstream ss(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const int col = static_cast<int>(line.find_first_not_of(" \t")) + 1;
        if (t.front() == '[') {
            if (t.back() != ']') throw ParseError(source, line_no, col, "unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (!valid_key(section)) throw ParseError(source, line_no, col + 1, "invalid section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(source, line_no, col, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (!valid_key(key)) throw ParseError(source, line_no, col, "invalid key '" + key + "'");
        const std::string full = section.empty() ? key : section + "." + key;
        if (c.values_.count(full)) {
            throw ParseError(source, line_no, col, "duplicate key '" + full + "'");
        }
        c.values_[full] = trim(line.substr(eq + 1));
        c.lines_[full] = line_no;
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

void Config::bad_value(const std::string& key, const std::string& expected) const {
    auto it = lines_.find(key);
    const std::string where = it == lines_.end() ? source_ : source_ + ":" + std::to_string(it->second);
    throw DomainError(where + ": key '" + key + "' expects " + expected + ", got '" + values_.at(key) + "'");
}

std::string Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw DomainError(source_ + ": missing required key '" + key + "'");
    return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    try {
        return parse_real(values_.at(key));
    } catch (const DomainError&) {
        bad_value(key, "a real number");
    }
}

long long Config::get_int(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = values_.at(key);
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) bad_value(key, "an integer");
    return v;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = values_.at(key);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) bad_value(key, "a non-negative integer");
    return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = values_.at(key);
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    bad_value(key, "true or false");
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    try {
        for (const auto& item : split_list(values_.at(key))) out.push_back(parse_real(item));
    } catch (const DomainError&) {
        bad_value(key, "a comma-separated list of reals");
    }
    if (out.empty()) bad_value(key, "a non-empty list");
    return out;
}

std::vector<long long> Config::get_ints(const std::string& key, const std::vector<long long>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<long long> out;
    for (const auto& item : split_list(values_.at(key))) {
        long long v = 0;
        auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || p != item.data() + item.size()) bad_value(key, "a comma-separated list of integers");
        out.push_back(v);
    }
    if (out.empty()) bad_value(key, "a non-empty list");
    return out;
}

}  // namespace otoclab
