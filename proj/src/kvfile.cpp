#include "auvmpc/kvfile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace auvmpc {

namespace {

std::string trim(std::string_view s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    auto b = std::find_if(s.begin(), s.end(), not_space);
    auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
    return b < e ? std::string(b, e) : std::string();
}

[[noreturn]] void fail(const KvEntry& e, const std::string& what) {
    throw std::invalid_argument("line " + std::to_string(e.line) + ": " + e.key + ": " + what);
}

}  // namespace

std::vector<KvEntry> parse_kv_text(const std::string& text, const std::string& origin) {
    std::vector<KvEntry> out;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        std::string line = trim(raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        KvEntry e{section, trim(std::string_view(line).substr(0, eq)),
                  trim(std::string_view(line).substr(eq + 1)), lineno};
        if (e.key.empty())
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty key");
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<KvEntry> read_kv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_kv_text(ss.str(), path.string());
}

double parse_double(const KvEntry& e) {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail(e, "expected a number, got '" + e.value + "'");
    return v;
}

int parse_int(const KvEntry& e) {
    int v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail(e, "expected an integer, got '" + e.value + "'");
    return v;
}

bool parse_bool(const KvEntry& e) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    fail(e, "expected true/false, got '" + e.value + "'");
}

}  // namespace auvmpc
