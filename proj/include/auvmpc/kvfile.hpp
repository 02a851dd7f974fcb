#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace auvmpc {

/// One "key = value" line of an INI-like text file.
struct KvEntry {
    std::string section;  // empty before the first [section] header
    std::string key;
    std::string value;
    int line = 0;
};

std::vector<KvEntry> parse_kv_text(const std::string& text, const std::string& origin = "<text>");
std::vector<KvEntry> read_kv_file(const std::filesystem::path& path);

double parse_double(const KvEntry& entry);
int parse_int(const KvEntry& entry);
bool parse_bool(const KvEntry& entry);

}  // namespace auvmpc
