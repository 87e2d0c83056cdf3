#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ecstat {

inline constexpr const char* kLibraryVersion = "0.1.0";

// FNV-1a over the canonicalized key=value lines
std::string config_hash(const std::map<std::string, std::string>& config);

// CSV with a comment header carrying config hash + library version;
// deterministic row order is the caller's responsibility.
struct CsvReport {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> footers; // emitted as trailing comment lines

    std::string render(const std::map<std::string, std::string>& config) const;
};

} // namespace ecstat
