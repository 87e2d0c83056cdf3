#include "ecstat/report.hpp"

#include <sstream>

namespace ecstat {

std::string config_hash(const std::map<std::string, std::string>& config) {
    uint64_t h = 1469598103934665603ull;
    auto feed = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : config) {
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string CsvReport::render(const std::map<std::string, std::string>& config) const {
    std::ostringstream os;
    os << "# ecstat " << kLibraryVersion << " config_hash=" << config_hash(config) << "\n";
    for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    for (const auto& f : footers) os << "# " << f << "\n";
    return os.str();
}

} // namespace ecstat
