#include "ecstat/cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ecstat/errors.hpp"

namespace fs = std::filesystem;

namespace ecstat {

void atomic_write_file(const std::string& path, const std::string& contents) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw bad_input_error("cannot write " + tmp);
        out << contents;
    }
    fs::rename(tmp, path);
}

CensusProvider::CensusProvider(std::string cache_dir, int64_t ceiling)
    : dir_(std::move(cache_dir)), ceiling_(ceiling) {
    if (!dir_.empty()) fs::create_directories(dir_);
}

bool CensusProvider::ensure(int64_t p) {
    if (mem_.count(p)) return false;
    if (!dir_.empty()) {
        fs::path file = fs::path(dir_) / census_file_name(p);
        if (fs::exists(file)) {
            try {
                mem_[p] = std::make_shared<CurveCensus>(load_census(file.string()));
                return false;
            } catch (const std::exception&) {
                // stale or corrupt cache: rebuild below
            }
        }
    }
    auto census = std::make_shared<CurveCensus>(build_census(PrimeField(p), ceiling_));
    if (!dir_.empty()) {
        fs::path file = fs::path(dir_) / census_file_name(p);
        std::string tmp = file.string() + ".tmp";
        save_census(*census, tmp);
        fs::rename(tmp, file);
    }
    mem_[p] = census;
    return true;
}

const CurveCensus& CensusProvider::get(int64_t p) {
    ensure(p);
    return *mem_.at(p);
}

} // namespace ecstat
