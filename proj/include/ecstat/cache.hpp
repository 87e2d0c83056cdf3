#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "ecstat/ff_curves.hpp"

namespace ecstat {

// Disk-backed census store: census_p<prime>.jsonl under cache_dir, written
// atomically (tmp file + rename), re-validated on load. An empty cache_dir
// keeps everything in memory.
class CensusProvider {
  public:
    explicit CensusProvider(std::string cache_dir = "", int64_t ceiling = kCensusPrimeCeiling);

    const CurveCensus& get(int64_t p);
    // Returns true when the census was freshly built (false: valid cache hit).
    bool ensure(int64_t p);

    const std::string& cache_dir() const { return dir_; }

  private:
    std::string dir_;
    int64_t ceiling_;
    std::map<int64_t, std::shared_ptr<const CurveCensus>> mem_;
};

void atomic_write_file(const std::string& path, const std::string& contents);

} // namespace ecstat
