#pragma once

// On-disk SAW table cache: one JSON file per graph key.

#include "cantorsaw/driver.hpp"

#include <atomic>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace cantorsaw {

inline constexpr const char* kCacheDirEnv = "CANTOR_SAW_CACHE_DIR";

// --cache-dir wins over the environment; empty when neither is set.
std::optional<std::filesystem::path> resolve_cache_dir(const std::string& flag);

// File name for a key: a readable slug plus a 64-bit FNV-1a digest.
std::string cache_file_name(const std::string& graph_key);

class DiskTableSource : public TableSource {
public:
    // `log` receives one line per cache hit; may be null.
    DiskTableSource(std::filesystem::path dir, CountOptions options, std::ostream* log = nullptr);

    // A cached table is used when it covers n_max and passes the c_0..c_2
    // checks; anything else is a miss and is recomputed. Complete tables are
    // written back atomically.
    SawCountTable table(const CayleyGraph& g, int n_max) override;

    std::size_t hits() const noexcept { return hits_; }
    std::size_t misses() const noexcept { return misses_; }

private:
    std::optional<SawCountTable> load(const CayleyGraph& g, int n_max) const;
    void store(const SawCountTable& table) const;

    std::filesystem::path dir_;
    CountOptions options_;
    std::ostream* log_;
    std::mutex mutex_;
    std::map<std::pair<std::string, int>, SawCountTable> seen_;
    std::atomic<std::size_t> hits_{0};
    std::atomic<std::size_t> misses_{0};
};

} // namespace cantorsaw
