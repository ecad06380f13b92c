#include "cantorsaw/cache.hpp"

#include "cantorsaw/error.hpp"
#include "cantorsaw/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace cantorsaw {

namespace fs = std::filesystem;

std::optional<fs::path> resolve_cache_dir(const std::string& flag)
{
    if (!flag.empty())
        return fs::path(flag);
    if (const char* env = std::getenv(kCacheDirEnv); env != nullptr && *env != '\0')
        return fs::path(env);
    return std::nullopt;
}

std::string cache_file_name(const std::string& graph_key)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : graph_key) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::string slug;
    for (char c : graph_key) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            slug.push_back(c);
        else if (!slug.empty() && slug.back() != '_')
            slug.push_back('_');
        if (slug.size() >= 48)
            break;
    }
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(h));
    return slug + "-" + digest + ".json";
}

DiskTableSource::DiskTableSource(fs::path dir, CountOptions options, std::ostream* log)
    : dir_(std::move(dir)), options_(options), log_(log)
{
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec)
        throw Error(ErrorKind::InvalidArgument, "cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::optional<SawCountTable> DiskTableSource::load(const CayleyGraph& g, int n_max) const
{
    std::ifstream in(dir_ / cache_file_name(g.key()));
    if (!in)
        return std::nullopt;
    try {
        SawCountTable t = table_from_json(Json::parse(in));
        if (t.graph_key != g.key() || t.truncated || t.complete_through() < n_max)
            return std::nullopt;
        verify_basic_invariants(t, g.degree());
        t.counts.resize(static_cast<std::size_t>(n_max) + 1);
        if (t.wall_time.size() > t.counts.size())
            t.wall_time.resize(t.counts.size());
        t.n_max = n_max;
        return t;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void DiskTableSource::store(const SawCountTable& table) const
{
    const fs::path target = dir_ / cache_file_name(table.graph_key);
    std::ostringstream suffix;
    suffix << ".tmp." << std::this_thread::get_id() << "." << std::rand();
    const fs::path temp = target.string() + suffix.str();
    {
        std::ofstream out(temp);
        out << table_to_json(table).dump(1) << '\n';
        if (!out)
            return;
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec)
        fs::remove(temp, ec);
}

SawCountTable DiskTableSource::table(const CayleyGraph& g, int n_max)
{
    const auto key = std::make_pair(g.key(), n_max);
    {
        std::lock_guard lock(mutex_);
        if (auto it = seen_.find(key); it != seen_.end())
            return it->second;
    }
    SawCountTable t;
    if (auto cached = load(g, n_max)) {
        ++hits_;
        t = std::move(*cached);
        if (log_ != nullptr) {
            std::lock_guard lock(mutex_);
            *log_ << "cache hit: " << g.key() << " (n <= " << n_max << ")\n";
        }
    } else {
        ++misses_;
        t = count_saws(g, n_max, options_);
        if (!t.truncated)
            store(t);
    }
    std::lock_guard lock(mutex_);
    return seen_.try_emplace(key, std::move(t)).first->second;
}

} // namespace cantorsaw
