#pragma once

// Content-addressed on-disk cache for arrow verdicts. Entries carry a checksum; failing
// verdicts are always re-verified against their witness on read and holding verdicts are
// recomputed on a deterministic sample. Anything that does not check out is evicted.

#include <ramcat/arrows.hpp>
#include <ramcat/digest.hpp>
#include <ramcat/json_io.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

namespace ramcat {

inline constexpr int cache_format_version = 1;
inline constexpr const char* cache_dir_env = "RAMCAT_CACHE_DIR";

struct CacheStats {
    std::size_t hits = 0;
    std::size_t misses = 0;
    std::size_t writes = 0;
    std::size_t evictions = 0;
    std::size_t replays = 0;
};

class ResultCache {
public:
    /// recheck_rate: fraction of holding verdicts recomputed on read, in [0, 1].
    explicit ResultCache(std::filesystem::path dir, double recheck_rate = 0.05, std::ostream* warnings = &std::cerr) :
        dir_(std::move(dir)), recheck_rate_(recheck_rate), warn_(warnings)
    {
        std::filesystem::create_directories(dir_);
    }

    /// A cache rooted at $RAMCAT_CACHE_DIR, if set and non-empty.
    [[nodiscard]] static auto from_env(double recheck_rate = 0.05) -> std::optional<ResultCache>
    {
        const char* dir = std::getenv(cache_dir_env);
        if (!dir || !*dir)
            return std::nullopt;
        return ResultCache(dir, recheck_rate);
    }

    ResultCache(ResultCache&& other) noexcept :
        dir_(std::move(other.dir_)), recheck_rate_(other.recheck_rate_), warn_(other.warn_), stats_(other.stats_)
    {
    }

    [[nodiscard]] auto directory() const -> const std::filesystem::path& { return dir_; }
    [[nodiscard]] auto recheck_rate() const -> double { return recheck_rate_; }

    [[nodiscard]] auto stats() const -> CacheStats
    {
        std::lock_guard lock(stats_mutex_);
        return stats_;
    }

    /// The stored payload, or nullopt when absent or corrupt (corrupt entries are removed).
    [[nodiscard]] auto get(const std::string& key) -> std::optional<std::string>
    {
        std::string raw;
        {
            std::shared_lock lock(mutex_);
            std::ifstream in(path_for(key), std::ios::binary);
            if (!in) {
                count(&CacheStats::misses);
                return std::nullopt;
            }
            std::ostringstream buf;
            buf << in.rdbuf();
            raw = buf.str();
        }
        auto newline = raw.find('\n');
        std::string header = raw.substr(0, newline);
        std::string payload = newline == std::string::npos ? std::string{} : raw.substr(newline + 1);
        if (header != make_header(payload)) {
            evict(key, "checksum mismatch");
            count(&CacheStats::misses);
            return std::nullopt;
        }
        count(&CacheStats::hits);
        return payload;
    }

    void put(const std::string& key, const std::string& payload)
    {
        std::unique_lock lock(mutex_);
        auto target = path_for(key);
        auto tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << make_header(payload) << '\n' << payload;
            if (!out)
                throw Error("cache: cannot write " + tmp.string());
        }
        std::filesystem::rename(tmp, target);
        count(&CacheStats::writes);
    }

    void evict(const std::string& key, const std::string& why)
    {
        {
            std::unique_lock lock(mutex_);
            std::error_code ec;
            std::filesystem::remove(path_for(key), ec);
        }
        count(&CacheStats::evictions);
        if (warn_)
            *warn_ << "warning: cache entry " << key.substr(0, 16) << " discarded: " << why << '\n';
    }

    [[nodiscard]] auto path_for(const std::string& key) const -> std::filesystem::path { return dir_ / (key + ".json"); }

    /// Deterministic per-key decision whether a holding verdict is recomputed on read.
    [[nodiscard]] auto sampled(const std::string& key) const -> bool
    {
        if (recheck_rate_ <= 0)
            return false;
        if (recheck_rate_ >= 1)
            return true;
        auto bucket = std::stoul(key.substr(0, 4), nullptr, 16);
        return static_cast<double>(bucket) < recheck_rate_ * 65536.0;
    }

    void note_replay() { count(&CacheStats::replays); }

private:
    static auto make_header(const std::string& payload) -> std::string
    {
        return "ramcat-cache " + std::to_string(cache_format_version) + " " + sha256_hex(payload);
    }

    void count(std::size_t CacheStats::*field)
    {
        std::lock_guard lock(stats_mutex_);
        ++(stats_.*field);
    }

    std::filesystem::path dir_;
    double recheck_rate_;
    std::ostream* warn_;
    mutable std::shared_mutex mutex_;
    mutable std::mutex stats_mutex_;
    CacheStats stats_;
};

/// sha256 over (format version, category digest, orientation, query, node budget).
[[nodiscard]] inline auto arrow_cache_key(const std::string& category_digest, Orientation o, const ArrowQuery& q,
    std::uint64_t node_budget) -> std::string
{
    Json j{{"version", cache_format_version}, {"category", category_digest},
        {"orientation", o == Orientation::direct ? "direct" : "reversed"}, {"query", q}, {"node_budget", node_budget}};
    return sha256_hex(j.dump());
}

/// Routes the engine's arrow checks through the cache. The cache must outlive the engine.
inline void attach_cache(ArrowEngine& engine, ResultCache& cache)
{
    auto digest = category_digest(engine.category());
    const FiniteCategory* cat = &engine.category();
    auto o = engine.orientation();
    auto budget = engine.options().node_budget;
    engine.set_memo([&cache, digest, cat, o, budget](const ArrowQuery& q, const std::function<ArrowVerdict()>& compute) {
        auto key = arrow_cache_key(digest, o, q, budget);
        if (auto payload = cache.get(key)) {
            std::optional<ArrowVerdict> cached;
            try {
                cached = Json::parse(*payload).get<ArrowVerdict>();
            }
            catch (const std::exception& e) {
                cache.evict(key, std::string("unreadable payload: ") + e.what());
            }
            if (cached) {
                bool trusted = false;
                if (cached->fails()) {
                    std::string why;
                    trusted = cached->witness && replay_witness(*cat, q, *cached->witness, o, &why);
                    if (!trusted)
                        cache.evict(key, "witness does not replay" + (why.empty() ? std::string{} : ": " + why));
                }
                else if (cached->holds()) {
                    if (cache.sampled(key)) {
                        cache.note_replay();
                        auto fresh = compute();
                        if (fresh.status == cached->status && fresh.nodes == cached->nodes)
                            return fresh;
                        cache.evict(key, "recomputed verdict differs");
                        if (fresh.conclusive())
                            cache.put(key, Json(fresh).dump());
                        return fresh;
                    }
                    trusted = true;
                }
                else
                    cache.evict(key, "inconclusive verdicts are not cached");
                if (trusted)
                    return *cached;
            }
        }
        auto fresh = compute();
        if (fresh.conclusive())
            cache.put(key, Json(fresh).dump());
        return fresh;
    });
}

} // namespace ramcat
