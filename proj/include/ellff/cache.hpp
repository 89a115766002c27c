#pragma once

// persistent point-count cache: JSON lines {curve_hash, place, count},
// append-only on disk, safe for concurrent readers

#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>

namespace ellff {

class CountCache {
public:
    CountCache() = default;
    // load path if it exists; new entries are appended to it
    explicit CountCache(const std::string& path);
    CountCache(const CountCache& o);
    CountCache& operator=(const CountCache& o);

    std::optional<int64_t> get(const std::string& curve_hash, const std::string& place) const;
    void put(const std::string& curve_hash, const std::string& place, int64_t count);

    // returns the number of lines read; malformed lines are skipped and
    // counted in skipped()
    size_t load(const std::string& path);
    // full rewrite, sorted
    void save(const std::string& path) const;
    static CountCache merge(const CountCache& a, const CountCache& b);

    size_t size() const;
    int skipped() const { return skipped_; }
    std::map<std::pair<std::string, std::string>, int64_t> entries() const;
    bool operator==(const CountCache& o) const { return entries() == o.entries(); }

private:
    mutable std::shared_mutex mu_;
    std::map<std::pair<std::string, std::string>, int64_t> m_;
    std::string path_;
    int skipped_ = 0;
};

}  // namespace ellff
