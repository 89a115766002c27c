#include "ellff/cache.hpp"

#include <fstream>
#include <iostream>
#include <mutex>

#include "ellff/errors.hpp"
#include "json.hpp"

namespace ellff {

CountCache::CountCache(const std::string& path) : path_(path)
{
    load(path);
}

CountCache::CountCache(const CountCache& o)
{
    std::shared_lock lk(o.mu_);
    m_ = o.m_;
    path_ = o.path_;
    skipped_ = o.skipped_;
}

CountCache& CountCache::operator=(const CountCache& o)
{
    if (this == &o) return *this;
    auto e = o.entries();
    std::unique_lock lk(mu_);
    m_ = std::move(e);
    path_ = o.path_;
    skipped_ = o.skipped_;
    return *this;
}

std::optional<int64_t> CountCache::get(const std::string& h, const std::string& place) const
{
    std::shared_lock lk(mu_);
    auto it = m_.find({h, place});
    if (it == m_.end()) return std::nullopt;
    return it->second;
}

void CountCache::put(const std::string& h, const std::string& place, int64_t count)
{
    std::unique_lock lk(mu_);
    auto [it, fresh] = m_.emplace(std::make_pair(h, place), count);
    if (!fresh) {
        if (it->second != count)
            throw VerificationError("cache conflict for " + h + " at " + place + ": " +
                                    std::to_string(it->second) + " vs " + std::to_string(count));
        return;
    }
    if (!path_.empty()) {
        std::ofstream out(path_, std::ios::app);
        if (!out) throw Error("cannot append to cache file " + path_);
        nlohmann::json j = {{"curve_hash", h}, {"place", place}, {"count", count}};
        out << j.dump() << "\n";
    }
}

size_t CountCache::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) return 0;
    std::string line;
    size_t n = 0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            std::string h = j.at("curve_hash").get<std::string>();
            std::string p = j.at("place").get<std::string>();
            int64_t c = j.at("count").get<int64_t>();
            std::unique_lock lk(mu_);
            m_[{h, p}] = c;
            ++n;
        } catch (const std::exception&) {
            ++skipped_;
            std::cerr << "warning: skipping malformed cache line " << lineno << " in " << path << "\n";
        }
    }
    return n;
}

void CountCache::save(const std::string& path) const
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write cache file " + path);
    for (auto& [k, v] : entries()) {
        nlohmann::json j = {{"curve_hash", k.first}, {"place", k.second}, {"count", v}};
        out << j.dump() << "\n";
    }
}

CountCache CountCache::merge(const CountCache& a, const CountCache& b)
{
    CountCache r;
    for (auto& [k, v] : a.entries()) r.m_[k] = v;
    for (auto& [k, v] : b.entries()) {
        auto it = r.m_.find(k);
        if (it != r.m_.end() && it->second != v)
            throw VerificationError("cache merge conflict for " + k.first + " at " + k.second);
        r.m_[k] = v;
    }
    return r;
}

size_t CountCache::size() const
{
    std::shared_lock lk(mu_);
    return m_.size();
}

std::map<std::pair<std::string, std::string>, int64_t> CountCache::entries() const
{
    std::shared_lock lk(mu_);
    return m_;
}

}  // namespace ellff
