#pragma once

/* Bounded keyed caches for computed polynomials.  Long checking runs touch
 * far more distinct instances and placed s-words than fit in memory, and
 * reuse is local, so both caches evict least-recently-used entries; values
 * are handed out as shared_ptr so an evicted entry stays alive while any
 * caller still holds it. */

#include <cstdlib>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "base.hpp"

namespace olie {
namespace detail {

inline size_t cache_capacity(const char* env, size_t dflt) {
    const char* v = std::getenv(env);
    if (!v || !*v) return dflt;
    char* end = nullptr;
    unsigned long long n = std::strtoull(v, &end, 10);
    check(end && *end == '\0' && n > 0,
          std::string("bad ") + env + ": '" + v + "'");
    return size_t(n);
}

/* A stored null is a valid value (e.g. a vanishing instance), distinguished
 * from a miss by the optional. */
template <class K, class V, class Hash = std::hash<K>>
class LruCache {
  public:
    explicit LruCache(size_t cap) : cap_(cap ? cap : 1) {}

    std::optional<std::shared_ptr<const V>> get(const K& k) {
        std::lock_guard<std::mutex> g(mu_);
        auto it = map_.find(k);
        if (it == map_.end()) return std::nullopt;
        lru_.splice(lru_.begin(), lru_, it->second.pos);
        return it->second.val;
    }

    std::shared_ptr<const V> put(const K& k, std::shared_ptr<const V> v) {
        std::lock_guard<std::mutex> g(mu_);
        auto it = map_.find(k);
        if (it != map_.end()) {  // racing writer: keep the first value
            lru_.splice(lru_.begin(), lru_, it->second.pos);
            return it->second.val;
        }
        lru_.push_front(k);
        map_.emplace(k, Entry{std::move(v), lru_.begin()});
        if (map_.size() > cap_) {
            map_.erase(lru_.back());
            lru_.pop_back();
        }
        return map_.find(k)->second.val;
    }

  private:
    struct Entry {
        std::shared_ptr<const V> val;
        typename std::list<K>::iterator pos;
    };
    size_t cap_;
    std::mutex mu_;
    std::list<K> lru_;
    std::unordered_map<K, Entry, Hash> map_;
};

struct IdsHash {
    template <size_t N>
    size_t operator()(const std::array<uint32_t, N>& a) const {
        uint64_t h = 1469598103934665603ull;
        for (uint32_t x : a) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return size_t(h);
    }
};

}  // namespace detail
}  // namespace olie
