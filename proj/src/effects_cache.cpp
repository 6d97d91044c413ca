#include <bit>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "mixlink/distributions.hpp"

namespace mixlink::distributions {

namespace {

// Cleared wholesale when full; entries are cheap to rebuild.
constexpr std::size_t kMaxEntries = 1 << 16;

struct Key {
  std::vector<std::uint64_t> bits;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint64_t b : k.bits) {
      h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

class EffectsCache {
 public:
  std::shared_ptr<const RandomEffects> get(double theta, std::span<const double> pi, double kappa) {
    Key key;
    key.bits.reserve(pi.size() + 2);
    key.bits.push_back(std::bit_cast<std::uint64_t>(theta));
    key.bits.push_back(std::bit_cast<std::uint64_t>(kappa));
    for (double p : pi) key.bits.push_back(std::bit_cast<std::uint64_t>(p));
    {
      std::shared_lock lock(mutex_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    auto value = std::make_shared<const RandomEffects>(binomial_effects(theta, pi, kappa));
    std::unique_lock lock(mutex_);
    if (map_.size() >= kMaxEntries) map_.clear();
    map_.emplace(std::move(key), value);
    return value;
  }

  void clear() {
    std::unique_lock lock(mutex_);
    map_.clear();
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, std::shared_ptr<const RandomEffects>, KeyHash> map_;
};

EffectsCache& cache() {
  static EffectsCache instance;
  return instance;
}

}  // namespace

std::shared_ptr<const RandomEffects> cached_binomial_effects(double theta,
                                                             std::span<const double> pi,
                                                             double kappa) {
  return cache().get(theta, pi, kappa);
}

void clear_effects_cache() { cache().clear(); }
std::size_t effects_cache_size() { return cache().size(); }

}  // namespace mixlink::distributions
