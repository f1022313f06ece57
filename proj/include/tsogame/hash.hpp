#ifndef TSOGAME_HASH_HPP
#define TSOGAME_HASH_HPP

#include <cstddef>
#include <cstdint>

namespace tsogame::detail {

inline void hash_combine(std::size_t& seed, std::size_t v) noexcept {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

template <class Range>
void hash_range(std::size_t& seed, const Range& r) noexcept {
  hash_combine(seed, r.size());
  for (const auto& v : r) hash_combine(seed, static_cast<std::size_t>(v));
}

}  // namespace tsogame::detail

#endif  // TSOGAME_HASH_HPP
