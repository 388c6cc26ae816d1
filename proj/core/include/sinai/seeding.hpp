#pragma once

#include <cstdint>
#include <string_view>

namespace sinai {

/// SplitMix64 finalizer. Bijective on 64-bit words.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over the bytes of `label`.
[[nodiscard]] constexpr std::uint64_t label_hash(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Hierarchical seed derivation:
///   child = splitmix64(parent ^ splitmix64(label_hash(label) + index))
/// A replication's streams are derive_seed(derive_seed(master, "replication", r), "walk")
/// and likewise "environment", so any replication can be re-run on its own.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t parent, std::string_view label,
                                                  std::uint64_t index = 0) noexcept {
  return splitmix64(parent ^ splitmix64(label_hash(label) + index));
}

/// Uniform double in [0, 1) from the top 53 bits of a word.
[[nodiscard]] constexpr double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Integer threshold t with P[u64 < t] = p for a uniform 64-bit word (p in [0, 1)).
[[nodiscard]] std::uint64_t probability_threshold(double p) noexcept;

}  // namespace sinai
