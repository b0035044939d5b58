#pragma once

#include <cstdint>
#include <string_view>

namespace flr {

// splitmix64 finalizer; decorrelates derived seeds from structured inputs.
inline std::uint64_t mix_bits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent sub-seed for one stage of a pipeline, so that
/// e.g. changing the split fraction never perturbs partition randomness.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the tag
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix_bits(mix_bits(mix_bits(base ^ h) ^ a) ^ b);
}

}  // namespace flr
