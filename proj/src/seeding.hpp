#pragma once

#include <cstdint>
#include <string_view>

namespace votkit {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Stable seed for one (tracker, sequence, repetition) job; independent of scheduling.
constexpr std::uint64_t job_seed(std::uint64_t master, std::string_view tracker, std::string_view sequence,
                                 std::uint64_t rep) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ fnv1a64(tracker));
  h = splitmix64(h ^ fnv1a64(sequence));
  return splitmix64(h ^ rep);
}

constexpr std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ull));
}

}  // namespace votkit
