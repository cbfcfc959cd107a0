#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace hopnet {

// Deterministic generator. Bounded draws do not go through
// std::uniform_int_distribution so streams match across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);

  // Uniform in [0, 1) with 53 random bits.
  double uniform01();

  double normal();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Stable seed for one unit of work, keyed by a label and integer keys.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::initializer_list<std::uint64_t> keys);

}  // namespace hopnet
