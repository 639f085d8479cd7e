#pragma once

#include <cstdint>
#include <random>

namespace edenca {

// Seeded deterministic generator. mt19937_64 output is specified by the
// standard, and we avoid std::uniform_int_distribution (whose mapping is
// implementation-defined) so frozen test values are portable.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  std::uint64_t uniform(std::uint64_t n) { return n ? eng_() % n : 0; }

private:
  std::mt19937_64 eng_;
};

} // namespace edenca
