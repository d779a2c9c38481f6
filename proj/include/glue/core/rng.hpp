#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace glue {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (char c : bytes) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// Counter-style generator: the entire state is one u64, so sessions can be
// checkpointed and resumed exactly. Normal draws use Box-Muller with a fixed
// two-uniforms-per-draw discipline (no cached spare).
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : state_(seed) {}

  uint64_t next_u64() { return splitmix64(state_); }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // inclusive bounds
  int64_t uniform_int(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(static_cast<uint64_t>(
                    (static_cast<unsigned __int128>(next_u64()) * span) >> 64));
  }

  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  uint64_t state() const { return state_; }
  void set_state(uint64_t s) { state_ = s; }

 private:
  uint64_t state_;
};

// Purpose-split stream derivation: streams with distinct tags are
// statistically independent and their draw counts never interact.
inline uint64_t derive_seed(uint64_t master, std::string_view tag) {
  uint64_t s = master ^ fnv1a64(tag);
  return splitmix64(s);
}

inline Rng derive_stream(uint64_t master, std::string_view tag) {
  return Rng(derive_seed(master, tag));
}

inline uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t index) {
  uint64_t s = derive_seed(master, tag) ^ (0x9e3779b97f4a7c15ull * (index + 1));
  return splitmix64(s);
}

}  // namespace glue
