#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cohepow {

// Cantor pairing. pair(x,y) = (x+y)(x+y+1)/2 + y, a bijection N^2 -> N.
inline uint64_t pair(uint64_t x, uint64_t y) {
  unsigned __int128 s = static_cast<unsigned __int128>(x) + y;
  unsigned __int128 z = s * (s + 1) / 2 + y;
  if (z > UINT64_MAX) throw std::overflow_error("pair: code exceeds 64 bits");
  return static_cast<uint64_t>(z);
}

// Diagonal index: the unique w with w(w+1)/2 <= z < (w+1)(w+2)/2.
inline uint64_t pair_diagonal(uint64_t z) {
  long double r = std::sqrt(8.0L * static_cast<long double>(z) + 1.0L);
  uint64_t w = static_cast<uint64_t>((r - 1.0L) / 2.0L);
  while (static_cast<unsigned __int128>(w) * (w + 1) / 2 > z) --w;
  while (static_cast<unsigned __int128>(w + 1) * (w + 2) / 2 <= z) ++w;
  return w;
}

inline uint64_t right(uint64_t z) {
  uint64_t w = pair_diagonal(z);
  return z - static_cast<uint64_t>(static_cast<unsigned __int128>(w) * (w + 1) / 2);
}

inline uint64_t left(uint64_t z) {
  uint64_t w = pair_diagonal(z);
  return w - right(z);
}

// Bijective list codec over the pairing: nil = 0, cons(h, t) = 1 + pair(h, t).
inline uint64_t encode_list(const std::vector<uint64_t>& xs) {
  uint64_t z = 0;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) z = 1 + pair(*it, z);
  return z;
}

inline std::vector<uint64_t> decode_list(uint64_t z) {
  std::vector<uint64_t> xs;
  while (z != 0) {
    xs.push_back(left(z - 1));
    z = right(z - 1);
  }
  return xs;
}

}  // namespace cohepow
