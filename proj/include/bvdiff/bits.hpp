#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace bvdiff {

// An ℓ-bit vector over F2 packed into a 64-bit word. Bit 0 of the word is
// the first coordinate x_1; coordinate j lives at word bit j-1. All widths
// in this project are <= 32.
using Word = std::uint64_t;

inline int parity(Word x) { return std::popcount(x) & 1; }

// GF(2) inner product x.y.
inline int dot(Word x, Word y) { return parity(x & y); }

inline Word low_mask(int bits) {
  return bits >= 64 ? ~Word{0} : ((Word{1} << bits) - 1);
}

inline int bit_of(Word x, int i) { return static_cast<int>((x >> i) & 1); }

// splitmix64; used to derive independent sub-seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hex string of an n-bit word, least significant nibble last ("0x3a" style
// without the prefix), width padded to ceil(bits/4) digits.
std::string word_to_hex(Word x, int bits);
Word word_from_hex(const std::string& hex, int bits);

}  // namespace bvdiff
