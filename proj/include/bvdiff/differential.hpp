#pragma once

#include <string>
#include <vector>

#include "bvdiff/bits.hpp"

namespace bvdiff {

// Partially specified output difference: trit j is 0, 1 or unpredicted.
// Rendered as a string with the bit for position 1 first, 'x' marking the
// unpredicted positions ("0110xxxx").
struct TritPattern {
  int width = 0;
  std::vector<int> trits;  // entries 0, 1 or -1 (unpredicted)

  static TritPattern all_unpredicted(int width) {
    return TritPattern{width, std::vector<int>(static_cast<std::size_t>(width), -1)};
  }
  static TritPattern from_bits(int width, Word bits, Word mask);
  static TritPattern parse(const std::string& text);

  Word mask() const;        // 1 where predicted
  Word bits() const;        // predicted values, 0 elsewhere
  int predicted_count() const;
  bool matches(Word full_difference) const {
    return (full_difference & mask()) == bits();
  }
  std::string to_string() const;
};

}  // namespace bvdiff
