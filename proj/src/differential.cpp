#include "bvdiff/differential.hpp"

#include <stdexcept>

namespace bvdiff {

TritPattern TritPattern::from_bits(int width, Word bits, Word mask) {
  TritPattern p;
  p.width = width;
  for (int j = 0; j < width; ++j) {
    if ((mask >> j) & 1)
      p.trits.push_back(static_cast<int>((bits >> j) & 1));
    else
      p.trits.push_back(-1);
  }
  return p;
}

TritPattern TritPattern::parse(const std::string& text) {
  TritPattern p;
  p.width = static_cast<int>(text.size());
  for (char c : text) {
    if (c == '0')
      p.trits.push_back(0);
    else if (c == '1')
      p.trits.push_back(1);
    else if (c == 'x' || c == 'X' || c == '*')
      p.trits.push_back(-1);
    else
      throw std::invalid_argument("trit pattern may contain only 0, 1, x");
  }
  return p;
}

Word TritPattern::mask() const {
  Word m = 0;
  for (int j = 0; j < width; ++j)
    if (trits[static_cast<std::size_t>(j)] >= 0) m |= Word{1} << j;
  return m;
}

Word TritPattern::bits() const {
  Word b = 0;
  for (int j = 0; j < width; ++j)
    if (trits[static_cast<std::size_t>(j)] == 1) b |= Word{1} << j;
  return b;
}

int TritPattern::predicted_count() const {
  int t = 0;
  for (int v : trits) t += v >= 0;
  return t;
}

std::string TritPattern::to_string() const {
  std::string s;
  for (int v : trits) s.push_back(v < 0 ? 'x' : static_cast<char>('0' + v));
  return s;
}

}  // namespace bvdiff
