#include "bvdiff/rational.hpp"

#include <cstdint>

namespace bvdiff {

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::int64_t n = std::stoll(text.substr(0, slash));
    std::int64_t d = std::stoll(text.substr(slash + 1));
    return Rational(n, d);
  }
  auto point = text.find('.');
  if (point == std::string::npos) return Rational(std::stoll(text));
  std::string digits = text.substr(0, point) + text.substr(point + 1);
  std::size_t frac_len = text.size() - point - 1;
  if (frac_len > 15) throw std::invalid_argument("decimal literal too long");
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  return Rational(std::stoll(digits), den);
}

}  // namespace bvdiff
