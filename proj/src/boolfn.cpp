#include "bvdiff/boolfn.hpp"

#include <algorithm>
#include <stdexcept>

#include "bvdiff/gf2.hpp"

namespace bvdiff {

namespace {

std::size_t word_count(int arity) {
  std::uint64_t n = std::uint64_t{1} << arity;
  return static_cast<std::size_t>((n + 63) / 64);
}

// Bit j of the result is bit (j ^ a6) of w; realizes x -> x ^ a on the low
// six index bits of a packed table word.
Word xor_permute_word(Word w, unsigned a6) {
  if (a6 & 1) w = ((w & 0x5555555555555555ULL) << 1) | ((w >> 1) & 0x5555555555555555ULL);
  if (a6 & 2) w = ((w & 0x3333333333333333ULL) << 2) | ((w >> 2) & 0x3333333333333333ULL);
  if (a6 & 4) w = ((w & 0x0f0f0f0f0f0f0f0fULL) << 4) | ((w >> 4) & 0x0f0f0f0f0f0f0f0fULL);
  if (a6 & 8) w = ((w & 0x00ff00ff00ff00ffULL) << 8) | ((w >> 8) & 0x00ff00ff00ff00ffULL);
  if (a6 & 16) w = ((w & 0x0000ffff0000ffffULL) << 16) | ((w >> 16) & 0x0000ffff0000ffffULL);
  if (a6 & 32) w = (w << 32) | (w >> 32);
  return w;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument("bad hex digit in truth table");
}

}  // namespace

std::string word_to_hex(Word x, int bits) {
  int digits = (bits + 3) / 4;
  std::string out(static_cast<std::size_t>(digits), '0');
  for (int i = digits - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(digits - 1 - i)] =
        "0123456789abcdef"[(x >> (4 * i)) & 0xf];
  }
  return out;
}

Word word_from_hex(const std::string& hex, int bits) {
  Word x = 0;
  for (char c : hex) {
    std::size_t shift = 4;
    x = (x << shift) | static_cast<Word>(hex_digit(c));
  }
  if (bits < 64 && x >= (Word{1} << bits))
    throw std::out_of_range("hex value exceeds stated width");
  return x;
}

BooleanFunction::BooleanFunction(int arity, std::vector<Word> packed_table)
    : arity_(arity), words_(std::move(packed_table)) {
  if (arity < 1 || arity > 32)
    throw std::invalid_argument("arity must be in [1, 32]");
  if (words_.size() != word_count(arity))
    throw std::invalid_argument("packed table has wrong length");
  // Padding bits above 2^l in the last word must be clear.
  if (arity_ < 6) words_[0] &= low_mask(1 << arity_);
}

BooleanFunction BooleanFunction::from_bits(int arity,
                                           const std::vector<int>& bits) {
  if (arity < 1 || arity > 32)
    throw std::invalid_argument("arity must be in [1, 32]");
  if (bits.size() != (std::uint64_t{1} << arity))
    throw std::invalid_argument("table length is not 2^arity");
  std::vector<Word> words(word_count(arity), 0);
  for (std::size_t x = 0; x < bits.size(); ++x)
    if (bits[x]) words[x >> 6] |= Word{1} << (x & 63);
  return BooleanFunction(arity, std::move(words));
}

BooleanFunction BooleanFunction::from_evaluator(
    int arity, const std::function<int(Word)>& f) {
  if (arity < 1 || arity > 32)
    throw std::invalid_argument("arity must be in [1, 32]");
  std::uint64_t n = std::uint64_t{1} << arity;
  std::vector<Word> words(word_count(arity), 0);
  for (std::uint64_t x = 0; x < n; ++x)
    if (f(x) & 1) words[x >> 6] |= Word{1} << (x & 63);
  return BooleanFunction(arity, std::move(words));
}

BooleanFunction BooleanFunction::from_hex(int arity, const std::string& hex) {
  std::uint64_t n = std::uint64_t{1} << arity;
  std::uint64_t bytes = (n + 7) / 8;
  if (hex.size() != 2 * bytes)
    throw std::invalid_argument("truth table hex has wrong length");
  std::vector<Word> words(word_count(arity), 0);
  for (std::uint64_t b = 0; b < bytes; ++b) {
    int hi = hex_digit(hex[2 * b]);
    int lo = hex_digit(hex[2 * b + 1]);
    Word byte = static_cast<Word>(hi << 4 | lo);
    words[b >> 3] |= byte << (8 * (b & 7));
  }
  return BooleanFunction(arity, std::move(words));
}

BooleanFunction BooleanFunction::from_json(const nlohmann::json& j) {
  return from_hex(j.at("arity").get<int>(),
                  j.at("table_hex").get<std::string>());
}

int BooleanFunction::eval(Word x) const {
  if (x >= domain_size()) throw std::out_of_range("input exceeds 2^arity");
  return static_cast<int>((words_[x >> 6] >> (x & 63)) & 1);
}

std::string BooleanFunction::to_hex() const {
  std::uint64_t n = domain_size();
  std::uint64_t bytes = (n + 7) / 8;
  std::string out;
  out.reserve(2 * bytes);
  for (std::uint64_t b = 0; b < bytes; ++b) {
    Word byte = (words_[b >> 3] >> (8 * (b & 7))) & 0xff;
    out.push_back("0123456789abcdef"[byte >> 4]);
    out.push_back("0123456789abcdef"[byte & 0xf]);
  }
  return out;
}

nlohmann::json BooleanFunction::to_json() const {
  return nlohmann::json{{"arity", arity_}, {"table_hex", to_hex()}};
}

bool WalshSpectrum::parseval_ok() const {
  unsigned __int128 sum = 0;
  for (std::int32_t v : raw) {
    __int128 s = static_cast<__int128>(v) * v;
    sum += static_cast<unsigned __int128>(s);
  }
  return sum == (static_cast<unsigned __int128>(1) << (2 * arity));
}

std::vector<Word> WalshSpectrum::support() const {
  std::vector<Word> out;
  for (std::size_t w = 0; w < raw.size(); ++w)
    if (raw[w] != 0) out.push_back(static_cast<Word>(w));
  return out;
}

WalshSpectrum walsh_spectrum(const BooleanFunction& f) {
  const std::uint64_t n = f.domain_size();
  WalshSpectrum s;
  s.arity = f.arity();
  s.raw.resize(n);
  const auto& words = f.words();
  for (std::uint64_t x = 0; x < n; ++x) {
    int bit = static_cast<int>((words[x >> 6] >> (x & 63)) & 1);
    s.raw[x] = 1 - 2 * bit;
  }
  // In-place fast Walsh-Hadamard transform, unnormalized.
  for (std::uint64_t len = 1; len < n; len <<= 1) {
    for (std::uint64_t i = 0; i < n; i += len << 1) {
      for (std::uint64_t j = i; j < i + len; ++j) {
        std::int32_t a = s.raw[j];
        std::int32_t b = s.raw[j + len];
        s.raw[j] = a + b;
        s.raw[j + len] = a - b;
      }
    }
  }
  return s;
}

bool LinearStructureSets::contains(Word a, int i) const {
  const auto& v = i == 0 ? u0 : u1;
  return std::binary_search(v.begin(), v.end(), a);
}

namespace {

// Derivative direction scan shared by the structure/histogram/delta' ops.
// Calls visit(a, count1) for every a with count1 = #\{x : f(x^a)+f(x)=1\}.
template <typename Visit>
void scan_derivatives(const BooleanFunction& f, const Visit& visit) {
  const int l = f.arity();
  const std::uint64_t n = std::uint64_t{1} << l;
  const auto& words = f.words();
  const std::size_t nwords = words.size();
  const Word last_mask = (l >= 6) ? ~Word{0} : low_mask(1 << l);
  for (Word a = 0; a < n; ++a) {
    const std::size_t hi = static_cast<std::size_t>(a >> 6);
    const unsigned lo = static_cast<unsigned>(a & 63);
    std::uint64_t ones = 0;
    for (std::size_t w = 0; w < nwords; ++w) {
      Word partner = xor_permute_word(words[w ^ hi], lo);
      Word d = (partner ^ words[w]) & last_mask;
      ones += static_cast<std::uint64_t>(std::popcount(d));
    }
    visit(a, ones);
  }
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> derivative_histogram(
    const BooleanFunction& f, Word a) {
  if (a >= f.domain_size()) throw std::out_of_range("direction exceeds 2^arity");
  const std::uint64_t n = f.domain_size();
  const auto& words = f.words();
  const std::size_t hi = static_cast<std::size_t>(a >> 6);
  const unsigned lo = static_cast<unsigned>(a & 63);
  const Word last_mask = (f.arity() >= 6) ? ~Word{0} : low_mask(1 << f.arity());
  std::uint64_t ones = 0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    Word partner = xor_permute_word(words[w ^ hi], lo);
    ones += static_cast<std::uint64_t>(std::popcount((partner ^ words[w]) & last_mask));
  }
  return {n - ones, ones};
}

LinearStructureSets linear_structures_exact(const BooleanFunction& f,
                                            int arity_cap) {
  if (f.arity() > arity_cap)
    throw std::invalid_argument("arity exceeds brute-force cap");
  const std::uint64_t n = f.domain_size();
  LinearStructureSets out;
  scan_derivatives(f, [&](Word a, std::uint64_t ones) {
    if (ones == 0)
      out.u0.push_back(a);
    else if (ones == n)
      out.u1.push_back(a);
  });
  return out;
}

LinearStructureSets linear_structures_via_support(const BooleanFunction& f) {
  WalshSpectrum s = walsh_spectrum(f);
  std::vector<Word> supp = s.support();
  LinearStructureSets out;
  for (int i = 0; i < 2; ++i) {
    LinearSystemGF2 sys;
    sys.width = f.arity();
    for (Word w : supp) sys.rows.push_back({w, i});
    AffineSolutionSet sol = solve(sys);
    auto members = enumerate_members(sol, std::uint64_t{1} << f.arity());
    (i == 0 ? out.u0 : out.u1) = std::move(members);
  }
  return out;
}

Rational delta_prime(const BooleanFunction& f, int arity_cap) {
  if (f.arity() > arity_cap)
    throw std::invalid_argument("arity exceeds brute-force cap");
  const std::uint64_t n = f.domain_size();
  std::uint64_t best = 0;
  scan_derivatives(f, [&](Word a, std::uint64_t ones) {
    if (ones == 0 || ones == n) return;  // a is a linear structure
    std::uint64_t big = std::max(ones, n - ones);
    best = std::max(best, big);
  });
  return Rational(static_cast<std::int64_t>(best),
                  static_cast<std::int64_t>(n));
}

Word VectorBooleanFunction::eval(Word x) const {
  Word y = 0;
  for (int j = 0; j < out_width; ++j)
    y |= static_cast<Word>(components[static_cast<std::size_t>(j)].eval(x)) << j;
  return y;
}

}  // namespace bvdiff
