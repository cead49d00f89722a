#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bvdiff/bits.hpp"
#include "bvdiff/rational.hpp"

#include "json.hpp"

namespace bvdiff {

// Truth-table Boolean function f: F2^l -> F2.
//
// Conventions used everywhere in this project:
//   * the table index x is the little-endian encoding of (x_1,...,x_l):
//     coordinate x_j is word bit j-1;
//   * the table is bit-packed, 64 entries per word, entry x at
//     words()[x >> 6] bit (x & 63);
//   * hex import/export serializes the 2^l table bits byte by byte,
//     little-endian bit order within each byte, two lowercase hex digits
//     per byte (for l < 3 the single byte is zero-padded at the top).
class BooleanFunction {
 public:
  BooleanFunction(int arity, std::vector<Word> packed_table);

  static BooleanFunction from_bits(int arity, const std::vector<int>& bits);
  static BooleanFunction from_evaluator(int arity,
                                        const std::function<int(Word)>& f);
  static BooleanFunction from_hex(int arity, const std::string& hex);
  static BooleanFunction from_json(const nlohmann::json& j);

  int arity() const { return arity_; }
  std::uint64_t domain_size() const { return std::uint64_t{1} << arity_; }
  const std::vector<Word>& words() const { return words_; }

  // f(x); throws std::out_of_range for x >= 2^l.
  int eval(Word x) const;

  std::string to_hex() const;
  nlohmann::json to_json() const;

  bool operator==(const BooleanFunction& o) const {
    return arity_ == o.arity_ && words_ == o.words_;
  }

 private:
  int arity_;
  std::vector<Word> words_;
};

// Walsh spectrum with exact integer entries raw[w] = 2^l * S_f(w).
struct WalshSpectrum {
  int arity = 0;
  std::vector<std::int32_t> raw;

  // Sum of raw[w]^2 must be 4^l.
  bool parseval_ok() const;
  std::vector<Word> support() const;
};

WalshSpectrum walsh_spectrum(const BooleanFunction& f);

// U_f split by the derivative constant: a in u0 iff f(x^a)+f(x) == 0 for
// all x, a in u1 iff the derivative is constantly 1. Members sorted.
struct LinearStructureSets {
  std::vector<Word> u0;
  std::vector<Word> u1;

  bool has_nonzero() const {
    return !u1.empty() || u0.size() > 1;
  }
  bool contains(Word a, int i) const;
};

// Exhaustive scan over all (a, x); throws when 2*arity exceeds the cap.
LinearStructureSets linear_structures_exact(const BooleanFunction& f,
                                            int arity_cap = 16);

// Same sets obtained from the Walsh support: a is a structure with
// constant i iff w.a = i for every w with raw[w] != 0.
LinearStructureSets linear_structures_via_support(const BooleanFunction& f);

// (#x with derivative 0, #x with derivative 1) for the direction a.
std::pair<std::uint64_t, std::uint64_t> derivative_histogram(
    const BooleanFunction& f, Word a);

// Max over non-structure directions a and constants i of the fraction of
// inputs whose derivative equals i. A function whose every direction is a
// structure gets 0 (max over an empty set).
Rational delta_prime(const BooleanFunction& f, int arity_cap = 16);

// F: F2^l -> F2^n as n component truth tables over a shared domain.
struct VectorBooleanFunction {
  int arity = 0;
  int out_width = 0;
  std::vector<BooleanFunction> components;

  Word eval(Word x) const;
};

}  // namespace bvdiff
