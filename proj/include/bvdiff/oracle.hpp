#pragma once

#include <cstdint>
#include <vector>

#include "bvdiff/cipher.hpp"
#include "bvdiff/differential.hpp"
#include "bvdiff/rational.hpp"

#include "json.hpp"

namespace bvdiff {

// Brute-force ground truth for everything the search algorithms emit. All
// probabilities are exact rationals; the reduced cipher here is always the
// first r-1 rounds keyed by the reduced key.

// #\{x : F_k(x ^ a) ^ F_k(x) matches b on its predicted trits\} / 2^n.
Rational truncated_prob(const CipherSpec& spec, Word key, Word in_diff,
                        const TritPattern& out_pattern);

// Same value aggregated from the difference-distribution row; kept as an
// independent code path to cross-check the direct loop.
Rational truncated_prob_via_ddt(const CipherSpec& spec, Word key, Word in_diff,
                                const TritPattern& out_pattern);

// row[dy] = #\{x : F_k(x ^ in_diff) ^ F_k(x) = dy\}.
std::vector<std::uint64_t> ddt_row(const CipherSpec& spec, Word key,
                                   Word in_diff);

// Full table, input difference by output difference; n <= 12 only.
std::vector<std::vector<std::uint64_t>> ddt(const CipherSpec& spec, Word key);

struct KeyFractionReport {
  Rational threshold;
  Rational min_v, max_v, mean_v;
  Rational fraction_above;
  bool exhaustive = true;
  std::uint64_t keys_checked = 0;
  nlohmann::json to_json() const;
};

// Distribution of V(k) = truncated_prob over the reduced key space:
// exhaustive when 2^m fits the cap, otherwise >= sample_count seeded keys.
KeyFractionReport key_fraction(const CipherSpec& spec, Word in_diff,
                               const TritPattern& out_pattern,
                               const Rational& threshold,
                               int exhaustive_key_cap = 20,
                               std::uint64_t sample_count = 4096,
                               std::uint64_t seed = 1);

// True iff no (x, k) realizes the output difference. Exhaustive when
// n + m fits the cap; otherwise sampled (sampled = true in the report is
// then only evidence, not proof).
struct ImpossibilityReport {
  bool verdict = false;
  bool exhaustive = true;
  std::uint64_t pairs_checked = 0;
  nlohmann::json to_json() const;
};

ImpossibilityReport verify_impossible(const CipherSpec& spec, Word in_diff,
                                      Word out_diff, int joint_cap = 24,
                                      std::uint64_t sample_count = 1 << 16,
                                      std::uint64_t seed = 1);

ImpossibilityReport verify_probability_one(const CipherSpec& spec,
                                           Word in_diff, Word out_diff,
                                           int joint_cap = 24,
                                           std::uint64_t sample_count = 1 << 16,
                                           std::uint64_t seed = 1);

// Max component delta' over both halves of every admissible split.
Rational delta_prime_reduced(const CipherSpec& spec, int arity_cap = 16);

}  // namespace bvdiff
