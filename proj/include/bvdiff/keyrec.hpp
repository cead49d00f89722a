#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bvdiff/cipher.hpp"
#include "bvdiff/differential.hpp"
#include "bvdiff/rational.hpp"

#include "json.hpp"

namespace bvdiff {

// Signal-to-noise bookkeeping of the last-round counting scheme. With t
// predicted trits, each pair books gamma = |S| / 2^t candidate keys on
// average, and S/N = |S| p / (gamma lambda) with lambda fixed at 1.
struct SNReport {
  std::uint64_t candidate_space = 0;
  Rational probability;
  Rational gamma;
  Rational lambda;
  Rational ratio;
  nlohmann::json to_json() const;
};

SNReport signal_to_noise(std::uint64_t candidate_space, const Rational& p,
                         int predicted_bits);

// Pair-count estimate: about 40/p pairs while S/N stays in (1, 2], about
// 4/p once S/N reaches 10 (the "much higher" regime cutoff used here).
// Throws for S/N <= 1, where counting cannot succeed.
std::uint64_t required_pairs(const Rational& sn, const Rational& p);

struct CountingRun {
  std::uint64_t pairs = 0;
  Word master_key = 0;
  Word right_key = 0;
  std::vector<std::uint64_t> counters;  // per last-round candidate
  std::vector<Word> ranking;            // candidates, highest count first
  std::optional<int> right_key_rank;    // 1-based; empty when pairs == 0
  std::uint64_t right_pair_count = 0;
  nlohmann::json to_json(int key_bits) const;
};

// Chosen-plaintext counting attack: encrypt `pairs` distinct plaintext
// pairs (x, x ^ in_diff) under a seeded master key, decrypt the last round
// under every candidate subkey and count matches against the pattern.
CountingRun run_counting_attack(const CipherSpec& spec, Word in_diff,
                                const TritPattern& out_pattern,
                                std::uint64_t pairs, std::uint64_t seed);

}  // namespace bvdiff
