#include "bvdiff/oracle.hpp"

#include <random>
#include <stdexcept>

namespace bvdiff {

namespace {

Word reduced_encrypt(const CipherSpec& spec, Word x, Word key) {
  return encrypt_reduced(spec, spec.rounds() - 1, x, key);
}

}  // namespace

Rational truncated_prob(const CipherSpec& spec, Word key, Word in_diff,
                        const TritPattern& out_pattern) {
  if (out_pattern.width != spec.block_bits)
    throw std::invalid_argument("pattern width differs from the block size");
  const std::uint64_t n = std::uint64_t{1} << spec.block_bits;
  std::uint64_t hits = 0;
  for (Word x = 0; x < n; ++x) {
    Word d = reduced_encrypt(spec, x ^ in_diff, key) ^
             reduced_encrypt(spec, x, key);
    if (out_pattern.matches(d)) ++hits;
  }
  return Rational(static_cast<std::int64_t>(hits),
                  static_cast<std::int64_t>(n));
}

std::vector<std::uint64_t> ddt_row(const CipherSpec& spec, Word key,
                                   Word in_diff) {
  const std::uint64_t n = std::uint64_t{1} << spec.block_bits;
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n), 0);
  for (Word x = 0; x < n; ++x) {
    Word d = reduced_encrypt(spec, x ^ in_diff, key) ^
             reduced_encrypt(spec, x, key);
    ++row[static_cast<std::size_t>(d)];
  }
  return row;
}

Rational truncated_prob_via_ddt(const CipherSpec& spec, Word key, Word in_diff,
                                const TritPattern& out_pattern) {
  if (out_pattern.width != spec.block_bits)
    throw std::invalid_argument("pattern width differs from the block size");
  auto row = ddt_row(spec, key, in_diff);
  std::uint64_t hits = 0;
  for (std::size_t dy = 0; dy < row.size(); ++dy)
    if (out_pattern.matches(static_cast<Word>(dy))) hits += row[dy];
  return Rational(static_cast<std::int64_t>(hits),
                  static_cast<std::int64_t>(row.size()));
}

std::vector<std::vector<std::uint64_t>> ddt(const CipherSpec& spec, Word key) {
  if (spec.block_bits > 12)
    throw std::invalid_argument("full table is limited to n <= 12");
  const std::uint64_t n = std::uint64_t{1} << spec.block_bits;
  std::vector<std::vector<std::uint64_t>> table;
  table.reserve(static_cast<std::size_t>(n));
  for (Word dx = 0; dx < n; ++dx) table.push_back(ddt_row(spec, key, dx));
  return table;
}

nlohmann::json KeyFractionReport::to_json() const {
  return nlohmann::json{{"threshold", threshold.to_string()},
                        {"min_v", min_v.to_string()},
                        {"max_v", max_v.to_string()},
                        {"mean_v", mean_v.to_string()},
                        {"fraction_above", fraction_above.to_string()},
                        {"exhaustive", exhaustive},
                        {"keys_checked", keys_checked}};
}

KeyFractionReport key_fraction(const CipherSpec& spec, Word in_diff,
                               const TritPattern& out_pattern,
                               const Rational& threshold,
                               int exhaustive_key_cap,
                               std::uint64_t sample_count,
                               std::uint64_t seed) {
  const int m = spec.reduced_key_bits();
  KeyFractionReport rep;
  rep.threshold = threshold;
  rep.exhaustive = m <= exhaustive_key_cap;

  Rational sum(0);
  std::uint64_t above = 0;
  bool first = true;
  auto account = [&](Word key) {
    Rational v = truncated_prob(spec, key, in_diff, out_pattern);
    if (first || v < rep.min_v) rep.min_v = v;
    if (first || v > rep.max_v) rep.max_v = v;
    first = false;
    sum = sum + v;
    if (v > threshold) ++above;
    ++rep.keys_checked;
  };

  if (rep.exhaustive) {
    const std::uint64_t keys = std::uint64_t{1} << m;
    for (Word k = 0; k < keys; ++k) account(k);
  } else {
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = 0; i < sample_count; ++i)
      account(rng() & low_mask(m));
  }
  rep.mean_v = sum / Rational(static_cast<std::int64_t>(rep.keys_checked));
  rep.fraction_above = Rational(static_cast<std::int64_t>(above),
                                static_cast<std::int64_t>(rep.keys_checked));
  return rep;
}

nlohmann::json ImpossibilityReport::to_json() const {
  return nlohmann::json{{"verdict", verdict},
                        {"exhaustive", exhaustive},
                        {"pairs_checked", pairs_checked}};
}

namespace {

// Shared (x, k) sweep: early-exits as soon as stop(diff) fires.
ImpossibilityReport sweep_differences(const CipherSpec& spec, Word in_diff,
                                      int joint_cap,
                                      std::uint64_t sample_count,
                                      std::uint64_t seed,
                                      const std::function<bool(Word)>& stop) {
  const int n = spec.block_bits;
  const int m = spec.reduced_key_bits();
  ImpossibilityReport rep;
  rep.exhaustive = n + m <= joint_cap;
  rep.verdict = true;
  if (rep.exhaustive) {
    const std::uint64_t keys = std::uint64_t{1} << m;
    const std::uint64_t blocks = std::uint64_t{1} << n;
    for (Word k = 0; k < keys && rep.verdict; ++k)
      for (Word x = 0; x < blocks; ++x) {
        Word d = reduced_encrypt(spec, x ^ in_diff, k) ^
                 reduced_encrypt(spec, x, k);
        ++rep.pairs_checked;
        if (stop(d)) {
          rep.verdict = false;
          break;
        }
      }
  } else {
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = 0; i < sample_count && rep.verdict; ++i) {
      Word k = rng() & low_mask(m);
      Word x = rng() & low_mask(n);
      Word d = reduced_encrypt(spec, x ^ in_diff, k) ^
               reduced_encrypt(spec, x, k);
      ++rep.pairs_checked;
      if (stop(d)) rep.verdict = false;
    }
  }
  return rep;
}

}  // namespace

ImpossibilityReport verify_impossible(const CipherSpec& spec, Word in_diff,
                                      Word out_diff, int joint_cap,
                                      std::uint64_t sample_count,
                                      std::uint64_t seed) {
  return sweep_differences(spec, in_diff, joint_cap, sample_count, seed,
                           [out_diff](Word d) { return d == out_diff; });
}

ImpossibilityReport verify_probability_one(const CipherSpec& spec,
                                           Word in_diff, Word out_diff,
                                           int joint_cap,
                                           std::uint64_t sample_count,
                                           std::uint64_t seed) {
  return sweep_differences(spec, in_diff, joint_cap, sample_count, seed,
                           [out_diff](Word d) { return d != out_diff; });
}

Rational delta_prime_reduced(const CipherSpec& spec, int arity_cap) {
  const int r = spec.rounds();
  if (r < 3)
    throw std::invalid_argument("reduced delta' needs at least three rounds");
  Rational best(0);
  for (int v = 1; v <= r - 2; ++v) {
    CipherSplit sp = split(spec, v, arity_cap);
    for (const auto& part : {sp.head, sp.tail}) {
      for (const auto& comp : part.components) {
        Rational d = delta_prime(comp, arity_cap);
        if (d > best) best = d;
      }
    }
  }
  return best;
}

}  // namespace bvdiff
