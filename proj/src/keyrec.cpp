#include "bvdiff/keyrec.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace bvdiff {

nlohmann::json SNReport::to_json() const {
  return nlohmann::json{{"candidate_space", candidate_space},
                        {"probability", probability.to_string()},
                        {"gamma", gamma.to_string()},
                        {"lambda", lambda.to_string()},
                        {"ratio", ratio.to_string()}};
}

SNReport signal_to_noise(std::uint64_t candidate_space, const Rational& p,
                         int predicted_bits) {
  if (p < Rational(0) || p > Rational(1))
    throw std::domain_error("differential probability must lie in [0, 1]");
  if (predicted_bits < 1)
    throw std::domain_error("need at least one predicted trit");
  SNReport rep;
  rep.candidate_space = candidate_space;
  rep.probability = p;
  rep.gamma = Rational(static_cast<std::int64_t>(candidate_space),
                       std::int64_t{1} << predicted_bits);
  rep.lambda = Rational(1);
  rep.ratio = Rational(static_cast<std::int64_t>(candidate_space)) * p /
              (rep.gamma * rep.lambda);
  return rep;
}

std::uint64_t required_pairs(const Rational& sn, const Rational& p) {
  if (!(sn > Rational(1)))
    throw std::domain_error("counting needs a signal-to-noise ratio above 1");
  if (!(p > Rational(0)))
    throw std::domain_error("differential probability must be positive");
  std::int64_t right_pairs = sn >= Rational(10) ? 4 : 40;
  Rational needed = Rational(right_pairs) / p;
  // Ceiling of the exact rational.
  std::int64_t q = needed.num() / needed.den();
  if (needed.num() % needed.den() != 0) ++q;
  return static_cast<std::uint64_t>(q);
}

nlohmann::json CountingRun::to_json(int key_bits) const {
  nlohmann::json ranks = nlohmann::json::array();
  std::size_t top = std::min<std::size_t>(ranking.size(), 8);
  for (std::size_t i = 0; i < top; ++i) {
    ranks.push_back(nlohmann::json{
        {"key", word_to_hex(ranking[i], key_bits)},
        {"count", counters[static_cast<std::size_t>(ranking[i])]}});
  }
  nlohmann::json j{{"pairs", pairs},
                   {"right_key", word_to_hex(right_key, key_bits)},
                   {"right_pair_count", right_pair_count},
                   {"top_ranking", ranks}};
  if (right_key_rank)
    j["right_key_rank"] = *right_key_rank;
  else
    j["right_key_rank"] = nullptr;
  return j;
}

CountingRun run_counting_attack(const CipherSpec& spec, Word in_diff,
                                const TritPattern& out_pattern,
                                std::uint64_t pairs, std::uint64_t seed) {
  const int n = spec.block_bits;
  const int s_bits = spec.last_round_key_bits();
  const std::uint64_t candidates = std::uint64_t{1} << s_bits;
  if (pairs > (std::uint64_t{1} << (n - 1)))
    throw std::invalid_argument("more pairs than the block space offers");
  if (out_pattern.width != n)
    throw std::invalid_argument("pattern width differs from the block size");

  CountingRun run;
  run.pairs = pairs;
  run.counters.assign(static_cast<std::size_t>(candidates), 0);

  std::mt19937_64 rng(seed);
  run.master_key = rng() & low_mask(spec.master_key_bits());
  int last_offset = spec.key_bits_through(spec.rounds() - 1);
  run.right_key = (run.master_key >> last_offset) & low_mask(s_bits);

  // Distinct plaintext pairs \{x, x ^ in_diff\}, drawn without replacement.
  std::unordered_set<Word> used;
  std::vector<std::pair<Word, Word>> ct_pairs;
  while (ct_pairs.size() < pairs) {
    Word x = rng() & low_mask(n);
    if (used.count(x)) continue;
    used.insert(x);
    used.insert(x ^ in_diff);
    ct_pairs.emplace_back(encrypt_full(spec, x, run.master_key),
                          encrypt_full(spec, x ^ in_diff, run.master_key));
  }

  for (Word s = 0; s < candidates; ++s) {
    std::uint64_t count = 0;
    for (const auto& [c0, c1] : ct_pairs) {
      Word d = last_round_decrypt(spec, s, c0) ^ last_round_decrypt(spec, s, c1);
      if (out_pattern.matches(d)) ++count;
    }
    run.counters[static_cast<std::size_t>(s)] = count;
  }
  run.right_pair_count = run.counters[static_cast<std::size_t>(run.right_key)];

  run.ranking.resize(static_cast<std::size_t>(candidates));
  for (Word s = 0; s < candidates; ++s)
    run.ranking[static_cast<std::size_t>(s)] = s;
  std::sort(run.ranking.begin(), run.ranking.end(), [&](Word a, Word b) {
    auto ca = run.counters[static_cast<std::size_t>(a)];
    auto cb = run.counters[static_cast<std::size_t>(b)];
    return ca != cb ? ca > cb : a < b;
  });
  if (pairs > 0) {
    int better = 0;
    for (Word s = 0; s < candidates; ++s)
      if (run.counters[static_cast<std::size_t>(s)] > run.right_pair_count)
        ++better;
    run.right_key_rank = better + 1;
  }
  return run;
}

}  // namespace bvdiff
