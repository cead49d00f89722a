#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bvdiff/finder.hpp"
#include "bvdiff/oracle.hpp"

using namespace bvdiff;

namespace {

BooleanFunction random_fn(int arity, std::mt19937_64& rng) {
  return BooleanFunction::from_evaluator(
      arity, [&](Word) { return static_cast<int>(rng() & 1); });
}

}  // namespace

TEST_CASE("sn gate arithmetic") {
  CHECK(sn_gate(1, Rational(1, 2)).value == Rational(1));
  CHECK_FALSE(sn_gate(1, Rational(1, 2)).pass);
  CHECK(sn_gate(2, Rational(1, 2)).value == Rational(2));
  CHECK(sn_gate(2, Rational(1, 2)).pass);
  CHECK(sn_gate(4, Rational(9, 10)).value == Rational(8, 5));
  CHECK(sn_gate(4, Rational(9, 10)).pass);
  CHECK_THROWS_AS(sn_gate(2, Rational(1)), std::domain_error);
}

TEST_CASE("structure search on a parity function") {
  // f(x) = x1 ^ x2: point spectrum at "11", so every collected vector is
  // 0b11 and the solved sets are exact after any number of runs.
  BooleanFunction f = BooleanFunction::from_evaluator(
      2, [](Word x) { return dot(0b11, x); });
  Algorithm1Result res = algorithm1(f, 4, 2024);
  REQUIRE(res.found);
  auto a0 = enumerate_members(res.a0, 4);
  auto a1 = enumerate_members(res.a1, 4);
  CHECK(a0 == std::vector<Word>{0b00, 0b11});
  CHECK(a1 == std::vector<Word>{0b01, 0b10});
  CHECK(res.ledger.quantum_queries == 4);
  CHECK(res.ledger.universal_gates == 4 * (2 * 2 + 1 + 1));
}

TEST_CASE("structure search declines AND") {
  BooleanFunction f = BooleanFunction::from_bits(2, {0, 0, 0, 1});
  int declined = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Algorithm1Result res = algorithm1(f, 32, seed);
    if (!res.found) ++declined;
  }
  CHECK(declined >= 99);
}

TEST_CASE("structure search on a constant function returns everything") {
  BooleanFunction f = BooleanFunction::from_evaluator(3, [](Word) { return 0; });
  Algorithm1Result res = algorithm1(f, 5, 7);
  REQUIRE(res.found);
  CHECK(res.a0.dim() == 3);  // whole space
  CHECK(res.a1.empty);
}

TEST_CASE("collected vectors constrain every reported member") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    int arity = 3 + static_cast<int>(rng() % 6);
    BooleanFunction f = random_fn(arity, rng);
    Algorithm1Result res = algorithm1(f, 6, rng());
    for (int i = 0; i < 2; ++i) {
      const auto& set = i == 0 ? res.a0 : res.a1;
      if (set.empty || set.dim() > 10) continue;
      for (Word a : enumerate_members(set, 1 << 10))
        for (Word w : res.collected) CHECK(dot(a, w) == i);
    }
  }
}

TEST_CASE("near-structures keep a high derivative match rate") {
  // A linear function with three flipped table cells: every direction is
  // an approximate structure, none exact. Survivors of heavy sampling must
  // match their derivative constant on at least 90% of inputs.
  const int arity = 8;
  BooleanFunction base = BooleanFunction::from_evaluator(
      arity, [](Word x) { return dot(0b10110101, x); });
  std::vector<int> bits;
  for (Word x = 0; x < 256; ++x) bits.push_back(base.eval(x));
  bits[3] ^= 1;
  bits[77] ^= 1;
  bits[200] ^= 1;
  BooleanFunction f = BooleanFunction::from_bits(arity, bits);
  LinearStructureSets exact = linear_structures_exact(f);
  CHECK(exact.u0.size() == 1);  // flips kill every exact structure
  CHECK(exact.u1.empty());

  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Algorithm1Result res = algorithm1(f, 150, seed);
    REQUIRE(res.found);
    for (int i = 0; i < 2; ++i) {
      const auto& set = i == 0 ? res.a0 : res.a1;
      if (set.empty) continue;
      for (Word a : enumerate_members(set, 1 << 10)) {
        if (a == 0) continue;
        auto [c0, c1] = derivative_histogram(f, a);
        std::uint64_t agree = i == 0 ? c0 : c1;
        CHECK(agree * 10 >= f.domain_size() * 9);
      }
    }
  }
}

TEST_CASE("truncated search finds the planted pattern") {
  CipherSpec spec = cipher_zoo("planted-ls-8");
  PlantInfo info = planted_ground_truth("planted-ls-8");
  TruncDiffConfig cfg;
  cfg.sigma = Rational(3, 10);
  cfg.q_value = 4;
  cfg.seed = 7;
  TruncDiffOutcome out = find_truncated_differential(spec, cfg);
  REQUIRE(out.result.has_value());
  const TruncatedDifferential& td = *out.result;
  CHECK(td.input_diff == info.input_diff);
  CHECK(td.predicted_bits >= 4);
  CHECK(td.output.mask() == info.predicted_mask);
  CHECK(td.output.bits() == info.predicted_bits);
  CHECK(td.signal_noise > Rational(1));
  // S/N value at t = 4, sigma = 0.3: 16 * 7/10.
  CHECK(td.signal_noise == Rational(16 * 7, 10));

  // Oracle confirmation: probability 1 for every key.
  KeyFractionReport kf = key_fraction(spec, td.input_diff, td.output,
                                      Rational(1) - cfg.sigma);
  CHECK(kf.fraction_above == Rational(1));
}

TEST_CASE("truncated search ledger matches the closed form exactly") {
  CipherSpec spec = cipher_zoo("planted-ls-8");
  TruncDiffConfig cfg;
  cfg.sigma = Rational(3, 10);
  cfg.q_value = 2;
  cfg.seed = 11;
  TruncDiffOutcome out = find_truncated_differential(spec, cfg);
  CHECK(out.ledger.universal_gates == out.predicted.universal_gates);
  CHECK(out.ledger.quantum_queries == out.predicted.quantum_queries);
  CHECK(out.ledger.qubits == out.predicted.qubits);
  CHECK(out.predicted.qubits ==
        static_cast<std::uint64_t>(spec.block_bits) +
            static_cast<std::uint64_t>(spec.reduced_key_bits()) + 1);
}

TEST_CASE("truncated search fails the gate instantly for huge sigma") {
  CipherSpec spec = cipher_zoo("planted-ls-8");
  TruncDiffConfig cfg;
  cfg.sigma = Rational(99999, 100000);
  cfg.q_value = 4;
  cfg.seed = 3;
  TruncDiffOutcome out = find_truncated_differential(spec, cfg);
  CHECK(!out.result.has_value());
  CHECK(out.failure == SearchFailure::gate_failed);
  CHECK(out.ledger.quantum_queries == 0);  // declined before sampling
}

TEST_CASE("truncated search reports budget exhaustion distinctly") {
  CipherSpec spec = cipher_zoo("planted-ls-8");
  TruncDiffConfig cfg;
  cfg.sigma = Rational(3, 10);
  cfg.q_value = 2;
  cfg.seed = 5;
  cfg.probe_budget = 3;  // not enough to reach the 4-component subset
  TruncDiffOutcome out = find_truncated_differential(spec, cfg);
  CHECK(!out.result.has_value());
  CHECK(out.failure == SearchFailure::budget_exhausted);
  CHECK(out.probes_used == 3);
}

TEST_CASE("truncated search declines random controls") {
  int none_count = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CipherSpec spec = cipher_zoo("random-8");
    TruncDiffConfig cfg;
    cfg.sigma = Rational(1, 10);
    cfg.q_value = 1;
    cfg.seed = seed;
    TruncDiffOutcome out = find_truncated_differential(spec, cfg);
    if (!out.result) {
      CHECK(out.failure == SearchFailure::no_intersection);
      ++none_count;
    } else {
      // Any emission must survive the oracle, otherwise it is a bug.
      KeyFractionReport kf =
          key_fraction(spec, out.result->input_diff, out.result->output,
                       Rational(1) - cfg.sigma);
      CHECK(kf.fraction_above > Rational(0));
    }
  }
  CHECK(none_count >= 18);
}

TEST_CASE("impossible search finds the planted mismatch") {
  CipherSpec spec = cipher_zoo("planted-miss-8");
  PlantInfo info = planted_ground_truth("planted-miss-8");
  for (std::uint64_t seed : {1, 2, 3}) {
    ImpDiffOutcome out = find_impossible_differential(spec, 24, seed);
    REQUIRE(out.result.has_value());
    const ImpossibleResult& res = *out.result;
    CHECK(res.flag == 0);
    CHECK(res.split_round == 1);
    CHECK(res.input_diff == info.input_diff);
    CHECK(res.tail_input_diff == info.tail_input_diff);
    CHECK(res.output_diff == info.tail_output_diff);
    CHECK_FALSE(res.trivial_tail);
    CHECK(verify_impossible(spec, res.input_diff, res.output_diff).verdict);
  }
}

TEST_CASE("impossible search flags the matched construction") {
  CipherSpec spec = cipher_zoo("planted-match-8");
  for (std::uint64_t seed : {1, 2, 3}) {
    ImpDiffOutcome out = find_impossible_differential(spec, 24, seed);
    REQUIRE(out.result.has_value());
    const ImpossibleResult& res = *out.result;
    CHECK(res.flag == 1);
    CHECK(verify_probability_one(spec, res.input_diff, res.output_diff)
              .verdict);
  }
}

TEST_CASE("impossible search declines random controls") {
  int none_count = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CipherSpec spec = cipher_zoo("random-8");
    ImpDiffOutcome out = find_impossible_differential(spec, 24, seed);
    if (!out.result) {
      ++none_count;
    } else if (out.result->flag == 0) {
      CHECK(verify_impossible(spec, out.result->input_diff,
                              out.result->output_diff).verdict);
    } else {
      CHECK(verify_probability_one(spec, out.result->input_diff,
                                   out.result->output_diff).verdict);
    }
  }
  CHECK(none_count >= 18);
}

TEST_CASE("impossible search validates parameters") {
  CHECK_THROWS_AS(find_impossible_differential(cipher_zoo("planted-miss-8"),
                                               0, 1),
                  std::invalid_argument);
}

TEST_CASE("deterministic outputs for fixed seeds") {
  CipherSpec spec = cipher_zoo("planted-ls-8");
  TruncDiffConfig cfg;
  cfg.sigma = Rational(3, 10);
  cfg.q_value = 4;
  cfg.seed = 99;
  TruncDiffOutcome a = find_truncated_differential(spec, cfg);
  TruncDiffOutcome b = find_truncated_differential(spec, cfg);
  REQUIRE(a.result.has_value());
  REQUIRE(b.result.has_value());
  CHECK(a.result->input_diff == b.result->input_diff);
  CHECK(a.result->output.to_string() == b.result->output.to_string());
  CHECK(a.ledger.universal_gates == b.ledger.universal_gates);

  ImpDiffOutcome c = find_impossible_differential(cipher_zoo("planted-miss-8"),
                                                  24, 5);
  ImpDiffOutcome d = find_impossible_differential(cipher_zoo("planted-miss-8"),
                                                  24, 5);
  REQUIRE(c.result.has_value());
  CHECK(c.result->input_diff == d.result->input_diff);
  CHECK(c.result->output_diff == d.result->output_diff);
}

TEST_CASE("finding serialization carries the ledger blocks") {
  CipherSpec spec = cipher_zoo("planted-ls-8");
  TruncDiffConfig cfg;
  cfg.sigma = Rational(3, 10);
  cfg.q_value = 4;
  cfg.seed = 7;
  TruncDiffOutcome out = find_truncated_differential(spec, cfg);
  REQUIRE(out.result.has_value());
  nlohmann::json j = finding_to_json(*out.result, cfg.sigma, cfg.q_value,
                                     out.ledger, out.predicted);
  CHECK(j.at("type") == "truncated");
  CHECK(j.at("t").get<int>() == out.result->predicted_bits);
  CHECK(j.at("ledger").contains("formula_predicted"));
  CHECK(j.at("b_trits").get<std::string>().size() == 8);
}
