#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "bvdiff/bvsim.hpp"

using namespace bvdiff;

namespace {

BooleanFunction random_fn(int arity, std::mt19937_64& rng) {
  return BooleanFunction::from_evaluator(
      arity, [&](Word) { return static_cast<int>(rng() & 1); });
}

double total_variation(const std::map<Word, std::uint64_t>& counts,
                       const WalshSpectrum& s, std::uint64_t samples) {
  double tv = 0.0;
  double denom = std::ldexp(1.0, 2 * s.arity);
  for (std::size_t w = 0; w < s.raw.size(); ++w) {
    double p = static_cast<double>(s.raw[w]) * s.raw[w] / denom;
    auto it = counts.find(static_cast<Word>(w));
    double phat =
        it == counts.end()
            ? 0.0
            : static_cast<double>(it->second) / static_cast<double>(samples);
    tv += std::abs(phat - p);
  }
  return tv / 2.0;
}

}  // namespace

TEST_CASE("point spectra sample deterministically") {
  // f(x) = a.x with a = "110": every outcome is a.
  Word a = 0b011;  // coordinates (1,1,0)
  BooleanFunction f = BooleanFunction::from_evaluator(
      3, [=](Word x) { return dot(a, x); });
  BvSampler sampler(walsh_spectrum(f), 42);
  ResourceLedger led;
  for (int i = 0; i < 200; ++i) CHECK(sampler.sample(led, 7) == a);
  CHECK(led.quantum_queries == 200);
  CHECK(led.universal_gates == 200 * (2 * 3 + 1 + 7));
  CHECK(led.qubits == 4);

  BooleanFunction c1 = BooleanFunction::from_evaluator(4, [](Word) { return 1; });
  BvSampler s1(walsh_spectrum(c1), 1);
  for (int i = 0; i < 50; ++i) CHECK(s1.sample(led, 0) == 0);
}

TEST_CASE("flat spectrum samples uniformly") {
  BooleanFunction and2 = BooleanFunction::from_bits(2, {0, 0, 0, 1});
  BvSampler sampler(walsh_spectrum(and2), 7);
  ResourceLedger led;
  std::map<Word, std::uint64_t> counts;
  const std::uint64_t samples = 40000;
  for (std::uint64_t i = 0; i < samples; ++i) ++counts[sampler.sample(led, 0)];
  CHECK(counts.size() == 4);
  for (auto& [w, c] : counts) {
    CHECK(c > samples / 4 - 600);
    CHECK(c < samples / 4 + 600);
  }
}

TEST_CASE("support soundness over many samples") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    int arity = 4 + static_cast<int>(rng() % 7);  // up to 10
    BooleanFunction f = random_fn(arity, rng);
    WalshSpectrum s = walsh_spectrum(f);
    BvSampler sampler(s, rng());
    ResourceLedger led;
    for (int i = 0; i < 20000; ++i) {
      Word w = sampler.sample(led, 0);
      CHECK(s.raw[static_cast<std::size_t>(w)] != 0);
    }
  }
}

TEST_CASE("empirical distribution tracks the squared spectrum") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 6; ++trial) {
    int arity = 4 + trial % 4;
    BooleanFunction f = random_fn(arity, rng);
    WalshSpectrum s = walsh_spectrum(f);
    BvSampler sampler(s, 1000 + static_cast<std::uint64_t>(trial));
    ResourceLedger led;
    std::map<Word, std::uint64_t> counts;
    const std::uint64_t samples = 100000;
    for (std::uint64_t i = 0; i < samples; ++i)
      ++counts[sampler.sample(led, 0)];
    CHECK(total_variation(counts, s, samples) < 0.02);
  }
}

TEST_CASE("identical seeds give identical streams") {
  std::mt19937_64 rng(8);
  BooleanFunction f = random_fn(8, rng);
  WalshSpectrum s = walsh_spectrum(f);
  BvSampler a(s, 123), b(s, 123), c(s, 124);
  ResourceLedger led;
  std::vector<Word> va, vb, vc;
  for (int i = 0; i < 500; ++i) {
    va.push_back(a.sample(led, 0));
    vb.push_back(b.sample(led, 0));
    vc.push_back(c.sample(led, 0));
  }
  CHECK(va == vb);
  CHECK(va != vc);
}

TEST_CASE("truncated sampling") {
  // f on 3 bits = x1: spectrum sits at "100", so the kept bit is always 1.
  BooleanFunction f = BooleanFunction::from_evaluator(
      3, [](Word x) { return bit_of(x, 0); });
  BvSampler sampler(walsh_spectrum(f), 9);
  ResourceLedger led;
  auto outs = sampler.sample_truncated(1, 300, led, 2);
  CHECK(outs.size() == 300);
  for (Word w : outs) CHECK(w == 1);
  CHECK(led.quantum_queries == 300);

  // Truncation happens after full-width sampling: the ledger counts the
  // full arity per run.
  CHECK(led.universal_gates == 300 * (2 * 3 + 1 + 2));

  ResourceLedger led2;
  auto empty = sampler.sample_truncated(2, 0, led2, 2);
  CHECK(empty.empty());
  CHECK(led2.quantum_queries == 0);
  CHECK(led2.universal_gates == 0);

  CHECK_THROWS_AS(sampler.sample_truncated(4, 1, led2, 2),
                  std::invalid_argument);
}

TEST_CASE("truncated marginal is uniform for AND padded with a dead bit") {
  // AND(x1, x2) ignoring x3; the 2-bit marginal of the outcome law stays
  // uniform. Chi-square with 3 dof; 16.27 is the 0.001 tail.
  BooleanFunction f = BooleanFunction::from_evaluator(
      3, [](Word x) { return bit_of(x, 0) & bit_of(x, 1); });
  BvSampler sampler(walsh_spectrum(f), 11);
  ResourceLedger led;
  auto outs = sampler.sample_truncated(2, 1000, led, 0);
  std::map<Word, std::uint64_t> counts;
  for (Word w : outs) ++counts[w];
  double chi2 = 0;
  for (Word w = 0; w < 4; ++w) {
    double diff = static_cast<double>(counts[w]) - 250.0;
    chi2 += diff * diff / 250.0;
  }
  CHECK(chi2 < 16.27);
}

TEST_CASE("resource predictions match the worked arithmetic") {
  Alg2Prediction p = predict_truncdiff_resources(4, 4, Rational(1, 2), 2, 100);
  CHECK(p.runs_per_component == 512);
  CHECK(p.universal_gates == 86016);
  CHECK(p.qubits == 9);
  CHECK(p.quantum_queries == 512 * 4);

  Alg2Prediction q = predict_truncdiff_resources(1, 0, Rational(1, 2), 1, 1);
  CHECK(q.runs_per_component == 2);
  CHECK(q.universal_gates == 8);

  CHECK_THROWS_AS(predict_truncdiff_resources(4, 4, Rational(1), 2, 100),
                  std::domain_error);
  CHECK_THROWS_AS(predict_truncdiff_resources(4, 4, Rational(0), 2, 100),
                  std::domain_error);

  Alg3Prediction a = predict_impdiff_resources(4, 4, 5, 100);
  CHECK(a.universal_gates == 3 * (256 + 32 + 128 + 400));
  CHECK(a.qubits == 9);
  Alg3Prediction b = predict_impdiff_resources(1, 0, 3, 1);
  CHECK(b.universal_gates == 4 + 2 + 0 + 1);
  CHECK_THROWS_AS(predict_impdiff_resources(4, 4, 2, 100),
                  std::invalid_argument);
}

TEST_CASE("ledger merge keeps totals and the qubit high-water mark") {
  ResourceLedger a, b;
  a.record_bv_run(8, 10);
  b.record_bv_run(12, 2);
  b.record_classical(100);
  a.merge(b);
  CHECK(a.universal_gates == (2 * 8 + 1 + 10) + (2 * 12 + 1 + 2));
  CHECK(a.quantum_queries == 2);
  CHECK(a.qubits == 13);
  CHECK(a.classical_ops == 100);
  auto j = a.to_json();
  CHECK(j.at("qubits").get<std::uint64_t>() == 13);
}
