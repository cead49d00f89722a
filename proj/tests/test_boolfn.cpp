#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bvdiff/boolfn.hpp"

using namespace bvdiff;

namespace {

BooleanFunction and2() {
  return BooleanFunction::from_bits(2, {0, 0, 0, 1});
}

BooleanFunction linear_fn(int arity, Word a, int c = 0) {
  return BooleanFunction::from_evaluator(
      arity, [=](Word x) { return dot(a, x) ^ c; });
}

BooleanFunction random_fn(int arity, std::mt19937_64& rng) {
  return BooleanFunction::from_evaluator(
      arity, [&](Word) { return static_cast<int>(rng() & 1); });
}

// Independent summation oracle for one spectrum entry.
std::int64_t walsh_entry_by_sum(const BooleanFunction& f, Word w) {
  std::int64_t acc = 0;
  for (Word x = 0; x < f.domain_size(); ++x)
    acc += (f.eval(x) ^ dot(w, x)) ? -1 : 1;
  return acc;
}

// Pairwise-definition oracle for the structure sets.
LinearStructureSets structures_by_pairs(const BooleanFunction& f) {
  LinearStructureSets out;
  for (Word a = 0; a < f.domain_size(); ++a) {
    int c = f.eval(a) ^ f.eval(0);
    bool ok = true;
    for (Word x = 0; x < f.domain_size() && ok; ++x)
      ok = (f.eval(x ^ a) ^ f.eval(x)) == c;
    if (ok) (c == 0 ? out.u0 : out.u1).push_back(a);
  }
  return out;
}

}  // namespace

TEST_CASE("evaluation and table conventions") {
  BooleanFunction f = and2();
  CHECK(f.eval(0b11) == 1);
  CHECK(f.eval(0b01) == 0);
  CHECK(f.eval(0b10) == 0);
  BooleanFunction zero3 = BooleanFunction::from_evaluator(3, [](Word) { return 0; });
  CHECK(zero3.eval(0b101) == 0);
  CHECK_THROWS_AS(f.eval(4), std::out_of_range);
}

TEST_CASE("hex and json round trip") {
  std::mt19937_64 rng(11);
  for (int arity : {1, 2, 3, 6, 7, 9}) {
    BooleanFunction f = random_fn(arity, rng);
    BooleanFunction g = BooleanFunction::from_hex(arity, f.to_hex());
    CHECK(f == g);
    BooleanFunction h = BooleanFunction::from_json(f.to_json());
    CHECK(f == h);
  }
  // Little-endian bit order within bytes: table bit 0 is the low bit of
  // the first byte.
  BooleanFunction one_at_zero =
      BooleanFunction::from_bits(3, {1, 0, 0, 0, 0, 0, 0, 0});
  CHECK(one_at_zero.to_hex() == "01");
  CHECK_THROWS(BooleanFunction::from_hex(3, "0"));
}

TEST_CASE("walsh spectrum point examples") {
  // Linear function: delta of height 2^l at its mask.
  BooleanFunction lin = linear_fn(2, 0b01);  // a = "10" in coordinate order
  WalshSpectrum s = walsh_spectrum(lin);
  CHECK(s.raw == std::vector<std::int32_t>{0, 4, 0, 0});

  WalshSpectrum sa = walsh_spectrum(and2());
  CHECK(sa.raw == std::vector<std::int32_t>{2, 2, 2, -2});

  BooleanFunction one2 = BooleanFunction::from_bits(2, {1, 1, 1, 1});
  WalshSpectrum s1 = walsh_spectrum(one2);
  CHECK(s1.raw == std::vector<std::int32_t>{-4, 0, 0, 0});
}

TEST_CASE("walsh spectrum matches the summation oracle and Parseval") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    int arity = 1 + static_cast<int>(rng() % 8);
    BooleanFunction f = random_fn(arity, rng);
    WalshSpectrum s = walsh_spectrum(f);
    CHECK(s.parseval_ok());
    for (int probe = 0; probe < 10; ++probe) {
      Word w = rng() & low_mask(arity);
      CHECK(s.raw[static_cast<std::size_t>(w)] == walsh_entry_by_sum(f, w));
    }
    // Entry parity: raw = 2^l - 2 * disagreements, always even for l >= 1.
    for (auto v : s.raw) CHECK((v & 1) == 0);
  }
}

TEST_CASE("linear structure sets on the worked examples") {
  BooleanFunction x1x2 = linear_fn(2, 0b11);
  LinearStructureSets s = linear_structures_exact(x1x2);
  CHECK(s.u0 == std::vector<Word>{0b00, 0b11});
  CHECK(s.u1 == std::vector<Word>{0b01, 0b10});

  LinearStructureSets sa = linear_structures_exact(and2());
  CHECK(sa.u0 == std::vector<Word>{0});
  CHECK(sa.u1.empty());
  CHECK_FALSE(sa.has_nonzero());

  BooleanFunction zero2 = BooleanFunction::from_bits(2, {0, 0, 0, 0});
  LinearStructureSets sz = linear_structures_exact(zero2);
  CHECK(sz.u0 == std::vector<Word>{0, 1, 2, 3});
  CHECK(sz.u1.empty());
}

TEST_CASE("exact structures equal the pairwise oracle and the support route") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    int arity = 1 + static_cast<int>(rng() % 7);
    BooleanFunction f = random_fn(arity, rng);
    LinearStructureSets brute = structures_by_pairs(f);
    LinearStructureSets fast = linear_structures_exact(f);
    CHECK(brute.u0 == fast.u0);
    CHECK(brute.u1 == fast.u1);
    LinearStructureSets via = linear_structures_via_support(f);
    CHECK(brute.u0 == via.u0);
    CHECK(brute.u1 == via.u1);
  }
}

TEST_CASE("u0 is a subspace and u1 a coset across random functions") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 1000; ++trial) {
    int arity = 1 + static_cast<int>(rng() % 8);
    BooleanFunction f = random_fn(arity, rng);
    LinearStructureSets s = linear_structures_exact(f);
    REQUIRE(!s.u0.empty());
    CHECK(s.u0.front() == 0);
    for (Word a : s.u0)
      for (Word b : s.u0) CHECK(s.contains(a ^ b, 0));
    if (!s.u1.empty()) {
      Word rep = s.u1.front();
      CHECK(s.u1.size() == s.u0.size());
      for (Word a : s.u1) CHECK(s.contains(a ^ rep, 0));
    }
  }
}

TEST_CASE("derivative histograms") {
  auto [c0, c1] = derivative_histogram(and2(), 0b11);
  CHECK(c0 == 2);
  CHECK(c1 == 2);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    int arity = 1 + static_cast<int>(rng() % 9);
    BooleanFunction f = random_fn(arity, rng);
    auto [z, o] = derivative_histogram(f, 0);
    CHECK(z == f.domain_size());
    CHECK(o == 0);
    Word a = rng() & low_mask(arity);
    auto [za, oa] = derivative_histogram(f, a);
    CHECK(za + oa == f.domain_size());
    // Direct recount.
    std::uint64_t ones = 0;
    for (Word x = 0; x < f.domain_size(); ++x)
      ones += static_cast<std::uint64_t>(f.eval(x ^ a) ^ f.eval(x));
    CHECK(oa == ones);
  }
  BooleanFunction x1 = linear_fn(2, 0b01);
  auto [d0, d1] = derivative_histogram(x1, 0b01);
  CHECK(d0 == 0);
  CHECK(d1 == 4);
}

TEST_CASE("delta prime") {
  CHECK(delta_prime(and2()) == Rational(1, 2));

  // f(x) = x1 ^ x2 x3: compare against the direct double loop.
  BooleanFunction f = BooleanFunction::from_evaluator(3, [](Word x) {
    return bit_of(x, 0) ^ (bit_of(x, 1) & bit_of(x, 2));
  });
  LinearStructureSets s = linear_structures_exact(f);
  std::uint64_t best = 0;
  for (Word a = 0; a < 8; ++a) {
    if (s.contains(a, 0) || s.contains(a, 1)) continue;
    auto [c0, c1] = derivative_histogram(f, a);
    best = std::max({best, c0, c1});
  }
  Rational expected(static_cast<std::int64_t>(best), 8);
  CHECK(delta_prime(f) == expected);
  CHECK(delta_prime(f) < Rational(1));

  BooleanFunction zero2 = BooleanFunction::from_bits(2, {0, 0, 0, 0});
  CHECK(delta_prime(zero2) == Rational(0));
}

TEST_CASE("arity caps are enforced") {
  BooleanFunction f = BooleanFunction::from_evaluator(9, [](Word x) {
    return parity(x & 0x1ff);
  });
  CHECK_THROWS_AS(linear_structures_exact(f, 8), std::invalid_argument);
  CHECK_THROWS_AS(delta_prime(f, 8), std::invalid_argument);
}
