#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bvdiff/boolfn.hpp"
#include "bvdiff/rational.hpp"

#include "json.hpp"

namespace bvdiff {

// Running totals for the quantum and classical cost accounting. One BV run
// on an l-bit function of circuit size c books 2l+1+c universal gates, one
// quantum query and l+1 qubits (qubits are reused, so the field keeps the
// high-water mark).
struct ResourceLedger {
  std::uint64_t universal_gates = 0;
  std::uint64_t qubits = 0;
  std::uint64_t quantum_queries = 0;
  std::uint64_t classical_ops = 0;

  void record_bv_run(int arity, std::uint64_t gate_cost) {
    universal_gates += 2 * static_cast<std::uint64_t>(arity) + 1 + gate_cost;
    quantum_queries += 1;
    std::uint64_t need = static_cast<std::uint64_t>(arity) + 1;
    if (need > qubits) qubits = need;
  }
  void record_classical(std::uint64_t ops) { classical_ops += ops; }
  void merge(const ResourceLedger& o) {
    universal_gates += o.universal_gates;
    quantum_queries += o.quantum_queries;
    classical_ops += o.classical_ops;
    if (o.qubits > qubits) qubits = o.qubits;
  }
  nlohmann::json to_json() const;
};

// Per-component circuit sizes |F_j|_Q of a vector function; their sum is
// |F|_Q. These are metadata constants, not synthesized circuit counts.
struct GateCostModel {
  std::vector<std::uint64_t> per_component;
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : per_component) t += c;
    return t;
  }
};

// Measurement sampler for one Boolean function: outcome w is drawn with
// probability raw[w]^2 / 4^l, which is exactly S_f(w)^2. Weights are exact
// integers accumulated in 128 bits; the total is the power of two 4^l, so
// a masked uniform draw gives the distribution without any rounding.
class BvSampler {
 public:
  BvSampler(const WalshSpectrum& spectrum, std::uint64_t seed);

  int arity() const { return arity_; }
  std::uint64_t seed() const { return seed_; }

  Word sample(ResourceLedger& ledger, std::uint64_t gate_cost);

  // First `keep` bits of `count` independent samples.
  std::vector<Word> sample_truncated(int keep, std::uint64_t count,
                                     ResourceLedger& ledger,
                                     std::uint64_t gate_cost);

 private:
  int arity_;
  std::uint64_t seed_;
  std::vector<Word> support_;
  std::vector<unsigned __int128> cumulative_;
  std::mt19937_64 rng_;
};

// Closed-form resource totals for the truncated-differential search at
// parameters (n, m, sigma, q(n), |F|_Q): p = ceil(q^2 n^3 / (2 sigma^2))
// runs per component, p*(2n^2 + (2m+1)n + |F|_Q) universal gates, p*n
// quantum queries, n+m+1 qubits.
struct Alg2Prediction {
  std::uint64_t runs_per_component = 0;
  std::uint64_t universal_gates = 0;
  std::uint64_t quantum_queries = 0;
  std::uint64_t qubits = 0;
  nlohmann::json to_json() const;
};

Alg2Prediction predict_truncdiff_resources(int n, int m,
                                           const Rational& sigma,
                                           std::uint64_t q_value,
                                           std::uint64_t f_gate_cost);

// Closed-form totals for the impossible-differential search with p(n) = n
// runs per component: (r-2)(4n^3 + 2n^2 + 2mn^2 + n|F|_Q) universal gates,
// 2n^2(r-2) quantum queries, n+m+1 qubits (a reuse bound). Requires r >= 3.
struct Alg3Prediction {
  std::uint64_t universal_gates = 0;
  std::uint64_t quantum_queries = 0;
  std::uint64_t qubits = 0;
  nlohmann::json to_json() const;
};

Alg3Prediction predict_impdiff_resources(int n, int m, int rounds,
                                         std::uint64_t f_gate_cost);

}  // namespace bvdiff
