#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bvdiff/bvsim.hpp"
#include "bvdiff/cipher.hpp"
#include "bvdiff/differential.hpp"
#include "bvdiff/gf2.hpp"

#include "json.hpp"

namespace bvdiff {

// Linear-structure search on a single Boolean function: sample the
// measurement distribution `runs` times, then solve {x.w = i | w in H}
// for i = 0, 1. Reports nothing when both solution sets collapse to at
// most the zero vector.
struct Algorithm1Result {
  bool found = false;
  AffineSolutionSet a0;
  AffineSolutionSet a1;
  std::vector<Word> collected;
  ResourceLedger ledger;
};

Algorithm1Result algorithm1(const BooleanFunction& f, std::uint64_t runs,
                            std::uint64_t seed, std::uint64_t gate_cost = 1);

struct TruncatedDifferential {
  Word input_diff = 0;
  TritPattern output;
  int predicted_bits = 0;
  Rational signal_noise;
  std::vector<int> component_set;  // 1-based positions carrying predictions
};

enum class SearchFailure { none, gate_failed, budget_exhausted, no_intersection };

const char* failure_name(SearchFailure f);

struct TruncDiffConfig {
  Rational sigma;              // strictly inside (0, 1)
  std::uint64_t q_value = 2;
  std::uint64_t probe_budget = 1 << 20;
  std::uint64_t seed = 0;
};

struct TruncDiffOutcome {
  std::optional<TruncatedDifferential> result;
  SearchFailure failure = SearchFailure::none;
  std::uint64_t probes_used = 0;
  ResourceLedger ledger;
  Alg2Prediction predicted;
};

// Truncated-differential search over the keyless view F(x, k): per output
// component, p = ceil(q^2 n^3 / (2 sigma^2)) samples truncated to the
// block bits feed one solution subspace; t descends from n while the
// signal-to-noise gate 2^t (1 - sigma) > 1 holds, looking for t components
// whose subspaces meet beyond \{0\}. Component subsets are probed in
// lexicographic order against the probe budget.
TruncDiffOutcome find_truncated_differential(const VectorBooleanFunction& f,
                                             int key_bits,
                                             const GateCostModel& costs,
                                             const TruncDiffConfig& cfg);

TruncDiffOutcome find_truncated_differential(const CipherSpec& spec,
                                             const TruncDiffConfig& cfg,
                                             int arity_cap = 24);

struct ImpossibleResult {
  Word input_diff = 0;
  Word output_diff = 0;
  int flag = 0;  // 0 impossible, 1 probability-one
  int split_round = 0;
  bool trivial_tail = false;  // tail difference fell back to 0
  Word head_output_diff = 0;
  Word tail_input_diff = 0;
};

struct ImpDiffOutcome {
  std::optional<ImpossibleResult> result;
  ResourceLedger ledger;
  Alg3Prediction predicted;
};

// Miss-in-the-middle search: for each split v, recover common structures
// of the head components (skipping to the next split as soon as one
// component admits only 0), then of the tail components; halts at the
// first split where both sides yield vectors, emitting flag 0 when the
// middle differences disagree and flag 1 when they agree.
ImpDiffOutcome find_impossible_differential(const CipherSpec& spec,
                                            std::uint64_t runs_per_component,
                                            std::uint64_t seed,
                                            int arity_cap = 24);

struct SnGate {
  Rational value;
  bool pass = false;
};

// 2^t (1 - sigma) compared against 1, exactly.
SnGate sn_gate(int t, const Rational& sigma);

nlohmann::json finding_to_json(const TruncatedDifferential& td,
                               const Rational& sigma, std::uint64_t q_value,
                               const ResourceLedger& ledger,
                               const Alg2Prediction& predicted);
nlohmann::json finding_to_json(const ImpossibleResult& ir, int block_bits,
                               const ResourceLedger& ledger,
                               const Alg3Prediction& predicted);

}  // namespace bvdiff
