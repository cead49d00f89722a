#include "bvdiff/bvsim.hpp"

#include <algorithm>
#include <stdexcept>

namespace bvdiff {

nlohmann::json ResourceLedger::to_json() const {
  return nlohmann::json{{"universal_gates", universal_gates},
                        {"qubits", qubits},
                        {"quantum_queries", quantum_queries},
                        {"classical_ops", classical_ops}};
}

nlohmann::json Alg2Prediction::to_json() const {
  return nlohmann::json{{"runs_per_component", runs_per_component},
                        {"universal_gates", universal_gates},
                        {"quantum_queries", quantum_queries},
                        {"qubits", qubits}};
}

nlohmann::json Alg3Prediction::to_json() const {
  return nlohmann::json{{"universal_gates", universal_gates},
                        {"quantum_queries", quantum_queries},
                        {"qubits", qubits}};
}

BvSampler::BvSampler(const WalshSpectrum& spectrum, std::uint64_t seed)
    : arity_(spectrum.arity), seed_(seed), rng_(seed) {
  unsigned __int128 acc = 0;
  for (std::size_t w = 0; w < spectrum.raw.size(); ++w) {
    std::int64_t v = spectrum.raw[w];
    if (v == 0) continue;
    acc += static_cast<unsigned __int128>(v * v);
    support_.push_back(static_cast<Word>(w));
    cumulative_.push_back(acc);
  }
  if (acc != (static_cast<unsigned __int128>(1) << (2 * arity_)))
    throw std::invalid_argument("spectrum violates Parseval; weights must sum to 4^l");
}

Word BvSampler::sample(ResourceLedger& ledger, std::uint64_t gate_cost) {
  // Total weight is 2^(2l) with 2l <= 64, so masking the generator output
  // yields an exact uniform draw over [0, 4^l).
  std::uint64_t draw = rng_() & low_mask(2 * arity_);
  unsigned __int128 target = static_cast<unsigned __int128>(draw);
  std::size_t idx = static_cast<std::size_t>(
      std::upper_bound(cumulative_.begin(), cumulative_.end(), target) -
      cumulative_.begin());
  ledger.record_bv_run(arity_, gate_cost);
  return support_[idx];
}

std::vector<Word> BvSampler::sample_truncated(int keep, std::uint64_t count,
                                              ResourceLedger& ledger,
                                              std::uint64_t gate_cost) {
  if (keep < 1 || keep > arity_)
    throw std::invalid_argument("kept prefix must be within the arity");
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(count));
  Word mask = low_mask(keep);
  for (std::uint64_t i = 0; i < count; ++i)
    out.push_back(sample(ledger, gate_cost) & mask);
  return out;
}

Alg2Prediction predict_truncdiff_resources(int n, int m,
                                           const Rational& sigma,
                                           std::uint64_t q_value,
                                           std::uint64_t f_gate_cost) {
  if (!(sigma > Rational(0)) || !(sigma < Rational(1)))
    throw std::domain_error("sigma must lie strictly inside (0, 1)");
  if (n < 1 || m < 0) throw std::invalid_argument("bad block/key widths");
  // p = ceil(q^2 n^3 den^2 / (2 num^2)), exact in 128-bit intermediates.
  unsigned __int128 numer = static_cast<unsigned __int128>(q_value) * q_value;
  numer *= static_cast<unsigned __int128>(n) * n * n;
  numer *= static_cast<unsigned __int128>(sigma.den()) * sigma.den();
  unsigned __int128 denom =
      2 * static_cast<unsigned __int128>(sigma.num()) * sigma.num();
  unsigned __int128 p = (numer + denom - 1) / denom;

  Alg2Prediction out;
  out.runs_per_component = static_cast<std::uint64_t>(p);
  std::uint64_t per_sweep =
      2ull * n * n + (2ull * m + 1) * n + f_gate_cost;
  out.universal_gates = out.runs_per_component * per_sweep;
  out.quantum_queries = out.runs_per_component * static_cast<std::uint64_t>(n);
  out.qubits = static_cast<std::uint64_t>(n) + m + 1;
  return out;
}

Alg3Prediction predict_impdiff_resources(int n, int m, int rounds,
                                         std::uint64_t f_gate_cost) {
  if (rounds < 3)
    throw std::invalid_argument("impossible-differential accounting needs r >= 3");
  Alg3Prediction out;
  std::uint64_t nn = static_cast<std::uint64_t>(n);
  std::uint64_t span = static_cast<std::uint64_t>(rounds - 2);
  out.universal_gates =
      span * (4 * nn * nn * nn + 2 * nn * nn + 2 * static_cast<std::uint64_t>(m) * nn * nn +
              nn * f_gate_cost);
  out.quantum_queries = span * 2 * nn * nn;
  out.qubits = nn + static_cast<std::uint64_t>(m) + 1;
  return out;
}

}  // namespace bvdiff
