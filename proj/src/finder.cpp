#include "bvdiff/finder.hpp"

#include <algorithm>
#include <stdexcept>

namespace bvdiff {

namespace {

std::uint64_t component_seed(std::uint64_t master, int index) {
  return splitmix64(master ^ (0xa5a5a5a500000000ULL + static_cast<std::uint64_t>(index)));
}

// One sampled component: the structure-candidate subspace plus the first
// collected vector, which pins the derivative constant of any member.
struct SampledComponent {
  Subspace space;
  Word witness = 0;
};

SampledComponent sample_component(const BooleanFunction& f, int keep_bits,
                                  std::uint64_t runs, std::uint64_t seed,
                                  std::uint64_t gate_cost,
                                  ResourceLedger& ledger) {
  BvSampler sampler(walsh_spectrum(f), seed);
  std::vector<Word> h =
      sampler.sample_truncated(keep_bits, runs, ledger, gate_cost);
  SampledComponent out;
  out.witness = h.front();
  out.space = common_derivative_space(keep_bits, h);
  // Elimination cost of the solved system, mu * nu^2 in the counts used
  // throughout: mu rows of nu variables.
  ledger.record_classical(runs * static_cast<std::uint64_t>(keep_bits) *
                          static_cast<std::uint64_t>(keep_bits));
  return out;
}

std::uint64_t intersection_op_cost(int t, std::uint64_t alpha) {
  std::uint64_t log_alpha = 1;
  while ((std::uint64_t{1} << log_alpha) < alpha) ++log_alpha;
  return static_cast<std::uint64_t>(t) * alpha * log_alpha;
}

}  // namespace

const char* failure_name(SearchFailure f) {
  switch (f) {
    case SearchFailure::none: return "none";
    case SearchFailure::gate_failed: return "gate-failed";
    case SearchFailure::budget_exhausted: return "budget-exhausted";
    case SearchFailure::no_intersection: return "no-nontrivial-structure";
  }
  return "unknown";
}

SnGate sn_gate(int t, const Rational& sigma) {
  if (sigma < Rational(0) || !(sigma < Rational(1)))
    throw std::domain_error("sigma must lie in [0, 1)");
  SnGate g;
  g.value = Rational(std::int64_t{1} << t) * (Rational(1) - sigma);
  g.pass = g.value > Rational(1);
  return g;
}

Algorithm1Result algorithm1(const BooleanFunction& f, std::uint64_t runs,
                            std::uint64_t seed, std::uint64_t gate_cost) {
  if (runs < 1) throw std::invalid_argument("need at least one run");
  Algorithm1Result out;
  BvSampler sampler(walsh_spectrum(f), seed);
  for (std::uint64_t i = 0; i < runs; ++i)
    out.collected.push_back(sampler.sample(out.ledger, gate_cost));

  for (int i = 0; i < 2; ++i) {
    LinearSystemGF2 sys;
    sys.width = f.arity();
    for (Word w : out.collected) sys.rows.push_back({w, i});
    (i == 0 ? out.a0 : out.a1) = solve(sys);
    out.ledger.record_classical(runs *
                                static_cast<std::uint64_t>(f.arity()) *
                                static_cast<std::uint64_t>(f.arity()));
  }
  // "No" exactly when both solution sets hold nothing beyond 0.
  bool beyond_zero = out.a0.dim() > 0 ||
                     (!out.a1.empty && (out.a1.dim() > 0 || out.a1.particular != 0));
  out.found = beyond_zero;
  return out;
}

TruncDiffOutcome find_truncated_differential(const VectorBooleanFunction& f,
                                             int key_bits,
                                             const GateCostModel& costs,
                                             const TruncDiffConfig& cfg) {
  const int n = f.out_width;
  if (f.arity != n + key_bits)
    throw std::invalid_argument("keyless view arity must be block + key bits");
  if (static_cast<int>(costs.per_component.size()) != n)
    throw std::invalid_argument("cost model must cover every component");

  TruncDiffOutcome out;
  out.predicted =
      predict_truncdiff_resources(n, key_bits, cfg.sigma, cfg.q_value,
                                  costs.total());

  // The gate is monotone in t, so an admissible t exists only if it holds
  // at t = n; bail out before paying for any sampling.
  if (!sn_gate(n, cfg.sigma).pass) {
    out.failure = SearchFailure::gate_failed;
    return out;
  }

  std::vector<SampledComponent> comps;
  comps.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    comps.push_back(sample_component(
        f.components[static_cast<std::size_t>(j)], n,
        out.predicted.runs_per_component, component_seed(cfg.seed, j),
        costs.per_component[static_cast<std::size_t>(j)], out.ledger));
  }

  std::uint64_t alpha = 1;
  for (const auto& c : comps) alpha = std::max(alpha, c.space.size());

  // Descend t while the signal-to-noise gate holds; inside each t, probe
  // component subsets in lexicographic order with a shared prefix stack.
  // A probe is one completed t-subset intersection; prefixes that already
  // collapse to \{0\} prune their extensions unprobed.
  const Subspace everything = whole_space(n);
  for (int t = n; t >= 1; --t) {
    SnGate gate = sn_gate(t, cfg.sigma);
    if (!gate.pass) {
      out.failure = SearchFailure::gate_failed;
      return out;
    }

    std::vector<int> pick;
    std::vector<Subspace> prefix;
    Subspace found;
    bool success = false;
    bool budget_hit = false;

    auto descend = [&](auto&& self, int start) -> void {
      if (success || budget_hit) return;
      int depth = static_cast<int>(pick.size());
      const Subspace& base = depth == 0 ? everything : prefix.back();
      if (depth == t) {
        if (out.probes_used >= cfg.probe_budget) {
          budget_hit = true;
          return;
        }
        ++out.probes_used;
        out.ledger.record_classical(intersection_op_cost(t, alpha));
        if (base.dim() > 0) {
          found = base;
          success = true;
        }
        return;
      }
      for (int j = start; j <= n - (t - depth); ++j) {
        Subspace next = intersect(base, comps[static_cast<std::size_t>(j)].space);
        if (next.dim() == 0 && depth + 1 < t) continue;  // dead prefix
        pick.push_back(j);
        prefix.push_back(next);
        self(self, j + 1);
        prefix.pop_back();
        pick.pop_back();
        if (success || budget_hit) return;
      }
    };
    // At full width a single intersection answers the probe directly.
    descend(descend, 0);

    if (budget_hit) {
      out.failure = SearchFailure::budget_exhausted;
      return out;
    }
    if (!success) continue;

    TruncatedDifferential td;
    td.input_diff = *found.min_nonzero();
    td.predicted_bits = t;
    td.signal_noise = gate.value;
    td.output = TritPattern::all_unpredicted(n);
    for (int j : pick) {
      int bit = dot(td.input_diff, comps[static_cast<std::size_t>(j)].witness);
      td.output.trits[static_cast<std::size_t>(j)] = bit;
      td.component_set.push_back(j + 1);
    }
    out.result = td;
    out.failure = SearchFailure::none;
    return out;
  }
  out.failure = SearchFailure::no_intersection;
  return out;
}

TruncDiffOutcome find_truncated_differential(const CipherSpec& spec,
                                             const TruncDiffConfig& cfg,
                                             int arity_cap) {
  int reduced = spec.rounds() - 1;
  VectorBooleanFunction f = as_vector_function(spec, reduced, arity_cap);
  return find_truncated_differential(f, spec.reduced_key_bits(),
                                     gate_cost_model(spec, reduced), cfg);
}

ImpDiffOutcome find_impossible_differential(const CipherSpec& spec,
                                            std::uint64_t runs_per_component,
                                            std::uint64_t seed,
                                            int arity_cap) {
  const int n = spec.block_bits;
  const int r = spec.rounds();
  if (r < 3)
    throw std::invalid_argument("search needs at least three rounds");
  if (runs_per_component < 1)
    throw std::invalid_argument("need at least one run per component");

  ImpDiffOutcome out;
  out.predicted = predict_impdiff_resources(n, spec.reduced_key_bits(), r,
                                            gate_cost_model(spec, r - 1).total());

  for (int v = 1; v <= r - 2; ++v) {
    CipherSplit sp = split(spec, v, arity_cap);

    // Head side; a component admitting nothing beyond 0 aborts this split.
    std::vector<SampledComponent> head;
    bool head_broke = false;
    for (int j = 0; j < n; ++j) {
      SampledComponent c = sample_component(
          sp.head.components[static_cast<std::size_t>(j)], n,
          runs_per_component, component_seed(seed, (2 * v) * 64 + j),
          sp.head_costs.per_component[static_cast<std::size_t>(j)], out.ledger);
      if (c.space.trivial()) {
        head_broke = true;
        break;
      }
      head.push_back(std::move(c));
    }
    if (head_broke) continue;

    std::vector<Subspace> head_spaces;
    std::uint64_t head_alpha = 1;
    for (const auto& c : head) {
      head_spaces.push_back(c.space);
      head_alpha = std::max(head_alpha, c.space.size());
    }
    Subspace head_common = intersect_all(head_spaces);
    out.ledger.record_classical(intersection_op_cost(n, head_alpha));
    if (head_common.trivial()) continue;

    Word in_diff = *head_common.min_nonzero();
    Word head_out = 0;
    for (int j = 0; j < n; ++j)
      if (dot(in_diff, head[static_cast<std::size_t>(j)].witness))
        head_out |= Word{1} << j;

    // Tail side; no per-component abort on this side.
    std::vector<Subspace> tail_spaces;
    std::vector<Word> tail_witness;
    std::uint64_t tail_alpha = 1;
    for (int j = 0; j < n; ++j) {
      SampledComponent c = sample_component(
          sp.tail.components[static_cast<std::size_t>(j)], n,
          runs_per_component, component_seed(seed, (2 * v + 1) * 64 + j),
          sp.tail_costs.per_component[static_cast<std::size_t>(j)], out.ledger);
      tail_alpha = std::max(tail_alpha, c.space.size());
      tail_spaces.push_back(c.space);
      tail_witness.push_back(c.witness);
    }
    Subspace tail_common = intersect_all(tail_spaces);
    out.ledger.record_classical(intersection_op_cost(n, tail_alpha));

    // The tail vector may legitimately be 0; prefer a nonzero member and
    // flag the degenerate fallback.
    ImpossibleResult res;
    res.split_round = v;
    res.input_diff = in_diff;
    res.head_output_diff = head_out;
    auto nz = tail_common.min_nonzero();
    res.tail_input_diff = nz.value_or(0);
    res.trivial_tail = !nz.has_value();
    Word tail_out = 0;
    for (int j = 0; j < n; ++j)
      if (dot(res.tail_input_diff, tail_witness[static_cast<std::size_t>(j)]))
        tail_out |= Word{1} << j;
    res.output_diff = tail_out;
    res.flag = head_out != res.tail_input_diff ? 0 : 1;
    out.result = res;
    return out;
  }
  return out;
}

nlohmann::json finding_to_json(const TruncatedDifferential& td,
                               const Rational& sigma, std::uint64_t q_value,
                               const ResourceLedger& ledger,
                               const Alg2Prediction& predicted) {
  nlohmann::json j{{"type", "truncated"},
                   {"a_hex", word_to_hex(td.input_diff, td.output.width)},
                   {"b_trits", td.output.to_string()},
                   {"t", td.predicted_bits},
                   {"sn", td.signal_noise.to_string()},
                   {"sigma", sigma.to_string()},
                   {"q", q_value},
                   {"components", td.component_set}};
  j["ledger"] = ledger.to_json();
  j["ledger"]["formula_predicted"] = predicted.to_json();
  return j;
}

nlohmann::json finding_to_json(const ImpossibleResult& ir, int block_bits,
                               const ResourceLedger& ledger,
                               const Alg3Prediction& predicted) {
  nlohmann::json j{{"type", "impossible"},
                   {"a_hex", word_to_hex(ir.input_diff, block_bits)},
                   {"dy_hex", word_to_hex(ir.output_diff, block_bits)},
                   {"flag", ir.flag},
                   {"split_v", ir.split_round},
                   {"trivial_tail", ir.trivial_tail}};
  j["ledger"] = ledger.to_json();
  j["ledger"]["formula_predicted"] = predicted.to_json();
  return j;
}

}  // namespace bvdiff
