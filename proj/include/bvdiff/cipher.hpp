#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bvdiff/boolfn.hpp"
#include "bvdiff/bvsim.hpp"

#include "json.hpp"

namespace bvdiff {

enum class Topology { spn, feistel };

// One round of a toy cipher.
//
// SPN round on an n-bit block split into 4-bit cells:
//   u = x ^ expand(k);  s = sbox-layer(u);  y = perm(s) ^ taps(x)
// where expand places the round subkey at key_positions, perm moves input
// bit perm[i] to output bit i, and taps XOR a linear function of the round
// input into the output (tap_rows[i] is the input mask feeding output bit
// i). Taps may only read cells strictly below the cell they write and are
// only allowed with the identity permutation, which keeps the round
// invertible cell by cell.
//
// Feistel round on halves (L, R):
//   (L, R) -> (R, L ^ f(R ^ expand(k))),  f = sbox layer on the half.
struct RoundSpec {
  std::vector<std::array<std::uint8_t, 16>> sboxes;
  std::vector<std::uint8_t> perm;          // SPN only; empty = identity
  std::vector<Word> tap_rows;              // SPN only; empty = no taps
  int subkey_width = 0;
  std::vector<std::uint8_t> key_positions; // size subkey_width
};

class CipherSpec {
 public:
  std::string name;
  Topology topology = Topology::spn;
  int block_bits = 0;
  std::vector<RoundSpec> round_specs;
  // Circuit-size metadata: per component, per round.
  std::uint64_t component_gate_cost = 4;

  int rounds() const { return static_cast<int>(round_specs.size()); }
  int master_key_bits() const;
  // Key bits of the reduced cipher (all rounds but the last).
  int reduced_key_bits() const { return key_bits_through(rounds() - 1); }
  int key_bits_through(int t) const;
  int last_round_key_bits() const {
    return round_specs.back().subkey_width;
  }

  void validate() const;

  nlohmann::json to_json() const;
  static CipherSpec from_json(const nlohmann::json& j);
};

// Rounds 1..t under the t-round key prefix (width key_bits_through(t)).
Word encrypt_reduced(const CipherSpec& spec, int t, Word x, Word key);
Word decrypt_reduced(const CipherSpec& spec, int t, Word y, Word key);
Word encrypt_full(const CipherSpec& spec, Word x, Word master_key);

// Inverts only the final round under its subkey.
Word last_round_decrypt(const CipherSpec& spec, Word subkey, Word y);

// Keyless view of the t-round reduction: component j of the result is bit
// j of encrypt_reduced over the joint input (x in the low n bits, the key
// prefix above). Throws when n + key bits exceed the table cap.
VectorBooleanFunction as_vector_function(const CipherSpec& spec, int t,
                                         int arity_cap = 24);

// Gate-cost metadata for the t-round keyless view.
GateCostModel gate_cost_model(const CipherSpec& spec, int t);

// Reduced cipher split at round v: head = rounds 1..v on (x, k1),
// tail = rounds v+1..r-1 on (x, k2), middle key widths l + h = m.
struct CipherSplit {
  int v = 0;
  int head_key_bits = 0;
  int tail_key_bits = 0;
  VectorBooleanFunction head;
  VectorBooleanFunction tail;
  GateCostModel head_costs;
  GateCostModel tail_costs;
};

CipherSplit split(const CipherSpec& spec, int v, int arity_cap = 24);

Word tail_encrypt(const CipherSpec& spec, int v, Word x, Word tail_key);

// Built-in toy cipher zoo. Known names:
//   feistel-8, feistel-16, spn-8, spn-16,
//   planted-ls-8, planted-ls-8-r4   (truncated-differential targets),
//   planted-miss-8                  (mismatched probability-1 halves),
//   planted-match-8                 (matched probability-1 halves),
//   random-8, random-8-r4           (structure-free negative controls).
CipherSpec cipher_zoo(const std::string& name);
std::vector<std::string> cipher_zoo_names();

// Ground truth for the planted families, derived from construction.
struct PlantInfo {
  Word input_diff = 0;        // nonzero difference with planted behaviour
  Word predicted_bits = 0;    // constant output-difference bits
  Word predicted_mask = 0;    // which output bits are constant
  Word tail_input_diff = 0;   // planted-miss/match: tail-half difference
  Word tail_output_diff = 0;
};
PlantInfo planted_ground_truth(const std::string& name);

}  // namespace bvdiff
