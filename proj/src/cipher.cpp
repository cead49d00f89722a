#include "bvdiff/cipher.hpp"

#include <stdexcept>

namespace bvdiff {

namespace {

int cell_of_bit(int bit) { return bit / 4; }

Word apply_sbox_layer(const std::vector<std::array<std::uint8_t, 16>>& boxes,
                      Word x, bool inverse) {
  Word y = 0;
  for (std::size_t c = 0; c < boxes.size(); ++c) {
    Word cell = (x >> (4 * c)) & 0xf;
    Word mapped;
    if (!inverse) {
      mapped = boxes[c][static_cast<std::size_t>(cell)];
    } else {
      mapped = 0;
      for (Word v = 0; v < 16; ++v)
        if (boxes[c][static_cast<std::size_t>(v)] == cell) {
          mapped = v;
          break;
        }
    }
    y |= mapped << (4 * c);
  }
  return y;
}

Word apply_perm(const std::vector<std::uint8_t>& perm, Word x, int n) {
  if (perm.empty()) return x;
  Word y = 0;
  for (int i = 0; i < n; ++i)
    y |= static_cast<Word>((x >> perm[static_cast<std::size_t>(i)]) & 1) << i;
  return y;
}

Word apply_perm_inverse(const std::vector<std::uint8_t>& perm, Word y, int n) {
  if (perm.empty()) return y;
  Word x = 0;
  for (int i = 0; i < n; ++i)
    x |= static_cast<Word>((y >> i) & 1) << perm[static_cast<std::size_t>(i)];
  return x;
}

Word apply_taps(const std::vector<Word>& taps, Word x, int n) {
  if (taps.empty()) return 0;
  Word y = 0;
  for (int i = 0; i < n; ++i)
    if (dot(taps[static_cast<std::size_t>(i)], x)) y |= Word{1} << i;
  return y;
}

Word expand_subkey(const RoundSpec& rs, Word subkey) {
  Word out = 0;
  for (int i = 0; i < rs.subkey_width; ++i)
    out |= static_cast<Word>((subkey >> i) & 1)
           << rs.key_positions[static_cast<std::size_t>(i)];
  return out;
}

Word spn_round(const RoundSpec& rs, int n, Word x, Word subkey) {
  Word u = x ^ expand_subkey(rs, subkey);
  Word s = apply_sbox_layer(rs.sboxes, u, false);
  return apply_perm(rs.perm, s, n) ^ apply_taps(rs.tap_rows, x, n);
}

Word spn_round_inverse(const RoundSpec& rs, int n, Word y, Word subkey) {
  // Taps read only cells below the one they write, so the round input is
  // recovered cell by cell from the bottom up.
  Word key = expand_subkey(rs, subkey);
  Word x = 0;
  int cells = n / 4;
  for (int c = 0; c < cells; ++c) {
    Word taps = apply_taps(rs.tap_rows, x, n);  // depends on cells < c only
    Word s = apply_perm_inverse(rs.perm, y ^ taps, n);
    Word u = apply_sbox_layer(rs.sboxes, s, true);
    Word cell = ((u ^ key) >> (4 * c)) & 0xf;
    x |= cell << (4 * c);
  }
  return x;
}

Word feistel_round(const RoundSpec& rs, int n, Word x, Word subkey) {
  int h = n / 2;
  Word mask = low_mask(h);
  Word left = x & mask;
  Word right = x >> h;
  Word fin = (right ^ expand_subkey(rs, subkey)) & mask;
  Word fout = apply_sbox_layer(rs.sboxes, fin, false) & mask;
  return right | ((left ^ fout) << h);
}

Word feistel_round_inverse(const RoundSpec& rs, int n, Word y, Word subkey) {
  int h = n / 2;
  Word mask = low_mask(h);
  Word right = y & mask;   // previous round's right half
  Word newl = y >> h;
  Word fin = (right ^ expand_subkey(rs, subkey)) & mask;
  Word fout = apply_sbox_layer(rs.sboxes, fin, false) & mask;
  return (newl ^ fout) | (right << h);
}

Word round_encrypt(const CipherSpec& spec, int round_idx, Word x, Word subkey) {
  const RoundSpec& rs = spec.round_specs[static_cast<std::size_t>(round_idx)];
  return spec.topology == Topology::spn
             ? spn_round(rs, spec.block_bits, x, subkey)
             : feistel_round(rs, spec.block_bits, x, subkey);
}

Word round_decrypt(const CipherSpec& spec, int round_idx, Word y, Word subkey) {
  const RoundSpec& rs = spec.round_specs[static_cast<std::size_t>(round_idx)];
  return spec.topology == Topology::spn
             ? spn_round_inverse(rs, spec.block_bits, y, subkey)
             : feistel_round_inverse(rs, spec.block_bits, y, subkey);
}

}  // namespace

int CipherSpec::master_key_bits() const { return key_bits_through(rounds()); }

int CipherSpec::key_bits_through(int t) const {
  int bits = 0;
  for (int i = 0; i < t; ++i)
    bits += round_specs[static_cast<std::size_t>(i)].subkey_width;
  return bits;
}

void CipherSpec::validate() const {
  if (block_bits < 4 || block_bits > 32 || block_bits % 4 != 0)
    throw std::invalid_argument("block size must be a multiple of 4 in [4, 32]");
  if (round_specs.empty()) throw std::invalid_argument("cipher needs rounds");
  int cells = block_bits / 4;
  for (const auto& rs : round_specs) {
    int fn_bits = topology == Topology::spn ? block_bits : block_bits / 2;
    int want_boxes = topology == Topology::spn ? cells : cells / 2;
    if (static_cast<int>(rs.sboxes.size()) != want_boxes)
      throw std::invalid_argument("wrong sbox count for the topology");
    for (const auto& box : rs.sboxes) {
      std::uint16_t seen = 0;
      for (int v = 0; v < 16; ++v) {
        if (box[static_cast<std::size_t>(v)] > 15)
          throw std::invalid_argument("sbox entry out of range");
        seen |= std::uint16_t{1} << box[static_cast<std::size_t>(v)];
      }
      if (seen != 0xffff)
        throw std::invalid_argument("sbox is not a permutation");
    }
    if (!rs.perm.empty()) {
      if (topology != Topology::spn)
        throw std::invalid_argument("bit permutations are SPN-only");
      if (static_cast<int>(rs.perm.size()) != block_bits)
        throw std::invalid_argument("permutation has wrong size");
      Word seen = 0;
      for (auto p : rs.perm) {
        if (p >= block_bits)
          throw std::invalid_argument("permutation index out of range");
        seen |= Word{1} << p;
      }
      if (seen != low_mask(block_bits))
        throw std::invalid_argument("permutation is not a bijection");
    }
    if (!rs.tap_rows.empty()) {
      if (topology != Topology::spn)
        throw std::invalid_argument("taps are SPN-only");
      if (!rs.perm.empty())
        throw std::invalid_argument(
            "taps require the identity bit permutation");
      if (static_cast<int>(rs.tap_rows.size()) != block_bits)
        throw std::invalid_argument("tap matrix has wrong row count");
      for (int i = 0; i < block_bits; ++i) {
        Word row = rs.tap_rows[static_cast<std::size_t>(i)];
        if (row >= (Word{1} << block_bits))
          throw std::invalid_argument("tap row exceeds block width");
        for (int b = 0; b < block_bits; ++b)
          if (((row >> b) & 1) && cell_of_bit(b) >= cell_of_bit(i))
            throw std::invalid_argument("taps must read strictly lower cells");
      }
    }
    if (rs.subkey_width < 0 || rs.subkey_width > fn_bits)
      throw std::invalid_argument("subkey width out of range");
    if (static_cast<int>(rs.key_positions.size()) != rs.subkey_width)
      throw std::invalid_argument("key position list has wrong size");
    for (auto p : rs.key_positions)
      if (p >= fn_bits)
        throw std::invalid_argument("key position out of range");
  }
}

Word encrypt_reduced(const CipherSpec& spec, int t, Word x, Word key) {
  if (t < 1 || t > spec.rounds())
    throw std::out_of_range("round count out of range");
  if (x >= (Word{1} << spec.block_bits))
    throw std::out_of_range("block exceeds cipher width");
  int offset = 0;
  for (int i = 0; i < t; ++i) {
    const RoundSpec& rs = spec.round_specs[static_cast<std::size_t>(i)];
    Word subkey = (key >> offset) & low_mask(rs.subkey_width);
    x = round_encrypt(spec, i, x, subkey);
    offset += rs.subkey_width;
  }
  return x;
}

Word decrypt_reduced(const CipherSpec& spec, int t, Word y, Word key) {
  if (t < 1 || t > spec.rounds())
    throw std::out_of_range("round count out of range");
  int offset = spec.key_bits_through(t);
  for (int i = t - 1; i >= 0; --i) {
    const RoundSpec& rs = spec.round_specs[static_cast<std::size_t>(i)];
    offset -= rs.subkey_width;
    Word subkey = (key >> offset) & low_mask(rs.subkey_width);
    y = round_decrypt(spec, i, y, subkey);
  }
  return y;
}

Word encrypt_full(const CipherSpec& spec, Word x, Word master_key) {
  return encrypt_reduced(spec, spec.rounds(), x, master_key);
}

Word last_round_decrypt(const CipherSpec& spec, Word subkey, Word y) {
  return round_decrypt(spec, spec.rounds() - 1, y, subkey);
}

Word tail_encrypt(const CipherSpec& spec, int v, Word x, Word tail_key) {
  int r = spec.rounds();
  if (v < 1 || v > r - 2) throw std::out_of_range("split round out of range");
  int offset = 0;
  for (int i = v; i < r - 1; ++i) {
    const RoundSpec& rs = spec.round_specs[static_cast<std::size_t>(i)];
    Word subkey = (tail_key >> offset) & low_mask(rs.subkey_width);
    x = round_encrypt(spec, i, x, subkey);
    offset += rs.subkey_width;
  }
  return x;
}

namespace {

VectorBooleanFunction materialize(int n, int in_bits,
                                  const std::function<Word(Word)>& f) {
  std::uint64_t domain = std::uint64_t{1} << in_bits;
  std::vector<std::vector<Word>> tables(
      static_cast<std::size_t>(n),
      std::vector<Word>(static_cast<std::size_t>((domain + 63) / 64), 0));
  for (std::uint64_t z = 0; z < domain; ++z) {
    Word y = f(z);
    for (int j = 0; j < n; ++j)
      if ((y >> j) & 1)
        tables[static_cast<std::size_t>(j)][z >> 6] |= Word{1} << (z & 63);
  }
  VectorBooleanFunction out;
  out.arity = in_bits;
  out.out_width = n;
  for (int j = 0; j < n; ++j)
    out.components.emplace_back(in_bits,
                                std::move(tables[static_cast<std::size_t>(j)]));
  return out;
}

}  // namespace

VectorBooleanFunction as_vector_function(const CipherSpec& spec, int t,
                                         int arity_cap) {
  if (t < 1 || t > spec.rounds())
    throw std::out_of_range("round count out of range");
  int in_bits = spec.block_bits + spec.key_bits_through(t);
  if (in_bits > arity_cap)
    throw std::invalid_argument("joint arity exceeds the truth-table cap");
  int n = spec.block_bits;
  return materialize(n, in_bits, [&](Word z) {
    Word x = z & low_mask(n);
    Word key = z >> n;
    return encrypt_reduced(spec, t, x, key);
  });
}

GateCostModel gate_cost_model(const CipherSpec& spec, int t) {
  GateCostModel m;
  m.per_component.assign(static_cast<std::size_t>(spec.block_bits),
                         spec.component_gate_cost * static_cast<std::uint64_t>(t));
  return m;
}

CipherSplit split(const CipherSpec& spec, int v, int arity_cap) {
  int r = spec.rounds();
  if (v < 1 || v > r - 2) throw std::out_of_range("split round out of range");
  CipherSplit out;
  out.v = v;
  out.head_key_bits = spec.key_bits_through(v);
  out.tail_key_bits = spec.reduced_key_bits() - out.head_key_bits;
  int n = spec.block_bits;
  if (n + out.head_key_bits > arity_cap || n + out.tail_key_bits > arity_cap)
    throw std::invalid_argument("split arity exceeds the truth-table cap");
  out.head = materialize(n, n + out.head_key_bits, [&](Word z) {
    return encrypt_reduced(spec, v, z & low_mask(n), z >> n);
  });
  out.tail = materialize(n, n + out.tail_key_bits, [&](Word z) {
    return tail_encrypt(spec, v, z & low_mask(n), z >> n);
  });
  out.head_costs.per_component.assign(
      static_cast<std::size_t>(n),
      spec.component_gate_cost * static_cast<std::uint64_t>(v));
  out.tail_costs.per_component.assign(
      static_cast<std::size_t>(n),
      spec.component_gate_cost * static_cast<std::uint64_t>(r - 1 - v));
  return out;
}

nlohmann::json CipherSpec::to_json() const {
  nlohmann::json rounds_json = nlohmann::json::array();
  for (const auto& rs : round_specs) {
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& box : rs.sboxes) {
      std::string hex;
      for (int v = 0; v < 16; ++v)
        hex.push_back("0123456789abcdef"[box[static_cast<std::size_t>(v)]]);
      boxes.push_back(hex);
    }
    nlohmann::json round{{"sboxes", boxes},
                         {"subkey_width", rs.subkey_width},
                         {"key_positions", rs.key_positions}};
    if (!rs.perm.empty()) round["perm"] = rs.perm;
    if (!rs.tap_rows.empty()) {
      nlohmann::json taps = nlohmann::json::array();
      for (Word row : rs.tap_rows) taps.push_back(word_to_hex(row, block_bits));
      round["taps"] = taps;
    }
    rounds_json.push_back(round);
  }
  return nlohmann::json{{"name", name},
                        {"topology", topology == Topology::spn ? "spn" : "feistel"},
                        {"block_bits", block_bits},
                        {"component_gate_cost", component_gate_cost},
                        {"rounds", rounds_json}};
}

CipherSpec CipherSpec::from_json(const nlohmann::json& j) {
  CipherSpec spec;
  spec.name = j.at("name").get<std::string>();
  std::string topo = j.at("topology").get<std::string>();
  if (topo == "spn")
    spec.topology = Topology::spn;
  else if (topo == "feistel")
    spec.topology = Topology::feistel;
  else
    throw std::invalid_argument("unknown topology tag: " + topo);
  spec.block_bits = j.at("block_bits").get<int>();
  spec.component_gate_cost = j.value("component_gate_cost", 4);
  for (const auto& round : j.at("rounds")) {
    RoundSpec rs;
    for (const auto& box_json : round.at("sboxes")) {
      std::string hex = box_json.get<std::string>();
      if (hex.size() != 16)
        throw std::invalid_argument("sbox hex must have 16 digits");
      std::array<std::uint8_t, 16> box{};
      for (int v = 0; v < 16; ++v) {
        box[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(
            word_from_hex(hex.substr(static_cast<std::size_t>(v), 1), 4));
      }
      rs.sboxes.push_back(box);
    }
    if (round.contains("perm"))
      rs.perm = round.at("perm").get<std::vector<std::uint8_t>>();
    if (round.contains("taps")) {
      for (const auto& row : round.at("taps"))
        rs.tap_rows.push_back(
            word_from_hex(row.get<std::string>(), spec.block_bits));
    }
    rs.subkey_width = round.at("subkey_width").get<int>();
    rs.key_positions =
        round.at("key_positions").get<std::vector<std::uint8_t>>();
    spec.round_specs.push_back(std::move(rs));
  }
  spec.validate();
  return spec;
}

}  // namespace bvdiff
