#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "bvdiff/cipher.hpp"

namespace bvdiff {

namespace {

using Sbox = std::array<std::uint8_t, 16>;

// Exact structure sets of a 4-bit permutation: directions d with
// S(x^d)^S(x) constant over all x.
std::vector<int> sbox_structures(const Sbox& s) {
  std::vector<int> out;
  for (int d = 0; d < 16; ++d) {
    int c = s[static_cast<std::size_t>(d)] ^ s[0];
    bool constant = true;
    for (int x = 0; x < 16 && constant; ++x)
      constant = (s[static_cast<std::size_t>(x ^ d)] ^
                  s[static_cast<std::size_t>(x)]) == c;
    if (constant) out.push_back(d);
  }
  return out;
}

// Basis of a complement of span{a} in F2^4.
std::vector<int> complement_basis(int a) {
  std::vector<int> basis{a};
  std::vector<int> comp;
  for (int cand : {1, 2, 4, 8, 3, 5, 6, 9, 10, 12, 7, 11, 13, 14, 15}) {
    // Independence check by Gaussian elimination over the small set.
    std::vector<int> rows = basis;
    rows.push_back(cand);
    int rank = 0;
    for (int bit = 3; bit >= 0; --bit) {
      int pivot = -1;
      for (std::size_t i = static_cast<std::size_t>(rank); i < rows.size(); ++i)
        if ((rows[i] >> bit) & 1) {
          pivot = static_cast<int>(i);
          break;
        }
      if (pivot < 0) continue;
      std::swap(rows[static_cast<std::size_t>(rank)],
                rows[static_cast<std::size_t>(pivot)]);
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (static_cast<int>(i) != rank && ((rows[i] >> bit) & 1))
          rows[i] ^= rows[static_cast<std::size_t>(rank)];
      ++rank;
    }
    if (rank == static_cast<int>(rows.size())) {
      basis.push_back(cand);
      comp.push_back(cand);
      if (comp.size() == 3) break;
    }
  }
  return comp;
}

// 4-bit permutation with S(x^a)^S(x) = b for all x and no other nonzero
// structure. Write x = u ^ e*a over a complement U of {0,a}; then
// S(u ^ e*a) = g(u) ^ e*b with g a bijection from U onto a complement of
// {0,b} makes the translation by a commute into a translation by b.
Sbox planted_sbox(int a, int b, std::mt19937_64& rng) {
  if (a < 1 || a > 15 || b < 1 || b > 15)
    throw std::invalid_argument("planted structure needs nonzero a, b");
  auto ubasis = complement_basis(a);
  auto vbasis = complement_basis(b);
  for (int attempt = 0; attempt < 4096; ++attempt) {
    std::array<int, 8> shuffle{};
    for (int i = 0; i < 8; ++i) shuffle[static_cast<std::size_t>(i)] = i;
    for (int i = 7; i > 0; --i) {
      int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(shuffle[static_cast<std::size_t>(i)],
                shuffle[static_cast<std::size_t>(j)]);
    }
    Sbox s{};
    for (int iu = 0; iu < 8; ++iu) {
      int u = 0;
      for (int t = 0; t < 3; ++t)
        if ((iu >> t) & 1) u ^= ubasis[static_cast<std::size_t>(t)];
      int iv = shuffle[static_cast<std::size_t>(iu)];
      int v = 0;
      for (int t = 0; t < 3; ++t)
        if ((iv >> t) & 1) v ^= vbasis[static_cast<std::size_t>(t)];
      s[static_cast<std::size_t>(u)] = static_cast<std::uint8_t>(v);
      s[static_cast<std::size_t>(u ^ a)] = static_cast<std::uint8_t>(v ^ b);
    }
    auto st = sbox_structures(s);
    if (st.size() == 2 && st[0] == 0 && st[1] == a) return s;
  }
  throw std::logic_error("planted sbox search exhausted");
}

// Random 4-bit permutation whose only structure is 0.
Sbox structure_free_sbox(std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 65536; ++attempt) {
    Sbox s{};
    for (int i = 0; i < 16; ++i) s[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(i);
    for (int i = 15; i > 0; --i) {
      int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j)]);
    }
    auto st = sbox_structures(s);
    if (st.size() == 1 && st[0] == 0) return s;
  }
  throw std::logic_error("structure-free sbox search exhausted");
}

std::vector<std::uint8_t> identity_perm(int n) {
  std::vector<std::uint8_t> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] =
      static_cast<std::uint8_t>(i);
  return p;
}

// Fixed cell-crossing bit permutation: rotate the block left by one bit.
std::vector<std::uint8_t> rotation_perm(int n) {
  std::vector<std::uint8_t> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    p[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>((i + n - 1) % n);
  return p;
}

std::vector<std::uint8_t> positions(std::initializer_list<int> list) {
  std::vector<std::uint8_t> out;
  for (int p : list) out.push_back(static_cast<std::uint8_t>(p));
  return out;
}

// Identity map from the low cell into the cell above it; other rows empty.
std::vector<Word> low_to_high_tap(int n) {
  std::vector<Word> rows(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < 4; ++i)
    rows[static_cast<std::size_t>(4 + i)] = Word{1} << i;
  return rows;
}

struct PlantChain {
  std::vector<int> diffs;  // planted difference entering each round
};

// Builds 8-bit SPN fixtures round by round. Cell 0 (bits 0-3) and cell 1
// (bits 4-7) are configured independently; plant[i] marks the rounds whose
// cell-i sbox carries the next link of a planted difference chain.
struct ToySpnBuilder {
  std::mt19937_64 rng;
  CipherSpec spec;
  PlantChain chain_low, chain_high;

  explicit ToySpnBuilder(std::uint64_t seed) : rng(seed) {
    spec.topology = Topology::spn;
    spec.block_bits = 8;
  }

  int next_nonzero() { return 1 + static_cast<int>(rng() % 15); }

  void add_round(bool plant_low, bool plant_high, bool tapped,
                 int subkey_width, std::vector<std::uint8_t> key_pos) {
    RoundSpec rs;
    if (plant_low) {
      int in = chain_low.diffs.empty() ? next_nonzero() : chain_low.diffs.back();
      if (chain_low.diffs.empty()) chain_low.diffs.push_back(in);
      int out = next_nonzero();
      rs.sboxes.push_back(planted_sbox(in, out, rng));
      chain_low.diffs.push_back(out);
    } else {
      rs.sboxes.push_back(structure_free_sbox(rng));
    }
    if (plant_high) {
      int in = chain_high.diffs.empty() ? next_nonzero() : chain_high.diffs.back();
      if (chain_high.diffs.empty()) chain_high.diffs.push_back(in);
      int out = next_nonzero();
      rs.sboxes.push_back(planted_sbox(in, out, rng));
      chain_high.diffs.push_back(out);
    } else {
      rs.sboxes.push_back(structure_free_sbox(rng));
    }
    rs.perm = identity_perm(8);
    if (tapped) {
      rs.perm.clear();
      rs.tap_rows = low_to_high_tap(8);
    }
    rs.subkey_width = subkey_width;
    rs.key_positions = std::move(key_pos);
    spec.round_specs.push_back(std::move(rs));
  }
};

CipherSpec make_random_spn(const std::string& name, int n, int rounds,
                           int subkey_width, std::vector<std::uint8_t> key_pos,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CipherSpec spec;
  spec.name = name;
  spec.topology = Topology::spn;
  spec.block_bits = n;
  for (int i = 0; i < rounds; ++i) {
    RoundSpec rs;
    for (int c = 0; c < n / 4; ++c) rs.sboxes.push_back(structure_free_sbox(rng));
    rs.perm = rotation_perm(n);
    rs.subkey_width = subkey_width;
    rs.key_positions = key_pos;
    spec.round_specs.push_back(std::move(rs));
  }
  spec.validate();
  return spec;
}

CipherSpec make_feistel(const std::string& name, int n, int rounds,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CipherSpec spec;
  spec.name = name;
  spec.topology = Topology::feistel;
  spec.block_bits = n;
  int h = n / 2;
  for (int i = 0; i < rounds; ++i) {
    RoundSpec rs;
    for (int c = 0; c < h / 4; ++c) rs.sboxes.push_back(structure_free_sbox(rng));
    rs.subkey_width = h;
    std::vector<std::uint8_t> pos;
    for (int b = 0; b < h; ++b) pos.push_back(static_cast<std::uint8_t>(b));
    rs.key_positions = std::move(pos);
    spec.round_specs.push_back(std::move(rs));
  }
  spec.validate();
  return spec;
}

// Truncated-differential target: cell 0 carries a planted chain through
// every round, cell 1 is structure free and absorbs a copy of cell 0's
// round input. The reduced cipher then maps the planted difference to a
// difference that is constant on the low four output bits and varying on
// the high four.
CipherSpec make_planted_ls(const std::string& name, int rounds,
                           int subkey_width,
                           std::vector<std::uint8_t> key_pos,
                           std::uint64_t seed, PlantInfo& info) {
  ToySpnBuilder b(seed);
  b.spec.name = name;
  for (int i = 0; i < rounds; ++i)
    b.add_round(true, false, true, subkey_width, key_pos);
  b.spec.validate();
  info.input_diff = static_cast<Word>(b.chain_low.diffs.front());
  info.predicted_bits =
      static_cast<Word>(b.chain_low.diffs[static_cast<std::size_t>(rounds - 1)]);
  info.predicted_mask = 0xf;
  return b.spec;
}

// Mismatched probability-1 halves at the split after round 1: the head
// chain lives in cell 0 of round 1, the tail chain in cell 1 of round 2.
CipherSpec make_planted_miss(const std::string& name, std::uint64_t seed,
                             PlantInfo& info) {
  ToySpnBuilder b(seed);
  b.spec.name = name;
  b.add_round(true, false, false, 4, positions({0, 1, 4, 5}));
  b.add_round(false, true, false, 4, positions({0, 1, 4, 5}));
  b.add_round(false, false, false, 4, positions({0, 1, 4, 5}));
  b.spec.validate();
  info.input_diff = static_cast<Word>(b.chain_low.diffs[0]);
  info.predicted_bits = static_cast<Word>(b.chain_low.diffs[1]);
  info.predicted_mask = 0xf;
  info.tail_input_diff = static_cast<Word>(b.chain_high.diffs[0]) << 4;
  info.tail_output_diff = static_cast<Word>(b.chain_high.diffs[1]) << 4;
  return b.spec;
}

// Matched probability-1 halves: both cells carry chains through rounds 1
// and 2, so the tail's planted input difference equals the head's planted
// output difference.
CipherSpec make_planted_match(const std::string& name, std::uint64_t seed,
                              PlantInfo& info) {
  ToySpnBuilder b(seed);
  b.spec.name = name;
  b.add_round(true, true, false, 4, positions({0, 1, 4, 5}));
  b.add_round(true, true, false, 4, positions({0, 1, 4, 5}));
  b.add_round(false, false, false, 4, positions({0, 1, 4, 5}));
  b.spec.validate();
  info.input_diff = static_cast<Word>(b.chain_low.diffs[0]);
  info.predicted_bits = static_cast<Word>(b.chain_low.diffs[1]);
  info.predicted_mask = 0xf;
  info.tail_input_diff = static_cast<Word>(b.chain_low.diffs[1]);
  info.tail_output_diff = static_cast<Word>(b.chain_low.diffs[2]);
  return b.spec;
}

struct ZooEntry {
  CipherSpec spec;
  PlantInfo info;
};

const std::map<std::string, ZooEntry>& zoo() {
  static const std::map<std::string, ZooEntry> entries = [] {
    std::map<std::string, ZooEntry> m;
    PlantInfo none;

    m["feistel-8"] = {make_feistel("feistel-8", 8, 4, 0xfe157e1800000008ULL), none};
    m["feistel-16"] = {make_feistel("feistel-16", 16, 4, 0xfe157e1800000016ULL), none};
    m["spn-8"] = {make_random_spn("spn-8", 8, 3, 4, positions({0, 1, 4, 5}),
                                  0x5b4e800000000008ULL),
                  none};
    m["spn-16"] = {make_random_spn("spn-16", 16, 3, 4,
                                   positions({0, 4, 8, 12}),
                                   0x5b4e800000000016ULL),
                   none};
    m["random-8"] = {make_random_spn("random-8", 8, 3, 4,
                                     positions({0, 1, 4, 5}),
                                     0xc0174300000000a1ULL),
                     none};
    m["random-8-r4"] = {make_random_spn("random-8-r4", 8, 4, 2,
                                        positions({0, 4}),
                                        0xc0174300000000a2ULL),
                        none};

    PlantInfo info;
    CipherSpec spec = make_planted_ls("planted-ls-8", 3, 4,
                                      positions({0, 1, 4, 5}),
                                      0x9827f100000000b1ULL, info);
    m["planted-ls-8"] = {spec, info};
    spec = make_planted_ls("planted-ls-8-r4", 4, 2, positions({0, 4}),
                           0x9827f100000000b2ULL, info);
    m["planted-ls-8-r4"] = {spec, info};
    spec = make_planted_miss("planted-miss-8", 0x7a11ad00000000c1ULL, info);
    m["planted-miss-8"] = {spec, info};
    spec = make_planted_match("planted-match-8", 0x7a11ad00000000c2ULL, info);
    m["planted-match-8"] = {spec, info};
    return m;
  }();
  return entries;
}

}  // namespace

CipherSpec cipher_zoo(const std::string& name) {
  auto it = zoo().find(name);
  if (it == zoo().end())
    throw std::invalid_argument("unknown cipher: " + name);
  return it->second.spec;
}

std::vector<std::string> cipher_zoo_names() {
  std::vector<std::string> names;
  for (const auto& [name, entry] : zoo()) names.push_back(name);
  return names;
}

PlantInfo planted_ground_truth(const std::string& name) {
  auto it = zoo().find(name);
  if (it == zoo().end())
    throw std::invalid_argument("unknown cipher: " + name);
  return it->second.info;
}

}  // namespace bvdiff
