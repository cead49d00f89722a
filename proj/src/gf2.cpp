#include "bvdiff/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace bvdiff {

namespace {

int lead_bit(Word v) { return 63 - std::countl_zero(v); }

// Reduce v against an echelon basis (distinct leading bits, sorted by
// descending lead). Returns the residue.
Word reduce(const std::vector<Word>& basis, Word v) {
  for (Word b : basis) {
    Word lead = Word{1} << lead_bit(b);
    if (v & lead) v ^= b;
  }
  return v;
}

// Insert v into an echelon basis; returns false if dependent.
bool basis_insert(std::vector<Word>& basis, Word v) {
  v = reduce(basis, v);
  if (v == 0) return false;
  basis.push_back(v);
  std::sort(basis.begin(), basis.end(), std::greater<Word>());
  return true;
}

}  // namespace

bool AffineSolutionSet::contains(Word x) const {
  if (empty) return false;
  return reduce(basis, x ^ particular) == 0;
}

AffineSolutionSet solve(const LinearSystemGF2& system) {
  const int width = system.width;
  if (width < 1 || width > 32)
    throw std::invalid_argument("system width must be in [1, 32]");

  // Echelonize augmented rows; pivot on the highest coefficient bit.
  std::vector<Word> coeffs;   // pivot rows, descending lead
  std::vector<int> rhs;
  AffineSolutionSet out;
  out.width = width;
  for (const auto& row : system.rows) {
    if (row.coeff >= (Word{1} << width))
      throw std::invalid_argument("row coefficient exceeds system width");
    Word c = row.coeff;
    int b = row.rhs & 1;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      Word lead = Word{1} << lead_bit(coeffs[i]);
      if (c & lead) {
        c ^= coeffs[i];
        b ^= rhs[i];
      }
    }
    if (c == 0) {
      if (b != 0) return out;  // inconsistent; empty set
      continue;
    }
    coeffs.push_back(c);
    rhs.push_back(b);
    // Keep rows ordered by descending lead and fully reduced.
    for (std::size_t i = coeffs.size(); i-- > 1;) {
      if (lead_bit(coeffs[i]) > lead_bit(coeffs[i - 1])) {
        std::swap(coeffs[i], coeffs[i - 1]);
        std::swap(rhs[i], rhs[i - 1]);
      }
    }
  }
  // Back-substitute to reduced row echelon form.
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    Word lead = Word{1} << lead_bit(coeffs[i]);
    for (std::size_t k = 0; k < i; ++k) {
      if (coeffs[k] & lead) {
        coeffs[k] ^= coeffs[i];
        rhs[k] ^= rhs[i];
      }
    }
  }

  out.empty = false;
  Word pivot_mask = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    Word lead = Word{1} << lead_bit(coeffs[i]);
    pivot_mask |= lead;
    if (rhs[i]) out.particular |= lead;
  }
  // Null-space basis: one vector per free position, re-echelonized so the
  // leading bits stay distinct (several null vectors may share a pivot as
  // their top bit otherwise).
  for (int q = 0; q < width; ++q) {
    Word qbit = Word{1} << q;
    if (pivot_mask & qbit) continue;
    Word v = qbit;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] & qbit) v |= Word{1} << lead_bit(coeffs[i]);
    }
    basis_insert(out.basis, v);
  }
  return out;
}

bool Subspace::contains(Word x) const { return reduce(basis, x) == 0; }

std::optional<Word> Subspace::min_nonzero() const {
  if (basis.empty()) return std::nullopt;
  // With distinct leading bits, the member with the smallest leading bit
  // is the numeric minimum: every other nonzero member tops out at a
  // strictly higher lead.
  return basis.back();
}

std::vector<std::string> Subspace::debug_hex_rows() const {
  std::vector<std::string> out;
  out.reserve(basis.size());
  for (Word b : basis) out.push_back(word_to_hex(b, width));
  return out;
}

Subspace whole_space(int width) {
  Subspace s;
  s.width = width;
  for (int i = width; i-- > 0;) s.basis.push_back(Word{1} << i);
  return s;
}

Subspace zero_space(int width) {
  Subspace s;
  s.width = width;
  return s;
}

Subspace span_of(int width, const std::vector<Word>& vectors) {
  Subspace s;
  s.width = width;
  for (Word v : vectors) basis_insert(s.basis, v);
  return s;
}

Subspace common_derivative_space(int width, const std::vector<Word>& h) {
  if (h.empty())
    throw std::invalid_argument("constraint family must be nonempty");
  LinearSystemGF2 sys;
  sys.width = width;
  for (Word w : h) sys.rows.push_back({w ^ h.front(), 0});
  AffineSolutionSet sol = solve(sys);
  Subspace s;
  s.width = width;
  s.basis = sol.basis;  // homogeneous: particular = 0, never empty
  return s;
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.width != b.width)
    throw std::invalid_argument("subspace width mismatch");
  // Intersection as the null space of the stacked dual constraints.
  LinearSystemGF2 dual_a, dual_b;
  dual_a.width = dual_b.width = a.width;
  for (Word v : a.basis) dual_a.rows.push_back({v, 0});
  for (Word v : b.basis) dual_b.rows.push_back({v, 0});
  AffineSolutionSet ann_a = solve(dual_a.rows.empty()
                                      ? LinearSystemGF2{a.width, {{0, 0}}}
                                      : dual_a);
  AffineSolutionSet ann_b = solve(dual_b.rows.empty()
                                      ? LinearSystemGF2{b.width, {{0, 0}}}
                                      : dual_b);
  LinearSystemGF2 stacked;
  stacked.width = a.width;
  for (Word v : ann_a.basis) stacked.rows.push_back({v, 0});
  for (Word v : ann_b.basis) stacked.rows.push_back({v, 0});
  if (stacked.rows.empty()) stacked.rows.push_back({0, 0});
  AffineSolutionSet sol = solve(stacked);
  Subspace s;
  s.width = a.width;
  s.basis = sol.basis;
  return s;
}

Subspace intersect_all(const std::vector<Subspace>& spaces) {
  if (spaces.empty())
    throw std::invalid_argument("intersection of no subspaces");
  Subspace acc = spaces.front();
  for (std::size_t i = 1; i < spaces.size(); ++i)
    acc = intersect(acc, spaces[i]);
  return acc;
}

namespace {

std::vector<Word> span_members(Word offset, const std::vector<Word>& basis,
                               std::uint64_t cap) {
  if (basis.size() >= 63 || (std::uint64_t{1} << basis.size()) > cap)
    throw std::invalid_argument("member count exceeds enumeration cap");
  std::vector<Word> out;
  out.reserve(std::size_t{1} << basis.size());
  std::uint64_t combos = std::uint64_t{1} << basis.size();
  for (std::uint64_t m = 0; m < combos; ++m) {
    Word v = offset;
    for (std::size_t i = 0; i < basis.size(); ++i)
      if ((m >> i) & 1) v ^= basis[i];
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Word> enumerate_members(const AffineSolutionSet& s,
                                    std::uint64_t cap) {
  if (s.empty) return {};
  return span_members(s.particular, s.basis, cap);
}

std::vector<Word> enumerate_members(const Subspace& s, std::uint64_t cap) {
  return span_members(0, s.basis, cap);
}

}  // namespace bvdiff
