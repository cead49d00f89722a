#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bvdiff/bits.hpp"

namespace bvdiff {

// System of parity equations {x . coeff = rhs} over F2^width. Rows are
// single words; width <= 32 by project convention.
struct LinearSystemGF2 {
  int width = 0;
  struct Row {
    Word coeff;
    int rhs;
  };
  std::vector<Row> rows;
};

// Solution set in particular-plus-nullspace form. When not empty, the
// members are particular ^ span(basis); basis vectors are independent and
// kept in echelon form (distinct leading bits).
struct AffineSolutionSet {
  int width = 0;
  bool empty = true;
  Word particular = 0;
  std::vector<Word> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  std::uint64_t size() const {
    return empty ? 0 : (std::uint64_t{1} << basis.size());
  }
  bool contains(Word x) const;
};

AffineSolutionSet solve(const LinearSystemGF2& system);

// Linear subspace in echelon basis form; always contains 0.
struct Subspace {
  int width = 0;
  std::vector<Word> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  std::uint64_t size() const { return std::uint64_t{1} << basis.size(); }
  bool contains(Word x) const;
  bool trivial() const { return basis.empty(); }

  // Numerically smallest nonzero member under the word encoding, i.e. the
  // lexicographically smallest reading coordinates from x_1 up. Empty for
  // the zero space.
  std::optional<Word> min_nonzero() const;

  std::vector<std::string> debug_hex_rows() const;
};

Subspace whole_space(int width);
Subspace zero_space(int width);
Subspace span_of(int width, const std::vector<Word>& vectors);

// {x : x.w is one common value across all w in H}; equals the union of the
// i=0 and i=1 solution sets of {x.w = i | w in H} and is itself linear.
// The common value for a member x is recoverable as x.H[0].
Subspace common_derivative_space(int width, const std::vector<Word>& h);

Subspace intersect(const Subspace& a, const Subspace& b);
Subspace intersect_all(const std::vector<Subspace>& spaces);

// All members in ascending word order; throws when 2^dim exceeds cap.
std::vector<Word> enumerate_members(const AffineSolutionSet& s,
                                    std::uint64_t cap);
std::vector<Word> enumerate_members(const Subspace& s, std::uint64_t cap);

}  // namespace bvdiff
