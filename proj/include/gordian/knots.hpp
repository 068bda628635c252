#pragma once

// Knot expressions and Seifert-matrix algebra.
//
// Grammar (whitespace ignored):
//   expr   := term ('#' term)*
//   term   := prefix* NAME
//   prefix := 'm' | 'r' | '-'
// 'm' toggles the mirror flag, 'r' toggles orientation reversal and '-'
// toggles both (the reversed mirror). "unknot" and "0_1" name the unknot.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gordian/exactmat.hpp"
#include "gordian/table.hpp"

namespace gordian {

struct Summand {
  std::string name;
  bool mirrored = false;
  bool reversed = false;

  friend bool operator==(const Summand&, const Summand&) = default;
  friend auto operator<=>(const Summand&, const Summand&) = default;
};

struct KnotExpr {
  std::vector<Summand> summands;

  /// -J: every summand mirrored and reversed.
  KnotExpr inverse() const;
  /// mJ
  KnotExpr mirror() const;
  KnotExpr reverse() const;
  static KnotExpr connected_sum(const KnotExpr& a, const KnotExpr& b);

  /// Canonical text, e.g. "m3_1 # 4_1". Unknot summands are dropped unless
  /// the whole expression is the unknot.
  std::string to_string() const;

  friend bool operator==(const KnotExpr&, const KnotExpr&) = default;
};

bool is_unknot_name(std::string_view name);

KnotExpr parse_expr(std::string_view text);

/// A validated Seifert matrix: square, even size, det(A - A^T) = 1 and
/// det(A + A^T) odd. The 0x0 matrix is the unknot.
class SeifertMatrix {
 public:
  SeifertMatrix() = default;
  /// Throws DataError if `a` violates the invariants.
  explicit SeifertMatrix(IntMatrix a);

  const IntMatrix& matrix() const noexcept { return a_; }
  std::size_t size() const noexcept { return a_.rows(); }
  /// A + A^T
  IntMatrix symmetrized() const;

  /// -A^T
  SeifertMatrix mirror() const;
  /// A^T
  SeifertMatrix reverse() const;
  static SeifertMatrix block_sum(const SeifertMatrix& a, const SeifertMatrix& b);

  friend bool operator==(const SeifertMatrix&, const SeifertMatrix&) = default;

 private:
  IntMatrix a_;
};

/// Block sum over summands; mirrors map to -A^T and reversals to A^T.
SeifertMatrix seifert_matrix(const KnotExpr& expr, const KnotTable& table);

/// |det(A + A^T)|
Integer knot_det(const SeifertMatrix& a);
int knot_signature(const SeifertMatrix& a);
/// Number of invariant factors of A + A^T divisible by p, i.e. the F_p-rank
/// of the first homology of the double branched cover.
std::size_t fp_rank(const SeifertMatrix& a, std::int64_t p);

/// Distinct prime factors in increasing order (trial division).
std::vector<std::int64_t> prime_factors(std::int64_t n);

}  // namespace gordian
