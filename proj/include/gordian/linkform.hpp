#pragma once

// Linking forms on finite abelian groups of odd order.
//
// A LinkingForm is stored in invariant-factor form: the group is
// Z/d_1 + ... + Z/d_k with d_1 | d_2 | ... | d_k and every d_i > 1, and
// gram(i, j) is the Q/Z value of the pairing on the canonical generators.
// The trivial group has no orders and no gram entries.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "gordian/exactmat.hpp"

namespace gordian {

/// Coefficients with respect to the canonical generators; coeffs[i] is read
/// modulo the i-th order.
using GroupElement = std::vector<Integer>;

/// Bounds for exhaustive enumeration. `progress` is polled during long
/// searches with (work done, work total); returning false cancels the
/// search with CancelledError.
struct SearchLimits {
  std::uint64_t cap = 1'000'000;
  std::function<bool(std::uint64_t, std::uint64_t)> progress;
};

class LinkingForm {
 public:
  /// Trivial form.
  LinkingForm() = default;
  /// Validates the invariant-factor and symmetry invariants.
  LinkingForm(std::vector<Integer> orders, std::vector<QmodZ> gram);

  /// lambda(Q) on coker(Q): (v, w) -> v^T Q^{-1} w mod 1. Q must be
  /// symmetric with odd nonzero determinant.
  static LinkingForm from_symmetric(const IntMatrix& q);

  /// Re-presents a form on Z/o_1 + ... + Z/o_m (any positive o_i, no
  /// divisibility needed) in invariant-factor form.
  static LinkingForm from_presentation(const std::vector<Integer>& orders,
                                       const std::vector<QmodZ>& gram);

  static LinkingForm direct_sum(const LinkingForm& a, const LinkingForm& b);
  LinkingForm negate() const;
  /// 2 * lk on the same group.
  LinkingForm doubled() const;

  const std::vector<Integer>& orders() const noexcept { return orders_; }
  std::size_t rank() const noexcept { return orders_.size(); }
  const QmodZ& gram(std::size_t i, std::size_t j) const { return gram_[i * rank() + j]; }
  const std::vector<QmodZ>& gram() const noexcept { return gram_; }

  /// Group order, the product of the invariant factors.
  Integer order() const;
  bool cyclic() const noexcept { return rank() <= 1; }

  QmodZ evaluate(const GroupElement& x, const GroupElement& y) const;

  /// Brute-force check that v -> lk(v, .) is injective.
  bool nondegenerate(const SearchLimits& limits = {}) const;

  GroupElement zero() const { return GroupElement(rank(), Integer(0)); }

  friend bool operator==(const LinkingForm&, const LinkingForm&) = default;

 private:
  std::vector<Integer> orders_;
  std::vector<QmodZ> gram_;
};

/// True iff `elems` generate the whole group (Smith form of the generators
/// together with the relations).
bool generates(const LinkingForm& form, const std::vector<GroupElement>& elems);

/// Self-linking values lk(g, g) over all single generators g, sorted and
/// deduplicated. Empty for non-cyclic groups; {0} for the trivial group.
std::vector<QmodZ> generator_self_links(const LinkingForm& form, const SearchLimits& limits = {});

/// Machine-integer view of a form for exhaustive enumeration. Elements are
/// addressed by mixed-radix index; values are numerators over the group
/// exponent N (the largest invariant factor).
class EnumeratedForm {
 public:
  /// Throws CapExceededError if the group order exceeds `cap`.
  EnumeratedForm(const LinkingForm& form, std::uint64_t cap);

  std::int64_t size() const noexcept { return size_; }
  std::int64_t exponent() const noexcept { return exponent_; }
  std::size_t rank() const noexcept { return orders_.size(); }
  const std::vector<std::int64_t>& orders() const noexcept { return orders_; }

  void decode(std::int64_t index, std::int64_t* coeffs) const;
  GroupElement element(std::int64_t index) const;

  /// Pairing numerator in [0, N).
  std::int64_t pair(const std::int64_t* x, const std::int64_t* y) const;
  std::int64_t self(std::int64_t index) const;

  /// Numerator of `q` over N, or -1 when the denominator of q does not divide N.
  std::int64_t numerator_of(const QmodZ& q) const;

  /// Number of invariant factors divisible by p.
  std::size_t p_rank(std::int64_t p) const;
  /// Primes dividing the group order.
  const std::vector<std::int64_t>& primes() const noexcept { return primes_; }

  /// Whether the elements at `indices` generate the group, decided prime by
  /// prime on H/pH.
  bool generates(const std::vector<std::int64_t>& indices) const;

 private:
  std::vector<std::int64_t> orders_;
  std::vector<std::int64_t> gram_;
  std::vector<std::int64_t> primes_;
  std::int64_t exponent_ = 1;
  std::int64_t size_ = 1;
};

}  // namespace gordian
