#pragma once

// Gordian-distance obstructions from the linking form of -J # K, together
// with the classical signature / s / tau / F_p-rank bounds.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gordian/exactmat.hpp"
#include "gordian/knots.hpp"
#include "gordian/linkform.hpp"
#include "gordian/table.hpp"

namespace gordian {

/// Symmetric 2x2 matrix [[a, c], [c, b]].
struct CandidateMatrix {
  Integer a, b, c;

  Integer det() const { return a * b - c * c; }
  IntMatrix matrix() const;
  std::string to_string() const;

  friend bool operator==(const CandidateMatrix&, const CandidateMatrix&) = default;
};

/// Matrices of determinant d in either reduced family of the 2x2 congruence
/// classification that are congruent to the identity mod 2 (as forms over
/// F_2: some diagonal entry is odd). The second family [[a, c], [c, 0]] has
/// determinant -c^2, so it only contributes for d = -c^2. d must be odd.
std::vector<CandidateMatrix> candidate_matrices(const Integer& d);

enum class ObstructionKind { d1, d2 };

/// inapplicable: hypothesis failed (non-coprime determinants);
/// holds: the necessary condition is satisfied, no bound follows;
/// violated: the bound d >= 2 (d1) or d >= 3 (d2) follows;
/// cap: the search was abandoned at the group-order cap.
enum class ObstructionStatus { inapplicable, holds, violated, cap };

std::string to_string(ObstructionStatus s);

struct GeneratorWitness {
  GroupElement generator;
  int eps = 1;
};

struct IsometryWitness {
  CandidateMatrix candidate;
  GroupElement v1, v2;
};

struct ObstructionVerdict {
  ObstructionKind kind = ObstructionKind::d1;
  bool violated = false;
  std::optional<std::variant<GeneratorWitness, IsometryWitness>> witness;
  std::string notes;
};

/// Single-crossing-change test on L = lk of -J # K: some generator g must
/// satisfy lk(g, g) = 2 eps / (detJ detK). eps = 0 tries both signs.
/// Throws PreconditionError if the determinants are not coprime or do not
/// match |L|.
ObstructionVerdict d1_obstruction(const LinkingForm& form, const Integer& det_j,
                                  const Integer& det_k, int eps = 0,
                                  const SearchLimits& limits = {});

struct IsometryResult {
  bool isometric = false;
  GroupElement v1, v2;
};

/// Decides whether lambda(C) is isometric to `doubled` (already 2 lk): looks
/// for v1, v2 generating the group with doubled(v_i, v_j) = (C^{-1})_{ij}.
IsometryResult lambda_isometric(const CandidateMatrix& c, const LinkingForm& doubled,
                                const SearchLimits& limits = {});

/// Two-crossing-change test: 2 lk must be isometric to lambda(C) for some C
/// in C_d or C_{-d}, d = detJ detK.
ObstructionVerdict d2_obstruction(const LinkingForm& form, const Integer& det_j,
                                  const Integer& det_k, const SearchLimits& limits = {});

/// Invariants of one knot expression. s, tau and the unknotting-number upper
/// bound are present only when every summand supplies them.
struct KnotInvariants {
  Integer det;
  int sigma = 0;
  std::optional<int> s;
  std::optional<int> tau;
  /// Sum of per-summand unknotting-number upper bounds.
  std::optional<int> u_upper;
  /// True when every summand has an exactly known unknotting number.
  bool u_exact = false;
  /// F_p-ranks for the primes p dividing det.
  std::map<std::int64_t, std::size_t> fp_ranks;
  LinkingForm form;
  std::size_t summands = 0;
  /// No summand is known to have bridge index > 2 and there is one summand.
  bool two_bridge = false;

  std::size_t fp_rank(std::int64_t p) const;
};

KnotInvariants compute_invariants(const KnotExpr& expr, const KnotTable& table);

struct ClassicalBounds {
  std::optional<int> sigma;
  std::optional<int> s;
  std::optional<int> tau;
  int fp = 0;
  /// Prime achieving the F_p-rank bound; absent when no prime divides
  /// detJ detK or every difference is zero.
  std::optional<std::int64_t> fp_prime;

  int best() const;
};

ClassicalBounds classical_bounds(const KnotInvariants& j, const KnotInvariants& k);

struct BoundReport {
  std::string knot_j;
  std::string knot_k;
  Integer det_j, det_k;
  bool coprime = false;
  bool same_knot = false;
  ClassicalBounds classical;
  /// Invariant factors of the linking form of -J # K.
  std::vector<Integer> group_orders;
  ObstructionStatus d1 = ObstructionStatus::inapplicable;
  ObstructionStatus d2 = ObstructionStatus::inapplicable;
  std::optional<ObstructionVerdict> d1_verdict;
  std::optional<ObstructionVerdict> d2_verdict;
  /// 2 when d1 is violated, 3 when d2 is violated.
  std::optional<int> linking_d1;
  std::optional<int> linking_d2;
  int lower = 0;
  std::optional<int> upper;
  bool exact = false;
  std::string verdict;
};

struct ReportOptions {
  SearchLimits limits;
  int eps = 0;
};

/// Evaluates every bound for the pair from precomputed invariants. The
/// linking form of -J # K is assembled as (-lk_J) + lk_K.
BoundReport report_from_invariants(const std::string& name_j, const KnotInvariants& j,
                                   const std::string& name_k, const KnotInvariants& k,
                                   const ReportOptions& options = {});

/// Full report for two expressions. Expressions naming the same knot (same
/// summands up to the mirror/reversal flags their table symmetry type makes
/// irrelevant) short-circuit to d = 0. Throws DataError when the best lower bound exceeds the upper bound.
BoundReport report(const KnotExpr& j, const KnotExpr& k, const KnotTable& table,
                   const ReportOptions& options = {});

}  // namespace gordian
