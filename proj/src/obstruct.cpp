#include "gordian/obstruct.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "gordian/error.hpp"

namespace gordian {

IntMatrix CandidateMatrix::matrix() const {
  IntMatrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = c;
  m(1, 0) = c;
  m(1, 1) = b;
  return m;
}

std::string CandidateMatrix::to_string() const {
  return "[[" + a.get_str() + "," + c.get_str() + "],[" + c.get_str() + "," + b.get_str() + "]]";
}

std::vector<CandidateMatrix> candidate_matrices(const Integer& d) {
  if (d == 0 || mpz_even_p(d.get_mpz_t()))
    throw ArgumentError("candidate determinant must be odd and nonzero, got " + d.get_str());
  const Integer abs_d = abs(d);
  std::vector<CandidateMatrix> raw;

  // First family: 0 < |a| <= |b| <= |d|, 0 <= c <= |a|/2. Since ab = d + c^2
  // and |b| >= |a|, 3a^2 <= 4|d| bounds the search.
  for (Integer abs_a = 1; 3 * abs_a * abs_a <= 4 * abs_d; ++abs_a) {
    for (int sign : {1, -1}) {
      const Integer a = sign * abs_a;
      for (Integer c = 0; 2 * c <= abs_a; ++c) {
        const Integer num = d + c * c;
        if (!mpz_divisible_p(num.get_mpz_t(), a.get_mpz_t())) continue;
        const Integer b = num / a;
        if (abs(b) < abs_a || abs(b) > abs_d) continue;
        raw.push_back({a, b, c});
      }
    }
  }
  // Second family: [[a, c], [c, 0]] with det = -c^2, c >= 0, |a| <= c.
  if (d < 0) {
    Integer c = sqrt(abs_d);
    if (c * c == abs_d)
      for (Integer a = -c; a <= c; ++a) raw.push_back({a, 0, c});
  }

  // With det odd the reduction mod 2 is a nondegenerate form over F_2, and
  // such a form is congruent to the identity iff it is not alternating,
  // i.e. some diagonal entry is odd. [[2,1],[1,3]] qualifies: it is
  // congruent over Z to [[3,2],[2,3]].
  std::vector<CandidateMatrix> out;
  for (auto& m : raw)
    if (mpz_odd_p(m.a.get_mpz_t()) || mpz_odd_p(m.b.get_mpz_t())) out.push_back(std::move(m));
  return out;
}

std::string to_string(ObstructionStatus s) {
  switch (s) {
    case ObstructionStatus::inapplicable: return "inapplicable";
    case ObstructionStatus::holds: return "holds";
    case ObstructionStatus::violated: return "violated";
    case ObstructionStatus::cap: return "cap";
  }
  return "?";
}

namespace {

void check_pair_preconditions(const LinkingForm& form, const Integer& det_j, const Integer& det_k) {
  if (det_j <= 0 || det_k <= 0 || mpz_even_p(det_j.get_mpz_t()) || mpz_even_p(det_k.get_mpz_t()))
    throw PreconditionError("determinants must be positive and odd");
  if (gcd(det_j, det_k) != 1)
    throw PreconditionError("determinants " + det_j.get_str() + " and " + det_k.get_str() +
                            " are not coprime");
  if (form.order() != det_j * det_k)
    throw PreconditionError("group order " + form.order().get_str() +
                            " differs from detJ * detK = " + Integer(det_j * det_k).get_str());
}

void poll(const SearchLimits& limits, std::uint64_t done, std::uint64_t total) {
  if (limits.progress && !limits.progress(done, total)) throw CancelledError("search cancelled");
}

// Elements bucketed by self-linking numerator.
class IsometrySearch {
 public:
  IsometrySearch(const LinkingForm& doubled, const SearchLimits& limits)
      : form_(doubled, limits.cap), limits_(limits) {
    const std::int64_t n = form_.exponent();
    const std::int64_t size = form_.size();
    std::vector<std::int64_t> value(size);
    start_.assign(n + 1, 0);
    for (std::int64_t i = 0; i < size; ++i) {
      value[i] = form_.self(i);
      ++start_[value[i] + 1];
    }
    for (std::int64_t v = 0; v < n; ++v) start_[v + 1] += start_[v];
    members_.resize(size);
    std::vector<std::int64_t> fill(start_.begin(), start_.end() - 1);
    for (std::int64_t i = 0; i < size; ++i) members_[fill[value[i]]++] = i;
  }

  std::optional<std::pair<std::int64_t, std::int64_t>> find(const CandidateMatrix& c) {
    const Integer dc = c.det();
    const std::int64_t t11 = form_.numerator_of(QmodZ(c.b, dc));
    const std::int64_t t22 = form_.numerator_of(QmodZ(c.a, dc));
    const std::int64_t t12 = form_.numerator_of(QmodZ(-c.c, dc));
    if (t11 < 0 || t22 < 0 || t12 < 0) return std::nullopt;
    const std::size_t k = form_.rank();
    std::vector<std::int64_t> x(k), y(k);
    const std::uint64_t total = static_cast<std::uint64_t>(start_[t11 + 1] - start_[t11]);
    for (std::int64_t p = start_[t11]; p < start_[t11 + 1]; ++p) {
      if (((p - start_[t11]) & 0xff) == 0)
        poll(limits_, static_cast<std::uint64_t>(p - start_[t11]), total);
      const std::int64_t v1 = members_[p];
      form_.decode(v1, x.data());
      for (std::int64_t q = start_[t22]; q < start_[t22 + 1]; ++q) {
        const std::int64_t v2 = members_[q];
        form_.decode(v2, y.data());
        if (form_.pair(x.data(), y.data()) != t12) continue;
        if (form_.generates({v1, v2})) return std::make_pair(v1, v2);
      }
    }
    return std::nullopt;
  }

  const EnumeratedForm& form() const { return form_; }

 private:
  EnumeratedForm form_;
  SearchLimits limits_;
  std::vector<std::int64_t> start_;
  std::vector<std::int64_t> members_;
};

// In invariant-factor form every order exceeds 1, so a prime dividing the
// third-largest factor divides the top three and H/pH has dimension > 2.
bool needs_more_than_two_generators(const LinkingForm& form) { return form.rank() > 2; }

}  // namespace

ObstructionVerdict d1_obstruction(const LinkingForm& form, const Integer& det_j,
                                  const Integer& det_k, int eps, const SearchLimits& limits) {
  check_pair_preconditions(form, det_j, det_k);
  if (eps != 0 && eps != 1 && eps != -1) throw ArgumentError("eps must be +1, -1 or 0 (both)");
  ObstructionVerdict out;
  out.kind = ObstructionKind::d1;
  if (form.rank() == 0) {
    out.witness = GeneratorWitness{{}, eps == 0 ? 1 : eps};
    out.notes = "trivial group";
    return out;
  }
  if (!form.cyclic()) {
    out.violated = true;
    out.notes = "group is not cyclic";
    return out;
  }
  EnumeratedForm e(form, limits.cap);
  const std::int64_t n = e.exponent();
  const std::int64_t base = e.numerator_of(form.gram(0, 0));
  std::vector<int> signs = eps == 0 ? std::vector<int>{1, -1} : std::vector<int>{eps};
  for (int sign : signs) {
    const std::int64_t target = ((2 * sign) % n + n) % n;
    for (std::int64_t g = 1; g < n; ++g) {
      if ((g & 0xffff) == 0) poll(limits, static_cast<std::uint64_t>(g), n);
      if (std::gcd(g, n) != 1) continue;
      const __int128 v = static_cast<__int128>(g) * g % n * base % n;
      if (v == target) {
        out.witness = GeneratorWitness{e.element(g), sign};
        out.notes = "generator found";
        return out;
      }
    }
  }
  out.violated = true;
  out.notes = "no generator has the required self-linking";
  return out;
}

IsometryResult lambda_isometric(const CandidateMatrix& c, const LinkingForm& doubled,
                                const SearchLimits& limits) {
  if (abs(c.det()) != doubled.order())
    throw ArgumentError("|det C| = " + Integer(abs(c.det())).get_str() +
                        " differs from the group order " + doubled.order().get_str());
  IsometryResult out;
  if (needs_more_than_two_generators(doubled)) return out;
  IsometrySearch search(doubled, limits);
  if (auto hit = search.find(c)) {
    out.isometric = true;
    out.v1 = search.form().element(hit->first);
    out.v2 = search.form().element(hit->second);
  }
  return out;
}

ObstructionVerdict d2_obstruction(const LinkingForm& form, const Integer& det_j,
                                  const Integer& det_k, const SearchLimits& limits) {
  check_pair_preconditions(form, det_j, det_k);
  ObstructionVerdict out;
  out.kind = ObstructionKind::d2;
  const LinkingForm doubled = form.doubled();
  if (needs_more_than_two_generators(doubled)) {
    out.violated = true;
    out.notes = "group needs more than two generators";
    return out;
  }
  IsometrySearch search(doubled, limits);
  const Integer d = det_j * det_k;
  std::vector<CandidateMatrix> candidates = candidate_matrices(d);
  for (auto& c : candidate_matrices(-d)) candidates.push_back(std::move(c));
  for (const auto& c : candidates) {
    if (auto hit = search.find(c)) {
      out.witness = IsometryWitness{c, search.form().element(hit->first),
                                    search.form().element(hit->second)};
      out.notes = "isometric to lambda(" + c.to_string() + ")";
      return out;
    }
  }
  out.violated = true;
  out.notes = "no candidate among " + std::to_string(candidates.size()) + " matrices";
  return out;
}

std::size_t KnotInvariants::fp_rank(std::int64_t p) const {
  auto it = fp_ranks.find(p);
  return it == fp_ranks.end() ? 0 : it->second;
}

KnotInvariants compute_invariants(const KnotExpr& expr, const KnotTable& table) {
  KnotInvariants inv;
  const SeifertMatrix a = seifert_matrix(expr, table);
  const IntMatrix q = a.symmetrized();
  inv.det = abs(det(q));
  inv.sigma = q.rows() == 0 ? 0 : signature(q);
  for (std::int64_t p : prime_factors(to_int64(inv.det))) inv.fp_ranks[p] = gordian::fp_rank(a, p);
  inv.form = LinkingForm::from_symmetric(q);

  int s = 0, tau = 0, u = 0;
  bool have_s = true, have_tau = true, have_u = true;
  inv.u_exact = true;
  const KnotRecord* single = nullptr;
  for (const auto& term : expr.summands) {
    if (is_unknot_name(term.name)) continue;
    ++inv.summands;
    const KnotRecord* rec = table.find(term.name);
    single = rec;
    const int sign = term.mirrored ? -1 : 1;
    if (rec->s) s += sign * *rec->s; else have_s = false;
    if (rec->tau) tau += sign * *rec->tau; else have_tau = false;
    if (rec->u_max) u += *rec->u_max; else have_u = false;
    if (!rec->u_min || !rec->u_max || *rec->u_min != *rec->u_max) inv.u_exact = false;
  }
  if (have_s) inv.s = s;
  if (have_tau) inv.tau = tau;
  if (have_u) inv.u_upper = u;
  if (!have_u) inv.u_exact = false;
  inv.two_bridge = inv.summands == 1 && single->two_bridge();
  return inv;
}

int ClassicalBounds::best() const {
  int b = fp;
  for (const auto& v : {sigma, s, tau})
    if (v) b = std::max(b, *v);
  return b;
}

ClassicalBounds classical_bounds(const KnotInvariants& j, const KnotInvariants& k) {
  ClassicalBounds out;
  out.sigma = std::abs(j.sigma - k.sigma) / 2;
  if (j.s && k.s) out.s = std::abs(*j.s - *k.s) / 2;
  if (j.tau && k.tau) out.tau = std::abs(*j.tau - *k.tau);
  std::vector<std::int64_t> primes;
  for (const auto& [p, r] : j.fp_ranks) primes.push_back(p);
  for (const auto& [p, r] : k.fp_ranks) primes.push_back(p);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (std::int64_t p : primes) {
    const int diff = std::abs(static_cast<int>(j.fp_rank(p)) - static_cast<int>(k.fp_rank(p)));
    if (diff > out.fp) {
      out.fp = diff;
      out.fp_prime = p;
    }
  }
  return out;
}

namespace {

BoundReport evaluate_pair(const std::string& name_j, const KnotInvariants& j,
                          const std::string& name_k, const KnotInvariants& k,
                          const LinkingForm* pair_form, const ReportOptions& options) {
  BoundReport r;
  r.knot_j = name_j;
  r.knot_k = name_k;
  r.det_j = j.det;
  r.det_k = k.det;
  r.coprime = gcd(j.det, k.det) == 1;
  r.classical = classical_bounds(j, k);

  if (r.coprime) {
    const LinkingForm form =
        pair_form ? *pair_form : LinkingForm::direct_sum(j.form.negate(), k.form);
    r.group_orders = form.orders();
    try {
      r.d1_verdict = d1_obstruction(form, j.det, k.det, options.eps, options.limits);
      r.d1 = r.d1_verdict->violated ? ObstructionStatus::violated : ObstructionStatus::holds;
    } catch (const CapExceededError&) {
      r.d1 = ObstructionStatus::cap;
    }
    try {
      r.d2_verdict = d2_obstruction(form, j.det, k.det, options.limits);
      r.d2 = r.d2_verdict->violated ? ObstructionStatus::violated : ObstructionStatus::holds;
    } catch (const CapExceededError&) {
      r.d2 = ObstructionStatus::cap;
    }
  }
  if (r.d1 == ObstructionStatus::violated) r.linking_d1 = 2;
  if (r.d2 == ObstructionStatus::violated) r.linking_d2 = 3;

  r.lower = r.classical.best();
  if (r.linking_d1) r.lower = std::max(r.lower, *r.linking_d1);
  if (r.linking_d2) r.lower = std::max(r.lower, *r.linking_d2);
  if (j.u_upper && k.u_upper) r.upper = *j.u_upper + *k.u_upper;
  r.exact = r.upper && *r.upper == r.lower;

  std::ostringstream v;
  if (r.upper && r.lower > *r.upper)
    v << "inconsistent: lower bound " << r.lower << " exceeds upper bound " << *r.upper;
  else if (r.exact)
    v << "d = " << r.lower;
  else if (r.upper)
    v << r.lower << " <= d <= " << *r.upper;
  else
    v << "d >= " << r.lower;
  r.verdict = v.str();
  return r;
}

// Summands as an unordered multiset, with the flags that the table's
// symmetry type makes irrelevant normalized away.
std::vector<Summand> canonical_summands(const KnotExpr& e, const KnotTable& table) {
  std::vector<Summand> out;
  for (auto s : e.summands) {
    if (is_unknot_name(s.name)) continue;
    const KnotRecord* rec = table.find(s.name);
    const std::string sym = rec && rec->symmetry ? *rec->symmetry : "";
    if (sym.find("fully") != std::string::npos) {
      s.mirrored = s.reversed = false;
    } else if (sym.find("negative") != std::string::npos) {
      if (s.mirrored) s.mirrored = false, s.reversed = !s.reversed;  // mK = rK
    } else if (sym.find("positive") != std::string::npos) {
      s.mirrored = false;
    } else if (sym.find("reversible") != std::string::npos) {
      s.reversed = false;
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BoundReport report_from_invariants(const std::string& name_j, const KnotInvariants& j,
                                   const std::string& name_k, const KnotInvariants& k,
                                   const ReportOptions& options) {
  return evaluate_pair(name_j, j, name_k, k, nullptr, options);
}

BoundReport report(const KnotExpr& j, const KnotExpr& k, const KnotTable& table,
                   const ReportOptions& options) {
  const KnotInvariants ij = compute_invariants(j, table);
  const KnotInvariants ik = compute_invariants(k, table);
  if (canonical_summands(j, table) == canonical_summands(k, table)) {
    BoundReport r;
    r.knot_j = j.to_string();
    r.knot_k = k.to_string();
    r.det_j = ij.det;
    r.det_k = ik.det;
    r.coprime = gcd(ij.det, ik.det) == 1;
    r.same_knot = true;
    r.classical = classical_bounds(ij, ik);
    r.upper = 0;
    r.exact = true;
    r.verdict = "d = 0";
    return r;
  }
  // lk of -J # K straight from the block Seifert matrix
  const KnotExpr pair_expr = KnotExpr::connected_sum(j.inverse(), k);
  const SeifertMatrix a = seifert_matrix(pair_expr, table);
  std::optional<LinkingForm> form;
  if (gcd(ij.det, ik.det) == 1) form = LinkingForm::from_symmetric(a.symmetrized());
  BoundReport r =
      evaluate_pair(j.to_string(), ij, k.to_string(), ik, form ? &*form : nullptr, options);
  if (r.upper && r.lower > *r.upper) throw DataError(r.knot_j + " / " + r.knot_k + ": " + r.verdict);
  return r;
}

}  // namespace gordian
