#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <tuple>

#include "gordian/error.hpp"
#include "gordian/knots.hpp"
#include "gordian/obstruct.hpp"
#include "support.hpp"

using namespace gordian;
using testing_support::bundled_table;
using testing_support::lambda_isometric_brute_force;
using testing_support::random_odd_symmetric;
using testing_support::uniform;

namespace {

const IntMatrix kTrefoilQ{{-2, 1}, {1, -2}};

std::set<std::tuple<long, long, long>> as_set(const std::vector<CandidateMatrix>& v) {
  std::set<std::tuple<long, long, long>> s;
  for (const auto& c : v) s.emplace(c.a.get_si(), c.b.get_si(), c.c.get_si());
  return s;
}

std::vector<CandidateMatrix> both_signs(long d) {
  auto v = candidate_matrices(d);
  for (auto& c : candidate_matrices(-d)) v.push_back(c);
  return v;
}

// Direct transcription of the two reduced families, filtered to forms that
// are odd over F_2.
std::set<std::tuple<long, long, long>> candidates_oracle(long d) {
  std::set<std::tuple<long, long, long>> s;
  const long ad = std::labs(d);
  for (long a = -ad; a <= ad; ++a)
    for (long b = -ad; b <= ad; ++b)
      for (long c = 0; c <= ad; ++c) {
        const bool odd = (a % 2 != 0) || (b % 2 != 0);
        if (!odd || a * b - c * c != d) continue;
        const bool first = a != 0 && std::labs(a) <= std::labs(b) && c <= std::labs(a) / 2;
        const bool second = b == 0 && c * c == -d && std::labs(a) <= c;
        if (first || second) s.emplace(a, b, c);
      }
  return s;
}

LinkingForm pair_form(const char* j, const char* k) {
  const KnotTable& t = bundled_table();
  const auto a = seifert_matrix(KnotExpr::connected_sum(parse_expr(j).inverse(), parse_expr(k)), t);
  return LinkingForm::from_symmetric(a.symmetrized());
}

BoundReport rep(const char* j, const char* k) {
  return report(parse_expr(j), parse_expr(k), bundled_table());
}

bool same_bounds(const BoundReport& a, const BoundReport& b) {
  return a.classical.sigma == b.classical.sigma && a.classical.s == b.classical.s &&
         a.classical.tau == b.classical.tau && a.classical.fp == b.classical.fp &&
         a.coprime == b.coprime && a.d1 == b.d1 && a.d2 == b.d2 && a.lower == b.lower &&
         a.upper == b.upper && a.exact == b.exact && a.group_orders == b.group_orders;
}

}  // namespace

TEST_CASE("candidate examples") {
  CHECK(as_set(both_signs(3)) == std::set<std::tuple<long, long, long>>{
                                     {1, 3, 0}, {1, -3, 0}, {-1, 3, 0}, {-1, -3, 0}});
  // the diagonal matrices plus the second family [[+-1,1],[1,0]] of det -1,
  // which is odd over F_2 and congruent to diag(1,-1)
  CHECK(as_set(both_signs(1)) == std::set<std::tuple<long, long, long>>{
                                     {1, 1, 0}, {1, -1, 0}, {-1, 1, 0}, {-1, -1, 0}, {1, 0, 1}, {-1, 0, 1}});
  // [[2,1],[1,3]] is congruent to [[3,2],[2,3]], which is the identity mod 2
  CHECK(as_set(both_signs(5)) == std::set<std::tuple<long, long, long>>{
                                     {1, 5, 0}, {1, -5, 0}, {-1, 5, 0}, {-1, -5, 0}, {2, 3, 1}, {-2, -3, 1}});
  CHECK_THROWS_AS(candidate_matrices(2), ArgumentError);
  CHECK_THROWS_AS(candidate_matrices(0), ArgumentError);
}

TEST_CASE("candidate invariants and completeness for odd |d| <= 301") {
  for (long d = -301; d <= 301; d += 2) {
    CAPTURE(d);
    const auto list = candidate_matrices(d);
    for (const auto& c : list) {
      REQUIRE(c.det() == d);
      REQUIRE((mpz_odd_p(c.a.get_mpz_t()) || mpz_odd_p(c.b.get_mpz_t())));
      if (c.b == 0) {
        REQUIRE(c.c * c.c == -d);
        REQUIRE(abs(c.a) <= c.c);
      } else {
        REQUIRE(0 < abs(c.a));
        REQUIRE(abs(c.a) <= abs(c.b));
        REQUIRE(abs(c.b) <= abs(Integer(d)));
        REQUIRE(0 <= c.c);
        REQUIRE(2 * c.c <= abs(c.a));
      }
    }
    REQUIRE(as_set(list) == candidates_oracle(d));
    REQUIRE(as_set(list).size() == list.size());
  }
}

TEST_CASE("d1 examples") {
  const auto unknot_trefoil = pair_form("unknot", "3_1");
  CHECK_FALSE(d1_obstruction(unknot_trefoil, 1, 3).violated);
  const auto v = d1_obstruction(pair_form("8_17", "8_21"), 37, 15);
  CHECK(v.violated);
  CHECK_FALSE(v.witness.has_value());
  const auto trivial = d1_obstruction(LinkingForm(), 1, 1);
  CHECK_FALSE(trivial.violated);
  CHECK(trivial.witness.has_value());
  // the generator witness has the required self-linking
  const auto w = d1_obstruction(unknot_trefoil, 1, 3);
  const auto& g = std::get<GeneratorWitness>(*w.witness);
  CHECK(unknot_trefoil.evaluate(g.generator, g.generator) == QmodZ(2 * g.eps, 3));
  CHECK_THROWS_AS(d1_obstruction(pair_form("3_1", "9_40"), 3, 75), PreconditionError);
  CHECK_THROWS_AS(d1_obstruction(unknot_trefoil, 1, 5), PreconditionError);
}

TEST_CASE("d1 sign restriction") {
  // lk of the trefoil takes the value 1/3 = -2/3 on generators: only eps = -1 works
  const auto f = LinkingForm::from_symmetric(kTrefoilQ);
  CHECK_FALSE(d1_obstruction(f, 1, 3, -1).violated);
  CHECK(d1_obstruction(f, 1, 3, +1).violated);
  CHECK_FALSE(d1_obstruction(f.negate(), 1, 3, +1).violated);
}

TEST_CASE("lambda_isometric examples") {
  const auto l2 = LinkingForm::from_symmetric(kTrefoilQ).doubled();
  const auto hit = lambda_isometric({1, -3, 0}, l2);
  CHECK(hit.isometric);
  CHECK(l2.evaluate(hit.v1, hit.v1) == QmodZ());
  CHECK(l2.evaluate(hit.v2, hit.v2) == QmodZ(2, 3));
  CHECK(generates(l2, {hit.v1, hit.v2}));
  CHECK_FALSE(lambda_isometric({1, 3, 0}, l2).isometric);
  CHECK(lambda_isometric({1, 1, 0}, LinkingForm()).isometric);
  CHECK_THROWS_AS(lambda_isometric({1, 5, 0}, l2), ArgumentError);
}

TEST_CASE("d2 examples") {
  CHECK(d2_obstruction(pair_form("8_7", "9_40"), 23, 75).violated);
  CHECK(d2_obstruction(pair_form("3_1", "4_1 # 4_1"), 3, 25).violated);
  const auto ok = d2_obstruction(pair_form("unknot", "3_1"), 1, 3);
  CHECK_FALSE(ok.violated);
  CHECK(std::holds_alternative<IsometryWitness>(*ok.witness));
  // u(5_1) = 2, so the d2 test must pass against the unknot
  CHECK_FALSE(d2_obstruction(pair_form("unknot", "5_1"), 1, 5).violated);
  CHECK_THROWS_AS(d2_obstruction(pair_form("3_1", "9_40"), 3, 75), PreconditionError);
}

TEST_CASE("cap exceeded is reported, not truncated") {
  ReportOptions opts;
  opts.limits.cap = 100;
  const auto r = report(parse_expr("8_7"), parse_expr("9_40"), bundled_table(), opts);
  CHECK(r.d1 == ObstructionStatus::violated);  // non-cyclic: no enumeration needed
  CHECK(r.d2 == ObstructionStatus::cap);
  CHECK(r.lower == 2);
  SearchLimits tight;
  tight.cap = 100;
  CHECK_THROWS_AS(d2_obstruction(pair_form("8_7", "9_40"), 23, 75, tight), CapExceededError);
}

TEST_CASE("classical bounds examples") {
  const KnotTable& t = bundled_table();
  auto inv = [&](const char* e) { return compute_invariants(parse_expr(e), t); };
  const auto b1 = classical_bounds(inv("8_17"), inv("8_21"));
  CHECK(b1.sigma == 1);
  CHECK(b1.s == 1);
  CHECK(b1.tau == 1);
  CHECK(b1.fp == 1);
  CHECK(b1.best() == 1);
  const auto b2 = classical_bounds(inv("8_7"), inv("9_40"));
  CHECK(b2.sigma == 2);
  CHECK(b2.fp == 2);
  CHECK(b2.fp_prime == 5);
  CHECK(b2.best() == 2);
  const auto b3 = classical_bounds(inv("3_1"), inv("4_1 # 4_1"));
  CHECK(b3.sigma == 1);
  CHECK(b3.s == 1);
  CHECK(b3.tau == 1);
  CHECK(b3.fp == 2);
  CHECK(b3.fp_prime == 5);
}

TEST_CASE("report examples") {
  const auto r1 = rep("8_17", "8_21");
  CHECK(r1.d1 == ObstructionStatus::violated);
  CHECK(r1.lower == 2);
  CHECK(r1.upper == 2);
  CHECK(r1.verdict == "d = 2");

  const auto r2 = rep("8_7", "9_40");
  CHECK(r2.d2 == ObstructionStatus::violated);
  CHECK(r2.group_orders == std::vector<Integer>{5, 345});
  CHECK(r2.lower == 3);
  CHECK(r2.upper == 3);
  CHECK(r2.verdict == "d = 3");

  const auto r3 = rep("3_1", "4_1 # 4_1");
  CHECK(r3.d2 == ObstructionStatus::violated);
  CHECK(r3.lower == 3);
  CHECK(r3.upper == 3);
  CHECK(r3.verdict == "d = 3");

  const auto same = rep("3_1", "3_1");
  CHECK(same.same_knot);
  CHECK(same.verdict == "d = 0");
  CHECK(rep("4_1", "m4_1").same_knot);
  CHECK(rep("3_1", "r3_1").same_knot);
  CHECK_FALSE(rep("3_1", "m3_1").same_knot);
  // 8_17 is negative amphichiral but not reversible: -8_17 is 8_17 again,
  // m8_17 is its reverse
  CHECK(rep("8_17", "-8_17").same_knot);
  CHECK_FALSE(rep("8_17", "m8_17").same_knot);

  const auto non_coprime = rep("3_1", "9_40");
  CHECK(non_coprime.d1 == ObstructionStatus::inapplicable);
  CHECK(non_coprime.d2 == ObstructionStatus::inapplicable);
}

TEST_CASE("verdict text") {
  // u(10_11) is 2 or 3; the upper bound uses the larger value
  const auto r = rep("3_1", "10_11");
  CHECK(r.upper == 4);
  CHECK_FALSE(r.exact);
  CHECK(r.verdict == std::to_string(r.lower) + " <= d <= 4");
  const auto r2 = rep("3_1", "5_1");
  CHECK(r2.verdict == std::to_string(r2.lower) + " <= d <= 3");
}

TEST_CASE("block Seifert route agrees with the direct-sum route") {
  const KnotTable& t = bundled_table();
  const auto names = t.names_in_order();
  for (int trial = 0; trial < 200; ++trial) {
    std::string j = names[uniform(0, names.size() - 1)];
    std::string k = names[uniform(0, names.size() - 1)];
    if (uniform(0, 1)) j = "m" + j;
    if (uniform(0, 3) == 0) k += " # " + names[uniform(0, 20)];
    if (j == k) continue;
    const auto a = report(parse_expr(j), parse_expr(k), t);
    if (a.same_knot) continue;
    const auto b = report_from_invariants(j, compute_invariants(parse_expr(j), t), k,
                                          compute_invariants(parse_expr(k), t));
    CAPTURE(j);
    CAPTURE(k);
    REQUIRE(same_bounds(a, b));
  }
}

TEST_CASE("oracle equivalence on 200 random forms") {
  int instances = 0, positives = 0, comparisons = 0;
  while (instances < 200) {
    const std::size_t n = uniform(1, 3);
    const IntMatrix q = random_odd_symmetric(n, 6, 200);
    const auto form = LinkingForm::from_symmetric(q);
    // odd instances use the form itself so that 2x2 odd matrices give hits
    const LinkingForm l2 = instances % 2 ? form : form.doubled();
    const Integer d = form.order();
    for (const auto& c : both_signs(d.get_si())) {
      const bool fast = lambda_isometric(c, l2).isometric;
      const bool slow = lambda_isometric_brute_force(c, l2);
      CAPTURE(q.to_string());
      CAPTURE(c.to_string());
      REQUIRE(fast == slow);
      positives += fast;
      ++comparisons;
    }
    ++instances;
  }
  MESSAGE(comparisons << " comparisons, " << positives << " isometric");
  CHECK(positives > 0);
}

TEST_CASE("symmetry and orientation") {
  const KnotTable& t = bundled_table();
  const auto names = t.names_in_order();
  int checked = 0;
  while (checked < 150) {
    const std::string a = names[uniform(0, names.size() - 1)];
    std::string b = names[uniform(0, names.size() - 1)];
    if (a == b) continue;
    if (uniform(0, 4) == 0) b += " # 3_1";
    const std::string j = (uniform(0, 1) ? "m" : "") + a;
    const std::string k = (uniform(0, 1) ? "m" : "") + b;
    const KnotExpr ej = parse_expr(j), ek = parse_expr(k);
    const auto base = report(ej, ek, t);
    REQUIRE(same_bounds(base, report(ek, ej, t)));
    REQUIRE(same_bounds(base, report(ej.mirror(), ek.mirror(), t)));
    REQUIRE(same_bounds(base, report(ek.mirror(), ej.mirror(), t)));
    REQUIRE(same_bounds(base, report(ej.reverse(), ek, t)));
    REQUIRE(same_bounds(base, report(ej, ek.reverse(), t)));
    REQUIRE(same_bounds(base, report(ej.reverse(), ek.reverse(), t)));
    ++checked;
  }
}

TEST_CASE("Lickorish consistency over the table") {
  const KnotTable& t = bundled_table();
  const KnotInvariants unknot = compute_invariants(parse_expr("unknot"), t);
  int count = 0;
  for (const auto& [name, rec] : t.records) {
    if (rec.u_min != 1 || rec.u_max != 1) continue;
    const auto k = compute_invariants(parse_expr(name), t);
    const auto form = LinkingForm::direct_sum(unknot.form.negate(), k.form);
    CAPTURE(name);
    CHECK_FALSE(d1_obstruction(form, 1, k.det).violated);
    ++count;
  }
  CHECK(count > 50);
}
