#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gordian/error.hpp"
#include "gordian/knots.hpp"
#include "gordian/linkform.hpp"
#include "support.hpp"

using namespace gordian;
using testing_support::all_elements;
using testing_support::bundled_table;
using testing_support::isometric_brute_force;
using testing_support::random_odd_symmetric;
using testing_support::random_unimodular;
using testing_support::uniform;

namespace {

const IntMatrix kTrefoilQ{{-2, 1}, {1, -2}};
const IntMatrix kFigureEightQ{{2, 1}, {1, -2}};

GroupElement el(std::initializer_list<long> xs) {
  GroupElement g;
  for (long x : xs) g.emplace_back(x);
  return g;
}

}  // namespace

TEST_CASE("from_symmetric examples") {
  const auto t = LinkingForm::from_symmetric(kTrefoilQ);
  CHECK(t.orders() == std::vector<Integer>{3});
  CHECK(t.gram(0, 0) == QmodZ(1, 3));

  const auto f = LinkingForm::from_symmetric(kFigureEightQ);
  CHECK(f.orders() == std::vector<Integer>{5});
  CHECK(f.gram(0, 0) == QmodZ(2, 5));

  const auto u = LinkingForm::from_symmetric(IntMatrix());
  CHECK(u.rank() == 0);
  CHECK(u.order() == 1);

  CHECK_THROWS_AS(LinkingForm::from_symmetric(IntMatrix{{1, 2}, {0, 1}}), ShapeError);
  CHECK_THROWS_AS(LinkingForm::from_symmetric(IntMatrix{{1, 1}, {1, 1}}), SingularMatrixError);
  CHECK_THROWS_AS(LinkingForm::from_symmetric(IntMatrix{{2, 0}, {0, 1}}), ArgumentError);
}

TEST_CASE("negate, direct_sum, doubled") {
  const auto t = LinkingForm::from_symmetric(kTrefoilQ);
  const auto f = LinkingForm::from_symmetric(kFigureEightQ);
  CHECK(t.negate().orders() == std::vector<Integer>{3});
  CHECK(t.negate().gram(0, 0) == QmodZ(2, 3));
  const auto s = LinkingForm::direct_sum(t, f);
  CHECK(s.orders() == std::vector<Integer>{15});
  CHECK(s.cyclic());
  CHECK(LinkingForm().doubled() == LinkingForm());
  CHECK(t.doubled().gram(0, 0) == QmodZ(2, 3));
  const auto ff = LinkingForm::direct_sum(f, f);
  CHECK(ff.orders() == std::vector<Integer>{5, 5});
  CHECK_FALSE(ff.cyclic());
}

TEST_CASE("evaluate examples") {
  const auto t = LinkingForm::from_symmetric(kTrefoilQ);
  const auto f = LinkingForm::from_symmetric(kFigureEightQ);
  CHECK(t.evaluate(el({1}), el({1})) == QmodZ(1, 3));
  CHECK(f.evaluate(el({0}), el({3})) == QmodZ());
  CHECK(f.evaluate(el({2}), el({2})) == QmodZ(3, 5));
  CHECK_THROWS_AS(f.evaluate(el({1, 1}), el({1})), ShapeError);
}

TEST_CASE("generates examples") {
  const auto t = LinkingForm::from_symmetric(kTrefoilQ);
  CHECK(generates(t, {el({1})}));
  CHECK(generates(t, {el({2})}));
  CHECK_FALSE(generates(t, {el({0})}));
  const LinkingForm z33({3, 3}, {QmodZ(1, 3), QmodZ(), QmodZ(), QmodZ(1, 3)});
  CHECK_FALSE(generates(z33, {el({1, 0})}));
  CHECK(generates(z33, {el({1, 0}), el({1, 1})}));
  CHECK(generates(LinkingForm(), {}));
}

TEST_CASE("generator_self_links examples") {
  const auto t = LinkingForm::from_symmetric(kTrefoilQ);
  CHECK(generator_self_links(t) == std::vector<QmodZ>{QmodZ(1, 3)});
  CHECK(generator_self_links(t.negate()) == std::vector<QmodZ>{QmodZ(2, 3)});
  const auto f = LinkingForm::from_symmetric(kFigureEightQ);
  CHECK(generator_self_links(LinkingForm::direct_sum(f, f)).empty());
  CHECK(generator_self_links(LinkingForm()) == std::vector<QmodZ>{QmodZ()});
  CHECK(generator_self_links(f) == std::vector<QmodZ>{QmodZ(2, 5), QmodZ(3, 5)});
  SearchLimits tight;
  tight.cap = 4;
  CHECK_THROWS_AS(generator_self_links(f, tight), CapExceededError);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(LinkingForm({Integer(3)}, {QmodZ(1, 5)}), ArgumentError);
  CHECK_THROWS_AS(LinkingForm({Integer(5), Integer(3)}, {QmodZ(), QmodZ(), QmodZ(), QmodZ()}),
                  ArgumentError);
  CHECK_THROWS_AS(LinkingForm({Integer(4)}, {QmodZ(1, 4)}), ArgumentError);
  CHECK_THROWS_AS(LinkingForm({Integer(1)}, {QmodZ()}), ArgumentError);
}

TEST_CASE("from_presentation re-presents arbitrary orders") {
  // Z/3 + Z/5 with values 1/3 and 2/5 is cyclic of order 15
  const auto f = LinkingForm::from_presentation({3, 5}, {QmodZ(1, 3), QmodZ(), QmodZ(), QmodZ(2, 5)});
  CHECK(f.orders() == std::vector<Integer>{15});
  CHECK(isometric_brute_force(f, LinkingForm::direct_sum(LinkingForm::from_symmetric(kTrefoilQ),
                                                         LinkingForm::from_symmetric(kFigureEightQ))));
}

TEST_CASE("property: random forms are symmetric, bilinear and nondegenerate") {
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = uniform(1, 6);
    const IntMatrix q = random_odd_symmetric(n, 4, 400);
    const auto f = LinkingForm::from_symmetric(q);
    REQUIRE(f.order() == abs(det(q)));
    REQUIRE(f.nondegenerate());
    const auto elems = all_elements(f);
    for (int k = 0; k < 5; ++k) {
      const auto& x = elems[uniform(0, elems.size() - 1)];
      const auto& y = elems[uniform(0, elems.size() - 1)];
      const auto& z = elems[uniform(0, elems.size() - 1)];
      GroupElement xz = x;
      for (std::size_t i = 0; i < xz.size(); ++i) xz[i] += z[i];
      REQUIRE(f.evaluate(x, y) == f.evaluate(y, x));
      REQUIRE(f.evaluate(xz, y) == f.evaluate(x, y) + f.evaluate(z, y));
    }
    REQUIRE(f.negate().negate() == f);
  }
}

TEST_CASE("property: from_symmetric is a congruence invariant") {
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = uniform(1, 4);
    const IntMatrix q = random_odd_symmetric(n, 4, 200);
    const IntMatrix p = random_unimodular(n);
    const auto a = LinkingForm::from_symmetric(q);
    const auto b = LinkingForm::from_symmetric(p.transpose() * q * p);
    REQUIRE(a.orders() == b.orders());
    REQUIRE(isometric_brute_force(a, b));
  }
}

TEST_CASE("property: direct sums multiply orders and follow block sums") {
  for (int trial = 0; trial < 500; ++trial) {
    const IntMatrix q1 = random_odd_symmetric(uniform(1, 3), 4, 60);
    const IntMatrix q2 = random_odd_symmetric(uniform(1, 3), 4, 60);
    const auto a = LinkingForm::from_symmetric(q1);
    const auto b = LinkingForm::from_symmetric(q2);
    const auto s = LinkingForm::direct_sum(a, b);
    REQUIRE(s.order() == a.order() * b.order());
    if (trial % 5 == 0)
      REQUIRE(isometric_brute_force(s, LinkingForm::from_symmetric(IntMatrix::block_sum(q1, q2))));
  }
}

TEST_CASE("property: EnumeratedForm matches exact evaluation") {
  for (int trial = 0; trial < 500; ++trial) {
    const auto f = LinkingForm::from_symmetric(random_odd_symmetric(uniform(1, 4), 4, 300));
    const EnumeratedForm e(f, 1'000'000);
    REQUIRE(e.size() == f.order());
    for (int k = 0; k < 10; ++k) {
      const std::int64_t i = uniform(0, e.size() - 1);
      const std::int64_t j = uniform(0, e.size() - 1);
      std::vector<std::int64_t> x(e.rank()), y(e.rank());
      e.decode(i, x.data());
      e.decode(j, y.data());
      const QmodZ exact = f.evaluate(e.element(i), e.element(j));
      REQUIRE(e.numerator_of(exact) == e.pair(x.data(), y.data()));
      REQUIRE(e.generates({i, j}) == generates(f, {e.element(i), e.element(j)}));
      REQUIRE(e.generates({i}) == generates(f, {e.element(i)}));
    }
  }
}

TEST_CASE("group order equals the knot determinant for table expressions") {
  const KnotTable& t = bundled_table();
  for (const auto& name : t.names_in_order()) {
    const SeifertMatrix a = seifert_matrix(parse_expr(name), t);
    const auto f = LinkingForm::from_symmetric(a.symmetrized());
    CAPTURE(name);
    CHECK(f.order() == knot_det(a));
    // the number of invariant factors is the largest F_p-rank
    std::size_t max_rank = 0;
    for (std::int64_t p : prime_factors(to_int64(knot_det(a)))) max_rank = std::max(max_rank, fp_rank(a, p));
    CHECK(f.rank() == max_rank);
  }
}
