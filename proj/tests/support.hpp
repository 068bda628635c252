#pragma once

// Shared helpers for the test binaries.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gordian/exactmat.hpp"
#include "gordian/ingest.hpp"
#include "gordian/linkform.hpp"
#include "gordian/obstruct.hpp"

namespace testing_support {

using gordian::IntMatrix;
using gordian::Integer;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed'2016ULL);
  return gen;
}

inline long uniform(long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng());
}

inline IntMatrix random_matrix(std::size_t rows, std::size_t cols, long bound) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform(-bound, bound);
  return m;
}

inline IntMatrix random_symmetric(std::size_t n, long bound) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = uniform(-bound, bound);
  return m;
}

/// Product of random elementary matrices; det = +-1.
inline IntMatrix random_unimodular(std::size_t n, int steps = 8) {
  IntMatrix p = IntMatrix::identity(n);
  if (n < 2) {
    if (n == 1 && uniform(0, 1)) p.negate_row(0);
    return p;
  }
  for (int s = 0; s < steps; ++s) {
    const std::size_t a = uniform(0, n - 1);
    std::size_t b = uniform(0, n - 2);
    if (b >= a) ++b;
    switch (uniform(0, 2)) {
      case 0: p.add_row_multiple(a, b, uniform(-2, 2)); break;
      case 1: p.swap_rows(a, b); break;
      default: p.negate_row(a); break;
    }
  }
  return p;
}

/// Random symmetric matrix with odd determinant and 1 < |det| <= max_order.
inline IntMatrix random_odd_symmetric(std::size_t n, long bound, long max_order) {
  for (;;) {
    IntMatrix q = random_symmetric(n, bound);
    const Integer d = abs(gordian::det(q));
    if (d > 1 && d <= max_order && mpz_odd_p(d.get_mpz_t())) return q;
  }
}

inline const gordian::KnotTable& bundled_table() {
  static const gordian::KnotTable table = gordian::load_table(GORDIAN_TABLE).table;
  return table;
}

/// Every element of the group of `form`, in mixed-radix order.
inline std::vector<gordian::GroupElement> all_elements(const gordian::LinkingForm& form) {
  std::vector<gordian::GroupElement> out{form.zero()};
  for (std::size_t i = 0; i < form.rank(); ++i) {
    std::vector<gordian::GroupElement> next;
    for (const auto& e : out)
      for (Integer k = 0; k < form.orders()[i]; ++k) {
        auto f = e;
        f[i] = k;
        next.push_back(f);
      }
    out.swap(next);
  }
  return out;
}

/// Brute-force isometry test between small forms: tries every assignment
/// of the canonical generators of `a` to elements of `b`.
inline bool isometric_brute_force(const gordian::LinkingForm& a, const gordian::LinkingForm& b) {
  if (a.order() != b.order()) return false;
  const auto elems = all_elements(b);
  std::vector<gordian::GroupElement> image(a.rank());
  auto mult = [&](const gordian::GroupElement& e, const Integer& k) {
    auto f = e;
    for (auto& x : f) x *= k;
    return f;
  };
  std::function<bool(std::size_t)> assign = [&](std::size_t i) -> bool {
    if (i == a.rank()) return gordian::generates(b, image);
    for (const auto& e : elems) {
      // the image of a generator of order d must be killed by d
      bool killed = true;
      const auto de = mult(e, a.orders()[i]);
      for (std::size_t t = 0; t < b.rank(); ++t)
        if (gordian::mod_floor(de[t], b.orders()[t]) != 0) killed = false;
      if (!killed) continue;
      bool ok = true;
      image[i] = e;
      for (std::size_t j = 0; j <= i && ok; ++j)
        ok = b.evaluate(image[i], image[j]) == a.gram(i, j);
      if (ok && assign(i + 1)) return true;
    }
    return false;
  };
  return assign(0);
}

/// Unfiltered oracle for the isometry criterion: every pair (v1, v2) is
/// tried, with exact evaluation and the Smith-form generation test.
inline bool lambda_isometric_brute_force(const gordian::CandidateMatrix& c,
                                         const gordian::LinkingForm& doubled) {
  const Integer d = c.det();
  const gordian::QmodZ t11(c.b, d), t22(c.a, d), t12(-c.c, d);
  const auto elems = all_elements(doubled);
  std::vector<gordian::QmodZ> self;
  for (const auto& v : elems) self.push_back(doubled.evaluate(v, v));
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j)
      if (self[i] == t11 && self[j] == t22 && doubled.evaluate(elems[i], elems[j]) == t12 &&
          gordian::generates(doubled, {elems[i], elems[j]}))
        return true;
  return false;
}

}  // namespace testing_support
