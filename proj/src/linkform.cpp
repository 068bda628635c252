#include "gordian/linkform.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gordian/error.hpp"
#include "gordian/knots.hpp"

namespace gordian {

namespace {

void check_progress(const SearchLimits& limits, std::uint64_t done, std::uint64_t total) {
  if (limits.progress && !limits.progress(done, total))
    throw CancelledError("search cancelled");
}

void check_cap(const Integer& order, std::uint64_t cap) {
  if (order > Integer(std::to_string(cap)))
    throw CapExceededError("group order " + order.get_str() + " exceeds cap " +
                           std::to_string(cap));
}

}  // namespace

LinkingForm::LinkingForm(std::vector<Integer> orders, std::vector<QmodZ> gram)
    : orders_(std::move(orders)), gram_(std::move(gram)) {
  const std::size_t k = orders_.size();
  if (gram_.size() != k * k) throw ShapeError("linking form: gram size does not match orders");
  for (std::size_t i = 0; i < k; ++i) {
    if (orders_[i] <= 1) throw ArgumentError("linking form: invariant factor must exceed 1");
    if (mpz_even_p(orders_[i].get_mpz_t()))
      throw ArgumentError("linking form: group order must be odd");
    if (i + 1 < k && !mpz_divisible_p(orders_[i + 1].get_mpz_t(), orders_[i].get_mpz_t()))
      throw ArgumentError("linking form: orders are not a divisibility chain");
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (!(gram_[i * k + j] == gram_[j * k + i]))
        throw ArgumentError("linking form: gram is not symmetric");
      const Integer g = gcd(orders_[i], orders_[j]);
      if (!mpz_divisible_p(g.get_mpz_t(), gram_[i * k + j].den().get_mpz_t()))
        throw ArgumentError("linking form: gram entry is not defined on the group");
    }
}

LinkingForm LinkingForm::from_symmetric(const IntMatrix& q) {
  if (!q.symmetric()) throw ShapeError("from_symmetric: matrix is not symmetric");
  const Integer d = det(q);
  if (d == 0) throw SingularMatrixError("from_symmetric: matrix is singular");
  if (mpz_even_p(d.get_mpz_t()))
    throw ArgumentError("from_symmetric: determinant " + d.get_str() + " is even");

  const std::size_t n = q.rows();
  SmithDecomposition snf = smith(q);
  // U Q V = D, so x -> Ux identifies coker(Q) with Z^n / D Z^n and the i-th
  // cyclic summand is generated by column i of U^{-1}.
  const IntMatrix gens = unimodular_inverse(snf.U);
  const IntMatrix adj = adjugate(q);

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (snf.D[i] > 1) keep.push_back(i);

  std::vector<Integer> orders;
  for (std::size_t i : keep) orders.push_back(snf.D[i]);
  const std::size_t k = keep.size();
  std::vector<QmodZ> gram(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    // adj * g_a
    std::vector<Integer> ag(n, Integer(0));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) ag[r] += adj(r, c) * gens(c, keep[a]);
    for (std::size_t b = a; b < k; ++b) {
      Integer v = 0;
      for (std::size_t r = 0; r < n; ++r) v += gens(r, keep[b]) * ag[r];
      gram[a * k + b] = gram[b * k + a] = QmodZ(v, d);
    }
  }
  return LinkingForm(std::move(orders), std::move(gram));
}

LinkingForm LinkingForm::from_presentation(const std::vector<Integer>& orders,
                                           const std::vector<QmodZ>& gram) {
  const std::size_t m = orders.size();
  if (gram.size() != m * m) throw ShapeError("from_presentation: gram size does not match orders");
  SmithDecomposition snf = smith(IntMatrix::diagonal(orders));
  const IntMatrix gens = unimodular_inverse(snf.U);

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m; ++i)
    if (snf.D[i] > 1) keep.push_back(i);
  std::vector<Integer> out_orders;
  for (std::size_t i : keep) out_orders.push_back(snf.D[i]);
  const std::size_t k = keep.size();
  std::vector<QmodZ> out_gram(k * k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      QmodZ v;
      for (std::size_t i = 0; i < m; ++i) {
        if (gens(i, keep[a]) == 0) continue;
        for (std::size_t j = 0; j < m; ++j) {
          if (gens(j, keep[b]) == 0) continue;
          v = v + gram[i * m + j] * Integer(gens(i, keep[a]) * gens(j, keep[b]));
        }
      }
      out_gram[a * k + b] = out_gram[b * k + a] = v;
    }
  return LinkingForm(std::move(out_orders), std::move(out_gram));
}

LinkingForm LinkingForm::direct_sum(const LinkingForm& a, const LinkingForm& b) {
  const std::size_t ka = a.rank();
  const std::size_t kb = b.rank();
  const std::size_t k = ka + kb;
  std::vector<Integer> orders = a.orders_;
  orders.insert(orders.end(), b.orders_.begin(), b.orders_.end());
  std::vector<QmodZ> gram(k * k);
  for (std::size_t i = 0; i < ka; ++i)
    for (std::size_t j = 0; j < ka; ++j) gram[i * k + j] = a.gram(i, j);
  for (std::size_t i = 0; i < kb; ++i)
    for (std::size_t j = 0; j < kb; ++j) gram[(ka + i) * k + ka + j] = b.gram(i, j);
  return from_presentation(orders, gram);
}

LinkingForm LinkingForm::negate() const {
  LinkingForm out = *this;
  for (auto& v : out.gram_) v = -v;
  return out;
}

LinkingForm LinkingForm::doubled() const {
  LinkingForm out = *this;
  for (auto& v : out.gram_) v = v * Integer(2);
  return out;
}

Integer LinkingForm::order() const {
  Integer n = 1;
  for (const auto& d : orders_) n *= d;
  return n;
}

QmodZ LinkingForm::evaluate(const GroupElement& x, const GroupElement& y) const {
  const std::size_t k = rank();
  if (x.size() != k || y.size() != k)
    throw ShapeError("evaluate: element length does not match the group rank");
  QmodZ v;
  for (std::size_t i = 0; i < k; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < k; ++j) {
      if (y[j] == 0) continue;
      v = v + gram(i, j) * Integer(x[i] * y[j]);
    }
  }
  return v;
}

bool LinkingForm::nondegenerate(const SearchLimits& limits) const {
  EnumeratedForm e(*this, limits.cap);
  const std::size_t k = rank();
  std::vector<std::int64_t> x(k), basis(k);
  for (std::int64_t idx = 1; idx < e.size(); ++idx) {
    e.decode(idx, x.data());
    bool seen = false;
    for (std::size_t j = 0; j < k && !seen; ++j) {
      std::fill(basis.begin(), basis.end(), 0);
      basis[j] = 1;
      seen = e.pair(x.data(), basis.data()) != 0;
    }
    if (!seen) return false;
  }
  return true;
}

bool generates(const LinkingForm& form, const std::vector<GroupElement>& elems) {
  const std::size_t k = form.rank();
  if (k == 0) return true;
  IntMatrix m(k, elems.size() + k);
  for (std::size_t c = 0; c < elems.size(); ++c) {
    if (elems[c].size() != k) throw ShapeError("generates: element length does not match");
    for (std::size_t r = 0; r < k; ++r) m(r, c) = elems[c][r];
  }
  for (std::size_t r = 0; r < k; ++r) m(r, elems.size() + r) = form.orders()[r];
  const SmithDecomposition snf = smith(m);
  return std::all_of(snf.D.begin(), snf.D.end(), [](const Integer& d) { return d == 1; });
}

std::vector<QmodZ> generator_self_links(const LinkingForm& form, const SearchLimits& limits) {
  if (form.rank() == 0) return {QmodZ()};
  if (!form.cyclic()) return {};
  check_cap(form.order(), limits.cap);
  const std::int64_t n = to_int64(form.orders()[0]);
  const QmodZ base = form.gram(0, 0);
  std::vector<QmodZ> out;
  for (std::int64_t g = 1; g < n; ++g) {
    if (std::gcd(g, n) != 1) continue;
    if ((g & 0xffff) == 0) check_progress(limits, static_cast<std::uint64_t>(g), n);
    out.push_back(base * Integer(static_cast<long>(g) * static_cast<long>(g) % n));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EnumeratedForm::EnumeratedForm(const LinkingForm& form, std::uint64_t cap) {
  check_cap(form.order(), cap);
  const std::size_t k = form.rank();
  for (const auto& d : form.orders()) orders_.push_back(to_int64(d));
  exponent_ = k == 0 ? 1 : orders_.back();
  size_ = 1;
  for (auto d : orders_) size_ *= d;
  gram_.resize(k * k);
  const Integer big_n(static_cast<long>(exponent_));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const QmodZ& q = form.gram(i, j);
      Integer num = q.num() * (big_n / q.den());
      gram_[i * k + j] = to_int64(num);
    }
  primes_ = prime_factors(size_);
}

void EnumeratedForm::decode(std::int64_t index, std::int64_t* coeffs) const {
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    coeffs[i] = index % orders_[i];
    index /= orders_[i];
  }
}

GroupElement EnumeratedForm::element(std::int64_t index) const {
  std::vector<std::int64_t> c(rank());
  decode(index, c.data());
  GroupElement out;
  for (auto v : c) out.emplace_back(static_cast<long>(v));
  return out;
}

std::int64_t EnumeratedForm::pair(const std::int64_t* x, const std::int64_t* y) const {
  const std::size_t k = orders_.size();
  __int128 acc = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (x[i] == 0) continue;
    __int128 row = 0;
    for (std::size_t j = 0; j < k; ++j) row += static_cast<__int128>(gram_[i * k + j]) * y[j];
    acc += (row % exponent_) * x[i];
    acc %= exponent_;
  }
  return static_cast<std::int64_t>(acc);
}

std::int64_t EnumeratedForm::self(std::int64_t index) const {
  std::int64_t c[64];
  if (rank() > 64) throw ShapeError("EnumeratedForm: rank above 64");
  decode(index, c);
  return pair(c, c);
}

std::int64_t EnumeratedForm::numerator_of(const QmodZ& q) const {
  const Integer n(static_cast<long>(exponent_));
  if (!mpz_divisible_p(n.get_mpz_t(), q.den().get_mpz_t())) return -1;
  return to_int64(q.num() * (n / q.den()));
}

std::size_t EnumeratedForm::p_rank(std::int64_t p) const {
  return static_cast<std::size_t>(
      std::count_if(orders_.begin(), orders_.end(), [p](std::int64_t d) { return d % p == 0; }));
}

bool EnumeratedForm::generates(const std::vector<std::int64_t>& indices) const {
  const std::size_t k = rank();
  std::vector<std::vector<std::int64_t>> coords(indices.size(), std::vector<std::int64_t>(k));
  for (std::size_t e = 0; e < indices.size(); ++e) decode(indices[e], coords[e].data());
  for (std::int64_t p : primes_) {
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < k; ++i)
      if (orders_[i] % p == 0) cols.push_back(i);
    if (cols.size() > indices.size()) return false;
    // rank over F_p of the images in H/pH
    std::vector<std::vector<std::int64_t>> m(indices.size(), std::vector<std::int64_t>(cols.size()));
    for (std::size_t e = 0; e < indices.size(); ++e)
      for (std::size_t c = 0; c < cols.size(); ++c) m[e][c] = coords[e][cols[c]] % p;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols.size() && rank < m.size(); ++c) {
      std::size_t piv = rank;
      while (piv < m.size() && m[piv][c] == 0) ++piv;
      if (piv == m.size()) continue;
      std::swap(m[piv], m[rank]);
      // inverse by Fermat
      std::int64_t inv = 1, b = m[rank][c], e = p - 2;
      while (e > 0) {
        if (e & 1) inv = inv * b % p;
        b = b * b % p;
        e >>= 1;
      }
      for (std::size_t r = rank + 1; r < m.size(); ++r) {
        const std::int64_t f = m[r][c] * inv % p;
        if (f == 0) continue;
        for (std::size_t j = c; j < cols.size(); ++j)
          m[r][j] = ((m[r][j] - f * m[rank][j]) % p + p) % p;
      }
      ++rank;
    }
    if (rank < cols.size()) return false;
  }
  return true;
}

}  // namespace gordian
