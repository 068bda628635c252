#include "gordian/exactmat.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "gordian/error.hpp"

namespace gordian {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged matrix initializer");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diagonal(const std::vector<Integer>& d) {
  IntMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::symmetric() const {
  if (!square()) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c)
      if ((*this)(r, c) != (*this)(c, r)) return false;
  return true;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Integer& k) {
  if (k == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += k * (*this)(src, c);
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src, const Integer& k) {
  if (k == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += k * (*this)(r, src);
}

void IntMatrix::negate_row(std::size_t r) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ShapeError("matrix sum: shape mismatch");
  IntMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw ShapeError("matrix difference: shape mismatch");
  IntMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

IntMatrix operator-(const IntMatrix& a) {
  IntMatrix out = a;
  for (auto& v : out.data_) v = -v;
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw ShapeError("matrix product: inner dimensions differ");
  IntMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Integer& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

IntMatrix IntMatrix::block_sum(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.rows_ + b.rows_, a.cols_ + b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r)
    for (std::size_t c = 0; c < a.cols_; ++c) out(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows_; ++r)
    for (std::size_t c = 0; c < b.cols_; ++c) out(a.rows_ + r, a.cols_ + c) = b(r, c);
  return out;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) os << ',';
    os << '[';
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) os << ',';
      os << (*this)(r, c);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m) { return os << m.to_string(); }

Integer det(const IntMatrix& m) {
  if (!m.square()) throw ShapeError("det: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = std::move(v);
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  Integer d = a(n - 1, n - 1);
  return sign < 0 ? Integer(-d) : d;
}

IntMatrix adjugate(const IntMatrix& m) {
  if (!m.square()) throw ShapeError("adjugate: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return IntMatrix();
  if (n == 1) return IntMatrix::identity(1);
  IntMatrix adj(n, n);
  IntMatrix minor(n - 1, n - 1);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t i = 0, mi = 0; i < n; ++i) {
        if (i == r) continue;
        for (std::size_t j = 0, mj = 0; j < n; ++j) {
          if (j == c) continue;
          minor(mi, mj++) = m(i, j);
        }
        ++mi;
      }
      Integer cof = det(minor);
      // adj is the transposed cofactor matrix
      adj(c, r) = ((r + c) % 2 == 0) ? cof : Integer(-cof);
    }
  }
  return adj;
}

SmithDecomposition smith(const IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  const std::size_t k = std::min(rows, cols);
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);

  bool exhausted = false;
  for (std::size_t t = 0; t < k && !exhausted; ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block, first in column-major
      // order, becomes the pivot
      std::size_t pr = rows, pc = cols;
      for (std::size_t j = t; j < cols; ++j)
        for (std::size_t i = t; i < rows; ++i) {
          if (a(i, j) == 0) continue;
          if (pr == rows || mpz_cmpabs(a(i, j).get_mpz_t(), a(pr, pc).get_mpz_t()) < 0) {
            pr = i;
            pc = j;
          }
        }
      if (pr == rows) {  // trailing block is zero
        exhausted = true;
        break;
      }
      a.swap_rows(t, pr);
      u.swap_rows(t, pr);
      a.swap_cols(t, pc);
      v.swap_cols(t, pc);

      bool clean = true;
      Integer q;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        a.add_row_multiple(i, t, -q);
        u.add_row_multiple(i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        a.add_col_multiple(j, t, -q);
        v.add_col_multiple(j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            a.add_row_multiple(t, i, 1);
            u.add_row_multiple(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (!exhausted && a(t, t) < 0) {
      a.negate_row(t);
      u.negate_row(t);
    }
  }
  SmithDecomposition out{std::move(u), std::move(v), {}};
  out.D.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.D.push_back(a(i, i));
  return out;
}

IntMatrix unimodular_inverse(const IntMatrix& m) {
  Integer d = det(m);
  if (d != 1 && d != -1) throw ArgumentError("unimodular_inverse: determinant is not +-1");
  IntMatrix adj = adjugate(m);
  return d == 1 ? adj : -adj;
}

int signature(const IntMatrix& s) {
  if (!s.symmetric()) throw ShapeError("signature: matrix is not symmetric");
  const std::size_t n = s.rows();
  std::vector<mpq_class> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = s(i, j);
  auto at = [&](std::size_t i, std::size_t j) -> mpq_class& { return a[i * n + j]; };
  auto swap_index = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t c = 0; c < n; ++c) std::swap(at(x, c), at(y, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(at(r, x), at(r, y));
  };
  // row r -= f * row p, then the matching column operation
  auto eliminate = [&](std::size_t r, std::size_t p, const mpq_class& f) {
    for (std::size_t c = 0; c < n; ++c) at(r, c) -= f * at(p, c);
    for (std::size_t c = 0; c < n; ++c) at(c, r) -= f * at(c, p);
  };

  int sig = 0;
  std::size_t k = 0;
  while (k < n) {
    std::size_t piv = n;
    for (std::size_t i = k; i < n; ++i)
      if (at(i, i) != 0) {
        piv = i;
        break;
      }
    if (piv != n) {
      swap_index(k, piv);
      const mpq_class d = at(k, k);
      for (std::size_t r = k + 1; r < n; ++r) {
        if (at(r, k) == 0) continue;
        mpq_class f = at(r, k) / d;
        eliminate(r, k, f);
      }
      sig += sgn(d);
      ++k;
      continue;
    }
    // zero diagonal: pivot on a hyperbolic 2x2 block [[0,b],[b,0]]
    std::size_t other = n;
    for (std::size_t j = k + 1; j < n; ++j)
      if (at(k, j) != 0) {
        other = j;
        break;
      }
    if (other == n) throw SingularMatrixError("signature: matrix is singular");
    swap_index(k + 1, other);
    const mpq_class b = at(k, k + 1);
    for (std::size_t r = k + 2; r < n; ++r) {
      mpq_class fk = at(r, k) / b;
      mpq_class fl = at(r, k + 1) / b;
      if (fk != 0) eliminate(r, k + 1, fk);
      if (fl != 0) eliminate(r, k, fl);
    }
    k += 2;
  }
  return sig;
}

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (std::int64_t d = 3; d <= p / d; d += 2)
    if (p % d == 0) return false;
  return true;
}

namespace {

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % p);
}

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t p) {
  std::int64_t r = 1 % p;
  b %= p;
  while (e > 0) {
    if (e & 1) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}

}  // namespace

std::size_t rank_mod_p(const IntMatrix& m, std::int64_t p) {
  if (!is_prime(p)) throw ArgumentError("rank_mod_p: " + std::to_string(p) + " is not prime");
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::int64_t> a(rows * cols);
  const Integer pz(static_cast<long>(p));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      a[r * cols + c] = to_int64(mod_floor(m(r, c), pz));

  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != rank)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[piv * cols + j], a[rank * cols + j]);
    const std::int64_t inv = powmod(a[rank * cols + c], p - 2, p);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      std::int64_t f = mulmod(a[r * cols + c], inv, p);
      if (f == 0) continue;
      for (std::size_t j = c; j < cols; ++j) {
        std::int64_t v = a[r * cols + j] - mulmod(f, a[rank * cols + j], p);
        a[r * cols + j] = v < 0 ? v + p : v;
      }
    }
    ++rank;
  }
  return rank;
}

Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

std::int64_t to_int64(const Integer& v) {
  if (!v.fits_slong_p()) throw ArgumentError("integer " + v.get_str() + " exceeds 64 bits");
  return v.get_si();
}

QmodZ::QmodZ(Integer num, Integer den) {
  if (den == 0) throw ArgumentError("QmodZ: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  num = mod_floor(num, den);
  Integer g = gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  num_ = std::move(num);
  den_ = std::move(den);
}

QmodZ QmodZ::operator+(const QmodZ& o) const {
  return QmodZ(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

QmodZ QmodZ::operator-() const { return QmodZ(-num_, den_); }

QmodZ QmodZ::operator*(const Integer& k) const { return QmodZ(num_ * k, den_); }

bool operator<(const QmodZ& a, const QmodZ& b) {
  // compare as rationals in [0, 1)
  return a.num_ * b.den_ < b.num_ * a.den_;
}

std::string QmodZ::to_string() const { return num_.get_str() + "/" + den_.get_str(); }

QmodZ QmodZ::parse(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return QmodZ(Integer(text), 1);
    return QmodZ(Integer(text.substr(0, slash)), Integer(text.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed fraction '" + text + "'", 0);
  }
}

std::ostream& operator<<(std::ostream& os, const QmodZ& q) { return os << q.to_string(); }

}  // namespace gordian
