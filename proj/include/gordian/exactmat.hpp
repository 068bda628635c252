#pragma once

// Exact integer matrix kernel. All arithmetic is arbitrary precision.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace gordian {

using Integer = mpz_class;

/// Dense row-major matrix over Z.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix diagonal(const std::vector<Integer>& d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  IntMatrix transpose() const;
  bool symmetric() const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  /// row[dst] += k * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& k);
  /// col[dst] += k * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& k);
  void negate_row(std::size_t r);

  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

  /// Block-diagonal sum [[a, 0], [0, b]].
  static IntMatrix block_sum(const IntMatrix& a, const IntMatrix& b);

  /// Literal form "[[a,b],[c,d]]"; the 0x0 matrix prints as "[]".
  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

/// Fraction-free (Bareiss) determinant. The 0x0 determinant is 1.
Integer det(const IntMatrix& m);

/// Classical adjoint: m * adjugate(m) == det(m) * I.
IntMatrix adjugate(const IntMatrix& m);

/// U * M * V == diag(D), U and V unimodular, D[i] | D[i+1], D[i] >= 0 with
/// zeros last. D has min(rows, cols) entries.
struct SmithDecomposition {
  IntMatrix U;
  IntMatrix V;
  std::vector<Integer> D;
};

SmithDecomposition smith(const IntMatrix& m);

/// Exact inverse of a unimodular matrix (det = +-1).
IntMatrix unimodular_inverse(const IntMatrix& m);

/// Positive minus negative inertia of a nonsingular symmetric matrix, by
/// rational congruence diagonalization.
int signature(const IntMatrix& s);

bool is_prime(std::int64_t p);

/// Rank of m over F_p.
std::size_t rank_mod_p(const IntMatrix& m, std::int64_t p);

/// Element of Q/Z in lowest terms, 0 <= num < den.
class QmodZ {
 public:
  QmodZ() : num_(0), den_(1) {}
  QmodZ(Integer num, Integer den);

  const Integer& num() const noexcept { return num_; }
  const Integer& den() const noexcept { return den_; }
  bool is_zero() const { return num_ == 0; }

  QmodZ operator+(const QmodZ& o) const;
  QmodZ operator-() const;
  QmodZ operator-(const QmodZ& o) const { return *this + (-o); }
  QmodZ operator*(const Integer& k) const;

  friend bool operator==(const QmodZ& a, const QmodZ& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const QmodZ& a, const QmodZ& b);

  /// "num/den"
  std::string to_string() const;
  /// Accepts "num/den" or an integer; reduces mod 1.
  static QmodZ parse(const std::string& text);

 private:
  Integer num_;
  Integer den_;
};

std::ostream& operator<<(std::ostream& os, const QmodZ& q);

/// Nonnegative residue of a modulo m (m > 0).
Integer mod_floor(const Integer& a, const Integer& m);

/// Converts an Integer that is known to fit; throws ArgumentError otherwise.
std::int64_t to_int64(const Integer& v);

}  // namespace gordian
