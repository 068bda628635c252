#include "gordian/knots.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "gordian/error.hpp"

namespace gordian {

bool KnotRecord::amphichiral() const {
  if (!symmetry) return false;
  return symmetry->find("amphicheiral") != std::string::npos ||
         symmetry->find("amphichiral") != std::string::npos;
}

const KnotRecord* KnotTable::find(const std::string& name) const {
  auto it = records.find(name);
  return it == records.end() ? nullptr : &it->second;
}

std::vector<std::string> KnotTable::names_in_order() const {
  std::vector<std::string> names;
  names.reserve(records.size());
  for (const auto& [name, rec] : records) names.push_back(name);
  std::sort(names.begin(), names.end(), knot_name_less);
  return names;
}

namespace {

bool split_name(const std::string& s, long& crossings, long& index) {
  auto us = s.find('_');
  if (us == std::string::npos || us == 0 || us + 1 == s.size()) return false;
  auto r1 = std::from_chars(s.data(), s.data() + us, crossings);
  auto r2 = std::from_chars(s.data() + us + 1, s.data() + s.size(), index);
  return r1.ec == std::errc() && r1.ptr == s.data() + us && r2.ec == std::errc() &&
         r2.ptr == s.data() + s.size();
}

}  // namespace

bool knot_name_less(const std::string& a, const std::string& b) {
  long ca = 0, ia = 0, cb = 0, ib = 0;
  const bool pa = split_name(a, ca, ia);
  const bool pb = split_name(b, cb, ib);
  if (pa && pb) {
    if (ca != cb) return ca < cb;
    if (ia != ib) return ia < ib;
    return a < b;
  }
  if (pa != pb) return pa;  // table names sort before free-form ones
  return a < b;
}

bool is_unknot_name(std::string_view name) { return name == "unknot" || name == "0_1"; }

KnotExpr KnotExpr::inverse() const {
  KnotExpr out = *this;
  for (auto& s : out.summands) {
    s.mirrored = !s.mirrored;
    s.reversed = !s.reversed;
  }
  return out;
}

KnotExpr KnotExpr::mirror() const {
  KnotExpr out = *this;
  for (auto& s : out.summands) s.mirrored = !s.mirrored;
  return out;
}

KnotExpr KnotExpr::reverse() const {
  KnotExpr out = *this;
  for (auto& s : out.summands) s.reversed = !s.reversed;
  return out;
}

KnotExpr KnotExpr::connected_sum(const KnotExpr& a, const KnotExpr& b) {
  KnotExpr out = a;
  out.summands.insert(out.summands.end(), b.summands.begin(), b.summands.end());
  return out;
}

std::string KnotExpr::to_string() const {
  std::string out;
  for (const auto& s : summands) {
    if (is_unknot_name(s.name)) continue;
    if (!out.empty()) out += " # ";
    if (s.mirrored && s.reversed)
      out += '-';
    else if (s.mirrored)
      out += 'm';
    else if (s.reversed)
      out += 'r';
    out += s.name;
  }
  return out.empty() ? "unknot" : out;
}

KnotExpr parse_expr(std::string_view text) {
  KnotExpr expr;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i == text.size()) throw ParseError("empty knot expression", i);
  for (;;) {
    Summand s;
    for (;;) {
      skip_ws();
      if (i == text.size()) throw ParseError("expected knot name", i);
      const char c = text[i];
      if (c == 'm') {
        s.mirrored = !s.mirrored;
      } else if (c == 'r') {
        s.reversed = !s.reversed;
      } else if (c == '-') {
        s.mirrored = !s.mirrored;
        s.reversed = !s.reversed;
      } else {
        break;
      }
      ++i;
    }
    const std::size_t start = i;
    if (text.substr(i, 6) == "unknot") {
      i += 6;
    } else if (std::isdigit(static_cast<unsigned char>(text[i]))) {
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                 text[i] == '_'))
        ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + text[i] + "'", i);
    }
    s.name = std::string(text.substr(start, i - start));
    expr.summands.push_back(std::move(s));
    skip_ws();
    if (i == text.size()) break;
    if (text[i] != '#') throw ParseError(std::string("expected '#', found '") + text[i] + "'", i);
    ++i;
  }
  return expr;
}

SeifertMatrix::SeifertMatrix(IntMatrix a) : a_(std::move(a)) {
  if (!a_.square()) throw DataError("Seifert matrix is not square");
  if (a_.rows() % 2 != 0) throw DataError("Seifert matrix has odd size");
  const Integer skew = det(a_ - a_.transpose());
  if (skew != 1) throw DataError("Seifert matrix has det(A - A^T) = " + skew.get_str() + ", expected 1");
  const Integer sym = det(a_ + a_.transpose());
  if (mpz_even_p(sym.get_mpz_t()))
    throw DataError("Seifert matrix has even det(A + A^T) = " + sym.get_str());
}

IntMatrix SeifertMatrix::symmetrized() const { return a_ + a_.transpose(); }

SeifertMatrix SeifertMatrix::mirror() const {
  SeifertMatrix out;
  out.a_ = -a_.transpose();
  return out;
}

SeifertMatrix SeifertMatrix::reverse() const {
  SeifertMatrix out;
  out.a_ = a_.transpose();
  return out;
}

SeifertMatrix SeifertMatrix::block_sum(const SeifertMatrix& a, const SeifertMatrix& b) {
  SeifertMatrix out;
  out.a_ = IntMatrix::block_sum(a.a_, b.a_);
  return out;
}

SeifertMatrix seifert_matrix(const KnotExpr& expr, const KnotTable& table) {
  if (expr.summands.empty()) throw ArgumentError("knot expression has no summands");
  SeifertMatrix out;
  for (const auto& s : expr.summands) {
    if (is_unknot_name(s.name)) continue;
    const KnotRecord* rec = table.find(s.name);
    if (!rec) throw DataError("unknown knot '" + s.name + "'");
    SeifertMatrix a(rec->seifert);
    if (s.mirrored) a = a.mirror();
    if (s.reversed) a = a.reverse();
    out = SeifertMatrix::block_sum(out, a);
  }
  return out;
}

Integer knot_det(const SeifertMatrix& a) { return abs(det(a.symmetrized())); }

int knot_signature(const SeifertMatrix& a) { return signature(a.symmetrized()); }

std::size_t fp_rank(const SeifertMatrix& a, std::int64_t p) {
  if (p == 2 || !is_prime(p)) throw ArgumentError(std::to_string(p) + " is not an odd prime");
  return a.size() - rank_mod_p(a.symmetrized(), p);
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 0) n = -n;
  for (std::int64_t d = 2; d <= n / d; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace gordian
