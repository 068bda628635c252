#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gordian/exactmat.hpp"

namespace gordian {

/// One row of a knot table. Optional invariants are absent when the source
/// did not provide them; absence never means zero.
struct KnotRecord {
  std::string name;
  std::optional<int> crossing_number;
  IntMatrix seifert;
  std::optional<int> sigma;
  std::optional<Integer> det;
  std::optional<int> s;
  std::optional<int> tau;
  std::optional<int> u_min;
  std::optional<int> u_max;
  std::optional<bool> alternating;
  std::optional<int> bridge_index;
  /// Free-form symmetry type, e.g. "reversible", "fully amphicheiral".
  std::optional<std::string> symmetry;

  /// True when the symmetry column says the knot is isotopic to its mirror
  /// (up to orientation).
  bool amphichiral() const;
  bool two_bridge() const { return bridge_index && *bridge_index <= 2; }
};

struct KnotTable {
  std::map<std::string, KnotRecord> records;
  std::string source_path;
  /// Hex SHA-256 of the source bytes.
  std::string digest;

  const KnotRecord* find(const std::string& name) const;
  /// Names in crossing-number then table order ("3_1" < "10_1").
  std::vector<std::string> names_in_order() const;
};

/// Orders knot names like "3_1", "10_139" by crossing number then index;
/// anything else falls back to lexicographic order.
bool knot_name_less(const std::string& a, const std::string& b);

}  // namespace gordian
