#pragma once

// Knot-table loading and the on-disk invariant cache.

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gordian/error.hpp"
#include "gordian/exactmat.hpp"
#include "gordian/obstruct.hpp"
#include "gordian/table.hpp"

namespace gordian {

/// Parses "[[-1,1],[0,-1]]"; "[]" is the 0x0 matrix.
IntMatrix parse_matrix_literal(std::string_view text);

struct LoadOptions {
  /// 0 = detect from the header line (tab if present, else comma).
  char delimiter = 0;
  /// When false, invalid records are skipped and listed in `issues` instead
  /// of failing the load.
  bool strict = true;
};

/// Every record-level validation failure found while loading.
class TableValidationError : public DataError {
 public:
  explicit TableValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct LoadedTable {
  KnotTable table;
  std::vector<std::string> issues;
};

/// Reads a delimited knot table. Required columns: name, seifert_matrix.
/// Optional: crossing_number, signature, determinant, s_invariant,
/// tau_invariant, unknotting_number ("n" or "lo..hi"), alternating (Y/N),
/// bridge_index, symmetry_type.
LoadedTable load_table(const std::filesystem::path& path, const LoadOptions& options = {});
/// Same, from in-memory text; `source` names the origin in messages.
LoadedTable parse_table(std::string_view text, const std::string& source,
                        const LoadOptions& options = {});

std::string sha256_hex(std::string_view bytes);

/// Cache key: table digest plus canonical expression text.
std::string cache_key(const std::string& table_digest, const KnotExpr& expr);

/// Persistent map from cache_key to KnotInvariants, stored as versioned
/// JSON. A missing file is an empty cache; an unreadable or corrupt one is
/// discarded with a warning.
class InvariantCache {
 public:
  InvariantCache() = default;
  explicit InvariantCache(std::filesystem::path path);

  std::optional<KnotInvariants> get(const std::string& key) const;
  void put(const std::string& key, const KnotInvariants& value);
  /// Writes the file if anything changed since the last flush.
  void flush();

  std::size_t size() const;
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  static constexpr int kVersion = 1;

 private:
  using Map = std::unordered_map<std::string, std::string>;
  std::shared_ptr<const Map> snapshot() const;

  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Map> entries_ = std::make_shared<Map>();
  bool dirty_ = false;
  std::vector<std::string> warnings_;
};

/// Serialized form used by the cache (also handy for golden tests).
std::string serialize_invariants(const KnotInvariants& inv);
KnotInvariants deserialize_invariants(const std::string& text);

}  // namespace gordian
