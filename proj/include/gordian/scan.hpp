#pragma once

// Batch evaluation of every knot pair in a table.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gordian/ingest.hpp"
#include "gordian/knots.hpp"
#include "gordian/obstruct.hpp"

namespace gordian {

/// A knot taking part in a scan: a prime table knot, its mirror, or a
/// connected sum of those. Summands are sorted; amphichiral summands are
/// never mirrored.
struct ScanKnot {
  KnotExpr expr;
  std::string name;
  int crossings = 0;
};

struct ScanOptions {
  /// Include connected sums whose summand crossing numbers add up to at most
  /// this bound; 0 scans prime knots only.
  int max_composite_crossings = 0;
  /// Skip table knots above this crossing number; 0 = no limit.
  int max_crossings = 0;
  SearchLimits limits;
  int eps = 0;
  unsigned jobs = 1;
  /// Record wall time per row; disable for byte-stable output.
  bool record_timing = true;
  /// Keep only pairs for which this returns true.
  std::function<bool(const ScanKnot&, const ScanKnot&)> filter;
  InvariantCache* cache = nullptr;
};

struct ScanRow {
  std::string pair_key;
  std::string knot_j;
  std::string knot_k;
  Integer det_j, det_k;
  bool coprime = false;
  std::optional<int> bound_sigma;
  std::optional<int> bound_s;
  std::optional<int> bound_tau;
  int bound_fp = 0;
  ObstructionStatus d1 = ObstructionStatus::inapplicable;
  ObstructionStatus d2 = ObstructionStatus::inapplicable;
  int lower = 0;
  std::optional<int> upper;
  bool exact = false;
  std::int64_t millis = 0;
  /// At least one side is a connected sum.
  bool composite = false;
  /// Both sides are known two-bridge knots.
  bool both_two_bridge = false;
  bool inconsistent = false;

  int classical_best() const;
  friend bool operator==(const ScanRow&, const ScanRow&) = default;
};

/// Headline counts. "beats" means the linking-form bound exceeds every
/// classical bound: d1 violated with classical bounds <= 1, or d2 violated
/// with classical bounds <= 2. "exact" additionally has the unknotting
/// upper bound meet it (u-sum <= 2, resp. <= 3). The d1 counts skip pairs
/// of two two-bridge knots. Rows at the cap never count as beating.
struct ScanSummary {
  std::uint64_t pairs = 0;
  std::uint64_t coprime_pairs = 0;
  std::uint64_t d1_violated = 0;
  std::uint64_t d2_violated = 0;
  std::uint64_t d1_beats = 0;
  std::uint64_t d1_beats_exact = 0;
  std::uint64_t d2_beats = 0;
  std::uint64_t d2_beats_exact = 0;
  std::uint64_t exact = 0;
  std::uint64_t cap_rows = 0;
  std::uint64_t inconsistent_rows = 0;
  /// The same counts restricted to pairs of prime knots.
  std::uint64_t prime_pairs = 0;
  std::uint64_t prime_d1_beats = 0;
  std::uint64_t prime_d1_beats_exact = 0;
  std::uint64_t prime_d2_beats = 0;
  std::uint64_t prime_d2_beats_exact = 0;

  friend bool operator==(const ScanSummary&, const ScanSummary&) = default;
};

ScanSummary summarize(const std::vector<ScanRow>& rows);

/// Knots of the scan: every prime table knot (and its mirror when chiral)
/// plus connected sums up to the composite crossing bound.
std::vector<ScanKnot> scan_knots(const KnotTable& table, const ScanOptions& options);

/// Unordered pair key identifying (J, K), (K, J), (mJ, mK) and (mK, mJ).
std::string pair_key(const ScanKnot& j, const ScanKnot& k, const KnotTable& table);

struct ScanResult {
  std::vector<ScanRow> rows;
  ScanSummary summary;
};

/// One row per pair class, sorted by pair key regardless of `jobs`.
ScanResult scan_pairs(const KnotTable& table, const ScanOptions& options = {});

enum class ReportFormat { csv, json, text };

ReportFormat parse_report_format(const std::string& s);

/// Fixed CSV column order.
extern const std::vector<std::string> kScanColumns;

void emit_report(const std::vector<ScanRow>& rows, const ScanSummary& summary,
                 ReportFormat format, std::ostream& out);
/// Writes to a file; I/O failures raise DataError naming the path.
void emit_report(const std::vector<ScanRow>& rows, const ScanSummary& summary,
                 ReportFormat format, const std::string& path);

}  // namespace gordian
