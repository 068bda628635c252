#include "gordian/scan.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "gordian/error.hpp"

namespace gordian {

namespace {

int crossings_of(const KnotRecord& rec) {
  if (rec.crossing_number) return *rec.crossing_number;
  const auto us = rec.name.find('_');
  if (us != std::string::npos) {
    try {
      return std::stoi(rec.name.substr(0, us));
    } catch (const std::exception&) {
    }
  }
  return 0;
}

bool amphichiral(const KnotTable& table, const std::string& name) {
  const KnotRecord* rec = table.find(name);
  return rec && rec->amphichiral();
}

ScanKnot make_knot(std::vector<Summand> summands, int crossings) {
  std::sort(summands.begin(), summands.end(), [](const Summand& a, const Summand& b) {
    if (a.name != b.name) return knot_name_less(a.name, b.name);
    return a.mirrored < b.mirrored;
  });
  ScanKnot k;
  k.expr.summands = std::move(summands);
  k.name = k.expr.to_string();
  k.crossings = crossings;
  return k;
}

ScanKnot mirror_of(const ScanKnot& k, const KnotTable& table) {
  std::vector<Summand> s = k.expr.summands;
  for (auto& t : s)
    if (!amphichiral(table, t.name)) t.mirrored = !t.mirrored;
  return make_knot(std::move(s), k.crossings);
}

void append_composites(const std::vector<ScanKnot>& primes, std::size_t from,
                       std::vector<Summand>& current, int crossings, int bound,
                       std::vector<ScanKnot>& out) {
  for (std::size_t i = from; i < primes.size(); ++i) {
    const int c = crossings + primes[i].crossings;
    if (c > bound) continue;
    current.push_back(primes[i].expr.summands.front());
    if (current.size() >= 2) out.push_back(make_knot(current, c));
    append_composites(primes, i, current, c, bound, out);
    current.pop_back();
  }
}

std::string opt_str(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> row_cells(const ScanRow& r) {
  return {r.pair_key,
          r.knot_j,
          r.knot_k,
          r.det_j.get_str(),
          r.det_k.get_str(),
          r.coprime ? "true" : "false",
          opt_str(r.bound_sigma),
          opt_str(r.bound_s),
          opt_str(r.bound_tau),
          std::to_string(r.bound_fp),
          to_string(r.d1),
          to_string(r.d2),
          std::to_string(r.lower),
          opt_str(r.upper),
          r.exact ? "true" : "false",
          std::to_string(r.millis)};
}

nlohmann::ordered_json summary_json(const ScanSummary& s) {
  nlohmann::ordered_json j;
  j["pairs"] = s.pairs;
  j["coprime_pairs"] = s.coprime_pairs;
  j["d1_violated"] = s.d1_violated;
  j["d2_violated"] = s.d2_violated;
  j["d1_beats_classical"] = s.d1_beats;
  j["d1_beats_classical_exact"] = s.d1_beats_exact;
  j["d2_beats_classical"] = s.d2_beats;
  j["d2_beats_classical_exact"] = s.d2_beats_exact;
  j["exact"] = s.exact;
  j["cap_rows"] = s.cap_rows;
  j["inconsistent_rows"] = s.inconsistent_rows;
  j["prime_pairs"] = s.prime_pairs;
  j["prime_d1_beats_classical"] = s.prime_d1_beats;
  j["prime_d1_beats_classical_exact"] = s.prime_d1_beats_exact;
  j["prime_d2_beats_classical"] = s.prime_d2_beats;
  j["prime_d2_beats_classical_exact"] = s.prime_d2_beats_exact;
  return j;
}

}  // namespace

int ScanRow::classical_best() const {
  int b = bound_fp;
  for (const auto& v : {bound_sigma, bound_s, bound_tau})
    if (v) b = std::max(b, *v);
  return b;
}

ScanSummary summarize(const std::vector<ScanRow>& rows) {
  ScanSummary s;
  for (const auto& r : rows) {
    ++s.pairs;
    if (r.coprime) ++s.coprime_pairs;
    if (r.d1 == ObstructionStatus::violated) ++s.d1_violated;
    if (r.d2 == ObstructionStatus::violated) ++s.d2_violated;
    if (r.d1 == ObstructionStatus::cap || r.d2 == ObstructionStatus::cap) ++s.cap_rows;
    if (r.inconsistent) ++s.inconsistent_rows;
    if (r.exact) ++s.exact;
    const int classical = r.classical_best();
    const bool d1_beats =
        r.d1 == ObstructionStatus::violated && classical <= 1 && !r.both_two_bridge;
    const bool d1_exact = d1_beats && r.upper && *r.upper <= 2;
    const bool d2_beats = r.d2 == ObstructionStatus::violated && classical <= 2;
    const bool d2_exact = d2_beats && r.upper && *r.upper <= 3;
    s.d1_beats += d1_beats;
    s.d1_beats_exact += d1_exact;
    s.d2_beats += d2_beats;
    s.d2_beats_exact += d2_exact;
    if (!r.composite) {
      ++s.prime_pairs;
      s.prime_d1_beats += d1_beats;
      s.prime_d1_beats_exact += d1_exact;
      s.prime_d2_beats += d2_beats;
      s.prime_d2_beats_exact += d2_exact;
    }
  }
  return s;
}

std::vector<ScanKnot> scan_knots(const KnotTable& table, const ScanOptions& options) {
  std::vector<ScanKnot> primes;
  for (const auto& name : table.names_in_order()) {
    if (is_unknot_name(name)) continue;
    const KnotRecord& rec = *table.find(name);
    const int c = crossings_of(rec);
    if (options.max_crossings > 0 && c > options.max_crossings) continue;
    primes.push_back(make_knot({Summand{name, false, false}}, c));
    if (!rec.amphichiral()) primes.push_back(make_knot({Summand{name, true, false}}, c));
  }
  std::vector<ScanKnot> out = primes;
  if (options.max_composite_crossings > 0) {
    std::vector<Summand> current;
    append_composites(primes, 0, current, 0, options.max_composite_crossings, out);
  }
  return out;
}

std::string pair_key(const ScanKnot& j, const ScanKnot& k, const KnotTable& table) {
  auto unordered = [](const std::string& a, const std::string& b) {
    return a < b ? a + " | " + b : b + " | " + a;
  };
  const std::string direct = unordered(j.name, k.name);
  const std::string mirrored = unordered(mirror_of(j, table).name, mirror_of(k, table).name);
  return std::min(direct, mirrored);
}

ScanResult scan_pairs(const KnotTable& table, const ScanOptions& options) {
  const std::vector<ScanKnot> knots = scan_knots(table, options);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < knots.size(); ++i) index.emplace(knots[i].name, i);

  // one representative per pair class, oriented as written in its key
  std::map<std::string, std::pair<std::size_t, std::size_t>> classes;
  for (std::size_t a = 0; a < knots.size(); ++a)
    for (std::size_t b = a + 1; b < knots.size(); ++b) {
      const std::string key = pair_key(knots[a], knots[b], table);
      if (classes.count(key)) continue;
      const auto bar = key.find(" | ");
      const std::size_t x = index.at(key.substr(0, bar));
      const std::size_t y = index.at(key.substr(bar + 3));
      if (options.filter && !options.filter(knots[x], knots[y])) continue;
      classes.emplace(key, std::make_pair(x, y));
    }

  const unsigned jobs = std::max(1u, options.jobs);
  auto parallel_for = [jobs](std::size_t n, const auto& body) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    };
    for (unsigned t = 1; t < jobs; ++t) workers.emplace_back(work);
    work();
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
  };

  std::vector<KnotInvariants> inv(knots.size());
  parallel_for(knots.size(), [&](std::size_t i) {
    const std::string key = cache_key(table.digest, knots[i].expr);
    if (options.cache)
      if (auto hit = options.cache->get(key)) {
        inv[i] = std::move(*hit);
        return;
      }
    inv[i] = compute_invariants(knots[i].expr, table);
    if (options.cache) options.cache->put(key, inv[i]);
  });
  if (options.cache) options.cache->flush();

  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> work(classes.begin(),
                                                                                classes.end());
  ScanResult result;
  result.rows.resize(work.size());
  ReportOptions ropts;
  ropts.limits = options.limits;
  ropts.eps = options.eps;
  parallel_for(work.size(), [&](std::size_t w) {
    const auto& [key, ij] = work[w];
    const auto [x, y] = ij;
    const auto start = std::chrono::steady_clock::now();
    const BoundReport rep = report_from_invariants(knots[x].name, inv[x], knots[y].name, inv[y], ropts);
    ScanRow& row = result.rows[w];
    row.pair_key = key;
    row.knot_j = rep.knot_j;
    row.knot_k = rep.knot_k;
    row.det_j = rep.det_j;
    row.det_k = rep.det_k;
    row.coprime = rep.coprime;
    row.bound_sigma = rep.classical.sigma;
    row.bound_s = rep.classical.s;
    row.bound_tau = rep.classical.tau;
    row.bound_fp = rep.classical.fp;
    row.d1 = rep.d1;
    row.d2 = rep.d2;
    row.lower = rep.lower;
    row.upper = rep.upper;
    row.exact = rep.exact;
    row.inconsistent = rep.upper && rep.lower > *rep.upper;
    row.composite = inv[x].summands > 1 || inv[y].summands > 1;
    row.both_two_bridge = inv[x].two_bridge && inv[y].two_bridge;
    if (options.record_timing)
      row.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  });
  result.summary = summarize(result.rows);
  return result;
}

const std::vector<std::string> kScanColumns = {
    "pair_key", "knotJ",       "knotK",       "detJ",      "detK",      "coprime",
    "bound_sigma", "bound_s",  "bound_tau",   "bound_fp",  "d1_status", "d2_status",
    "lower",    "upper",       "exact",       "millis"};

ReportFormat parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  if (s == "text") return ReportFormat::text;
  throw ArgumentError("unknown output format '" + s + "' (expected text, csv or json)");
}

void emit_report(const std::vector<ScanRow>& rows, const ScanSummary& summary,
                 ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::csv: {
      for (std::size_t c = 0; c < kScanColumns.size(); ++c)
        out << (c ? "," : "") << kScanColumns[c];
      out << '\n';
      for (const auto& r : rows) {
        const auto cells = row_cells(r);
        for (std::size_t c = 0; c < cells.size(); ++c) out << (c ? "," : "") << csv_field(cells[c]);
        out << '\n';
      }
      break;
    }
    case ReportFormat::json: {
      nlohmann::ordered_json doc;
      doc["columns"] = kScanColumns;
      auto arr = nlohmann::ordered_json::array();
      for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["pair_key"] = r.pair_key;
        j["knotJ"] = r.knot_j;
        j["knotK"] = r.knot_k;
        j["detJ"] = to_int64(r.det_j);
        j["detK"] = to_int64(r.det_k);
        j["coprime"] = r.coprime;
        auto opt = [](const std::optional<int>& v) {
          return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
        };
        j["bound_sigma"] = opt(r.bound_sigma);
        j["bound_s"] = opt(r.bound_s);
        j["bound_tau"] = opt(r.bound_tau);
        j["bound_fp"] = r.bound_fp;
        j["d1_status"] = to_string(r.d1);
        j["d2_status"] = to_string(r.d2);
        j["lower"] = r.lower;
        j["upper"] = opt(r.upper);
        j["exact"] = r.exact;
        j["millis"] = r.millis;
        arr.push_back(std::move(j));
      }
      doc["rows"] = std::move(arr);
      doc["summary"] = summary_json(summary);
      out << doc.dump(2) << '\n';
      break;
    }
    case ReportFormat::text: {
      for (const auto& r : rows) {
        out << std::left << std::setw(28) << r.knot_j << std::setw(28) << r.knot_k
            << " d1=" << std::setw(12) << to_string(r.d1) << " d2=" << std::setw(12)
            << to_string(r.d2) << " lower=" << r.lower;
        if (r.upper) out << " upper=" << *r.upper;
        if (r.exact) out << " exact";
        out << '\n';
      }
      const auto counts = summary_json(summary);
      for (auto it = counts.begin(); it != counts.end(); ++it)
        out << it.key() << ": " << it.value() << '\n';
      break;
    }
  }
}

void emit_report(const std::vector<ScanRow>& rows, const ScanSummary& summary,
                 ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  emit_report(rows, summary, format, out);
  out.flush();
  if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace gordian
