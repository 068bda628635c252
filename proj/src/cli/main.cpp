// gordian: command-line front end.
//
//   gordian info EXPR
//   gordian bound EXPR_J EXPR_K
//   gordian candidates D
//   gordian scan
//
// Exit codes: 0 success, 1 usage or parse error, 2 data or validation
// error, 3 group-order cap exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gordian/error.hpp"
#include "gordian/ingest.hpp"
#include "gordian/knots.hpp"
#include "gordian/linkform.hpp"
#include "gordian/obstruct.hpp"
#include "gordian/scan.hpp"

#ifndef GORDIAN_DEFAULT_TABLE
#define GORDIAN_DEFAULT_TABLE "data/knots_le10.tsv"
#endif

namespace {

using gordian::Integer;
using json = nlohmann::ordered_json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCap = 3;

struct CliConfig {
  std::string table = GORDIAN_DEFAULT_TABLE;
  std::string cache;
  std::uint64_t cap = gordian::SearchLimits{}.cap;
  unsigned jobs = 1;
  std::string format = "text";
  std::string eps = "both";
  int max_composite = 0;
  int max_crossings = 0;
  std::string output;
  bool no_timing = false;
};

int parse_eps(const std::string& s) {
  if (s == "both") return 0;
  if (s == "+1" || s == "1") return 1;
  if (s == "-1") return -1;
  throw gordian::ArgumentError("--eps must be +1, -1 or both, got '" + s + "'");
}

gordian::KnotTable load(const CliConfig& cfg) {
  return gordian::load_table(cfg.table).table;
}

std::string join_orders(const std::vector<Integer>& orders) {
  std::string s = "(";
  for (std::size_t i = 0; i < orders.size(); ++i) s += (i ? "," : "") + orders[i].get_str();
  return s + ")";
}

std::string gram_string(const gordian::LinkingForm& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.rank(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < f.rank(); ++j) s += (j ? "," : "") + f.gram(i, j).to_string();
    s += "]";
  }
  return s + "]";
}

json element_json(const gordian::GroupElement& g) {
  json a = json::array();
  for (const auto& x : g) a.push_back(x.get_str());
  return a;
}

json orders_json(const std::vector<Integer>& orders) {
  json a = json::array();
  for (const auto& o : orders) a.push_back(o.get_str());
  return a;
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

// Key/value lines shared by the text and csv renderings.
void emit_pairs(const std::vector<std::pair<std::string, std::string>>& kv,
                const std::string& format) {
  if (format == "csv") {
    std::cout << "key,value\n";
    for (const auto& [k, v] : kv) {
      const bool quote = v.find_first_of(",\"") != std::string::npos;
      std::string q = v;
      if (quote) {
        q.clear();
        for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        q = "\"" + q + "\"";
      }
      std::cout << k << ',' << q << '\n';
    }
  } else {
    for (const auto& [k, v] : kv) std::cout << k << ": " << v << '\n';
  }
}

int cmd_info(const CliConfig& cfg, const std::string& text) {
  const auto table = load(cfg);
  const auto expr = gordian::parse_expr(text);
  const auto seifert = gordian::seifert_matrix(expr, table);
  const auto inv = gordian::compute_invariants(expr, table);

  std::string ranks;
  for (const auto& [p, r] : inv.fp_ranks)
    ranks += (ranks.empty() ? "" : " ") + std::to_string(p) + ":" + std::to_string(r);

  if (cfg.format == "json") {
    json j;
    j["expression"] = expr.to_string();
    json summands = json::array();
    for (const auto& s : expr.summands) summands.push_back(gordian::KnotExpr{{s}}.to_string());
    j["summands"] = summands;
    j["seifert_size"] = seifert.size();
    j["det"] = inv.det.get_str();
    j["signature"] = inv.sigma;
    j["s"] = opt_json(inv.s);
    j["tau"] = opt_json(inv.tau);
    j["u_upper"] = opt_json(inv.u_upper);
    j["form_orders"] = orders_json(inv.form.orders());
    json gram = json::array();
    for (std::size_t a = 0; a < inv.form.rank(); ++a) {
      json row = json::array();
      for (std::size_t b = 0; b < inv.form.rank(); ++b) row.push_back(inv.form.gram(a, b).to_string());
      gram.push_back(row);
    }
    j["gram"] = gram;
    json fp = json::object();
    for (const auto& [p, r] : inv.fp_ranks) fp[std::to_string(p)] = r;
    j["fp_ranks"] = fp;
    std::cout << j.dump(2) << '\n';
    return 0;
  }

  std::string summands;
  for (const auto& s : expr.summands)
    summands += (summands.empty() ? "" : " ") + gordian::KnotExpr{{s}}.to_string();
  auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("-"); };
  emit_pairs({{"expression", expr.to_string()},
              {"summands", summands.empty() ? "unknot" : summands},
              {"seifert_size", std::to_string(seifert.size())},
              {"det", inv.det.get_str()},
              {"signature", std::to_string(inv.sigma)},
              {"s", opt(inv.s)},
              {"tau", opt(inv.tau)},
              {"u_upper", opt(inv.u_upper)},
              {"form_orders", join_orders(inv.form.orders())},
              {"gram", gram_string(inv.form)},
              {"fp_ranks", ranks.empty() ? "-" : ranks}},
             cfg.format);
  return 0;
}

json verdict_json(gordian::ObstructionStatus status,
                  const std::optional<gordian::ObstructionVerdict>& v) {
  json j;
  j["status"] = gordian::to_string(status);
  j["witness"] = nullptr;
  j["notes"] = v ? v->notes : "";
  if (v && v->witness) {
    if (const auto* g = std::get_if<gordian::GeneratorWitness>(&*v->witness)) {
      j["witness"] = json{{"generator", element_json(g->generator)}, {"eps", g->eps}};
    } else if (const auto* w = std::get_if<gordian::IsometryWitness>(&*v->witness)) {
      j["witness"] = json{{"candidate", w->candidate.to_string()},
                          {"v1", element_json(w->v1)},
                          {"v2", element_json(w->v2)}};
    }
  }
  return j;
}

int cmd_bound(const CliConfig& cfg, const std::string& a, const std::string& b) {
  const auto table = load(cfg);
  gordian::ReportOptions opts;
  opts.limits.cap = cfg.cap;
  opts.eps = parse_eps(cfg.eps);
  const auto r = gordian::report(gordian::parse_expr(a), gordian::parse_expr(b), table, opts);
  const auto& c = r.classical;

  if (cfg.format == "json") {
    json j;
    j["knotJ"] = r.knot_j;
    j["knotK"] = r.knot_k;
    j["detJ"] = r.det_j.get_str();
    j["detK"] = r.det_k.get_str();
    j["coprime"] = r.coprime;
    j["same_knot"] = r.same_knot;
    j["bounds"] = json{{"sigma", opt_json(c.sigma)},
                       {"s", opt_json(c.s)},
                       {"tau", opt_json(c.tau)},
                       {"fp", c.fp},
                       {"fp_prime", opt_json(c.fp_prime)}};
    j["group_orders"] = orders_json(r.group_orders);
    j["d1"] = verdict_json(r.d1, r.d1_verdict);
    j["d2"] = verdict_json(r.d2, r.d2_verdict);
    j["lower"] = r.lower;
    j["upper"] = opt_json(r.upper);
    j["exact"] = r.exact;
    j["verdict"] = r.verdict;
    std::cout << j.dump(2) << '\n';
  } else {
    auto opt = [](const auto& v) { return v ? std::to_string(*v) : std::string("-"); };
    std::string d1_note = r.d1_verdict ? r.d1_verdict->notes : "";
    std::string d2_note = r.d2_verdict ? r.d2_verdict->notes : "";
    emit_pairs({{"knotJ", r.knot_j},
                {"knotK", r.knot_k},
                {"detJ", r.det_j.get_str()},
                {"detK", r.det_k.get_str()},
                {"coprime", r.coprime ? "true" : "false"},
                {"group_orders", join_orders(r.group_orders)},
                {"bound_sigma", opt(c.sigma)},
                {"bound_s", opt(c.s)},
                {"bound_tau", opt(c.tau)},
                {"bound_fp", std::to_string(c.fp) + (c.fp_prime ? " (p=" + std::to_string(*c.fp_prime) + ")" : "")},
                {"d1_status", gordian::to_string(r.d1)},
                {"d1_notes", d1_note},
                {"d2_status", gordian::to_string(r.d2)},
                {"d2_notes", d2_note},
                {"lower", std::to_string(r.lower)},
                {"upper", opt(r.upper)},
                {"exact", r.exact ? "true" : "false"},
                {"verdict", r.verdict}},
               cfg.format);
  }
  const bool capped =
      r.d1 == gordian::ObstructionStatus::cap || r.d2 == gordian::ObstructionStatus::cap;
  return capped ? kExitCap : 0;
}

int cmd_candidates(const CliConfig& cfg, const std::string& text) {
  Integer d;
  if (text.empty() || d.set_str(text, 10) != 0) throw gordian::ArgumentError("not an integer: '" + text + "'");
  auto list = gordian::candidate_matrices(d);
  for (auto& c : gordian::candidate_matrices(-d)) list.push_back(std::move(c));
  if (cfg.format == "json") {
    json j;
    j["d"] = d.get_str();
    json a = json::array();
    for (const auto& c : list)
      a.push_back(json{{"a", c.a.get_str()}, {"b", c.b.get_str()}, {"c", c.c.get_str()},
                       {"det", c.det().get_str()}, {"matrix", c.to_string()}});
    j["candidates"] = a;
    std::cout << j.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    std::cout << "a,b,c,det,matrix\n";
    for (const auto& c : list)
      std::cout << c.a << ',' << c.b << ',' << c.c << ',' << c.det() << ",\"" << c.to_string()
                << "\"\n";
  } else {
    for (const auto& c : list) std::cout << c.to_string() << "  det " << c.det() << '\n';
  }
  return 0;
}

int cmd_scan(const CliConfig& cfg) {
  const auto table = load(cfg);
  gordian::ScanOptions opts;
  opts.max_composite_crossings = cfg.max_composite;
  opts.max_crossings = cfg.max_crossings;
  opts.limits.cap = cfg.cap;
  opts.eps = parse_eps(cfg.eps);
  opts.jobs = cfg.jobs;
  opts.record_timing = !cfg.no_timing;
  std::optional<gordian::InvariantCache> cache;
  if (!cfg.cache.empty()) {
    cache.emplace(cfg.cache);
    opts.cache = &*cache;
  }
  const auto format = gordian::parse_report_format(cfg.format);
  const auto result = gordian::scan_pairs(table, opts);
  if (cfg.output.empty())
    gordian::emit_report(result.rows, result.summary, format, std::cout);
  else
    gordian::emit_report(result.rows, result.summary, format, cfg.output);
  return result.summary.cap_rows > 0 ? kExitCap : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gordian-distance lower bounds from linking forms"};
  app.require_subcommand(1);
  app.fallthrough();
  CliConfig cfg;

  app.add_option("--table", cfg.table, "Knot table (TSV/CSV)")->envname("GORDIAN_TABLE");
  app.add_option("--cache", cfg.cache, "Invariant cache file")->envname("GORDIAN_CACHE");
  app.add_option("--cap", cfg.cap, "Group-order cap for exhaustive searches")
      ->envname("GORDIAN_CAP")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", cfg.jobs, "Worker threads")
      ->envname("GORDIAN_JOBS")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "Output format")
      ->envname("GORDIAN_FORMAT")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--eps", cfg.eps, "Sign restriction for the d1 test")
      ->envname("GORDIAN_EPS")
      ->check(CLI::IsMember({"+1", "1", "-1", "both"}));
  app.add_option("--max-composite-crossings", cfg.max_composite,
                 "Scan connected sums up to this total crossing number")
      ->envname("GORDIAN_MAX_COMPOSITE_CROSSINGS")
      ->check(CLI::NonNegativeNumber);

  std::string expr_a, expr_b, d_text;
  auto* info = app.add_subcommand("info", "Invariants of one knot expression");
  info->add_option("expr", expr_a, "Knot expression, e.g. \"3_1 # m4_1\"")->required();
  auto* bound = app.add_subcommand("bound", "Gordian-distance bounds for a pair");
  bound->add_option("J", expr_a)->required();
  bound->add_option("K", expr_b)->required();
  auto* cand = app.add_subcommand("candidates", "List the 2x2 candidate matrices for d");
  cand->add_option("d", d_text)->required();
  auto* scan = app.add_subcommand("scan", "Evaluate every pair in the table");
  scan->add_option("--max-crossings", cfg.max_crossings, "Skip table knots above this crossing number")
      ->envname("GORDIAN_MAX_CROSSINGS")
      ->check(CLI::NonNegativeNumber);
  scan->add_option("-o,--output", cfg.output, "Write the report here instead of stdout");
  scan->add_flag("--no-timing", cfg.no_timing, "Write millis = 0 for byte-stable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*info) return cmd_info(cfg, expr_a);
    if (*bound) return cmd_bound(cfg, expr_a, expr_b);
    if (*cand) return cmd_candidates(cfg, d_text);
    if (*scan) return cmd_scan(cfg);
  } catch (const gordian::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gordian::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gordian::CapExceededError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const gordian::TableValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto& issue : e.issues()) std::cerr << "  " << issue << '\n';
    return kExitData;
  } catch (const gordian::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
