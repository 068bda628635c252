#include "gordian/ingest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "gordian/knots.hpp"

namespace gordian {

using json = nlohmann::json;

IntMatrix parse_matrix_literal(std::string_view text) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto expect = [&](char c) {
    skip_ws();
    if (i >= text.size()) throw ParseError(std::string("expected '") + c + "', found end of input", i);
    if (text[i] != c) throw ParseError(std::string("expected '") + c + "', found '" + text[i] + "'", i);
    ++i;
  };

  std::vector<std::vector<Integer>> rows;
  expect('[');
  skip_ws();
  if (i < text.size() && text[i] == ']') {
    ++i;
  } else {
    for (;;) {
      const std::size_t row_start = i;
      expect('[');
      std::vector<Integer> row;
      skip_ws();
      if (i < text.size() && text[i] == ']') throw ParseError("empty matrix row", row_start);
      for (;;) {
        skip_ws();
        const std::size_t start = i;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        std::string token(text.substr(start, i - start));
        if (token.empty() || token == "-" || token == "+")
          throw ParseError("expected an integer", start);
        if (token[0] == '+') token.erase(0, 1);
        row.emplace_back(token);
        skip_ws();
        if (i < text.size() && text[i] == ',') {
          ++i;
          continue;
        }
        expect(']');
        break;
      }
      if (!rows.empty() && row.size() != rows.front().size())
        throw ParseError("ragged row: expected " + std::to_string(rows.front().size()) +
                             " entries, found " + std::to_string(row.size()),
                         row_start);
      rows.push_back(std::move(row));
      skip_ws();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      expect(']');
      break;
    }
  }
  skip_ws();
  if (i != text.size()) throw ParseError("trailing characters after matrix", i);

  IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

TableValidationError::TableValidationError(std::vector<std::string> issues)
    : DataError([&] {
        std::string msg = std::to_string(issues.size()) + " invalid record(s):";
        for (const auto& s : issues) msg += "\n  " + s;
        return msg;
      }()),
      issues_(std::move(issues)) {}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 0xf];
  }
  return out;
}

namespace {

// One delimited line; double quotes may wrap fields containing the delimiter.
std::vector<std::string> split_fields(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  auto [p, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw DataError(what + ": '" + s + "' is not an integer");
  return v;
}

std::pair<int, int> parse_unknotting(const std::string& s) {
  std::string t = s;
  if (!t.empty() && t.front() == '[' && t.back() == ']') {
    t = t.substr(1, t.size() - 2);
    auto comma = t.find(',');
    if (comma == std::string::npos) throw DataError("unknotting_number: malformed range '" + s + "'");
    return {parse_int(trim(t.substr(0, comma)), "unknotting_number"),
            parse_int(trim(t.substr(comma + 1)), "unknotting_number")};
  }
  if (auto dots = t.find(".."); dots != std::string::npos)
    return {parse_int(trim(t.substr(0, dots)), "unknotting_number"),
            parse_int(trim(t.substr(dots + 2)), "unknotting_number")};
  const int v = parse_int(t, "unknotting_number");
  return {v, v};
}

bool parse_flag(const std::string& s, const std::string& what) {
  if (s == "Y" || s == "y" || s == "Yes" || s == "true" || s == "1") return true;
  if (s == "N" || s == "n" || s == "No" || s == "false" || s == "0") return false;
  throw DataError(what + ": expected Y or N, found '" + s + "'");
}

KnotRecord build_record(const std::map<std::string, std::string>& cells) {
  auto get = [&](const char* col) -> std::optional<std::string> {
    auto it = cells.find(col);
    if (it == cells.end() || it->second.empty()) return std::nullopt;
    return it->second;
  };
  KnotRecord rec;
  rec.name = *get("name");
  const auto matrix_text = get("seifert_matrix");
  if (!matrix_text && !is_unknot_name(rec.name)) throw DataError("missing Seifert matrix");
  rec.seifert = matrix_text ? parse_matrix_literal(*matrix_text) : IntMatrix();
  const SeifertMatrix a(rec.seifert);

  if (auto v = get("crossing_number")) rec.crossing_number = parse_int(*v, "crossing_number");
  const Integer det = knot_det(a);
  const int sigma = rec.seifert.rows() == 0 ? 0 : knot_signature(a);
  if (auto v = get("determinant")) {
    Integer recorded;
    if (recorded.set_str(*v, 10) != 0) throw DataError("determinant: '" + *v + "' is not an integer");
    // KnotInfo lists the unknot with determinant 0 in some snapshots
    if (recorded != det && !(is_unknot_name(rec.name) && recorded == 0))
      throw DataError("determinant column says " + recorded.get_str() +
                      " but the Seifert matrix gives " + det.get_str());
    rec.det = det;
  }
  if (auto v = get("signature")) {
    const int recorded = parse_int(*v, "signature");
    if (recorded != sigma)
      throw DataError("signature column says " + std::to_string(recorded) +
                      " but the Seifert matrix gives " + std::to_string(sigma));
    rec.sigma = sigma;
  }
  if (auto v = get("s_invariant")) rec.s = parse_int(*v, "s_invariant");
  if (auto v = get("tau_invariant")) rec.tau = parse_int(*v, "tau_invariant");
  if (auto v = get("unknotting_number")) {
    auto [lo, hi] = parse_unknotting(*v);
    if (lo > hi) throw DataError("unknotting_number: range " + *v + " is empty");
    rec.u_min = lo;
    rec.u_max = hi;
  }
  if (auto v = get("alternating")) rec.alternating = parse_flag(*v, "alternating");
  if (auto v = get("bridge_index")) rec.bridge_index = parse_int(*v, "bridge_index");
  if (auto v = get("symmetry_type")) rec.symmetry = *v;

  if (rec.alternating.value_or(false)) {
    // -sigma = s = 2 tau for alternating knots
    if (!rec.s) rec.s = -sigma;
    if (!rec.tau) rec.tau = -sigma / 2;
    if (*rec.s != -sigma)
      throw DataError("alternating knot has s = " + std::to_string(*rec.s) +
                      " but sigma = " + std::to_string(sigma));
    if (2 * *rec.tau != -sigma)
      throw DataError("alternating knot has tau = " + std::to_string(*rec.tau) +
                      " but sigma = " + std::to_string(sigma));
  }
  return rec;
}

}  // namespace

LoadedTable parse_table(std::string_view text, const std::string& source,
                        const LoadOptions& options) {
  LoadedTable out;
  out.table.source_path = source;
  out.table.digest = sha256_hex(text);

  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos < text.size();) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size()) throw DataError(source + ": no header row");

  const std::string_view header_line = lines[first];
  const char delim = options.delimiter
                         ? options.delimiter
                         : (header_line.find('\t') != std::string_view::npos ? '\t' : ',');
  std::vector<std::string> header;
  for (auto& h : split_fields(header_line, delim)) header.push_back(trim(h));
  for (const char* required : {"name", "seifert_matrix"})
    if (std::find(header.begin(), header.end(), required) == header.end())
      throw DataError(source + ": missing required column '" + required + "'");

  std::vector<std::string> issues;
  for (std::size_t ln = first + 1; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    const std::string where = source + ":" + std::to_string(ln + 1);
    auto fields = split_fields(lines[ln], delim);
    if (fields.size() != header.size()) {
      issues.push_back(where + ": expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(fields.size()));
      continue;
    }
    std::map<std::string, std::string> cells;
    for (std::size_t c = 0; c < header.size(); ++c) cells[header[c]] = trim(fields[c]);
    const std::string name = cells["name"];
    if (name.empty()) {
      issues.push_back(where + ": empty name");
      continue;
    }
    try {
      KnotRecord rec = build_record(cells);
      if (out.table.records.count(name)) {
        issues.push_back(where + ": " + name + ": duplicate name");
        continue;
      }
      out.table.records.emplace(name, std::move(rec));
    } catch (const Error& e) {
      issues.push_back(where + ": " + name + ": " + e.what());
    }
  }
  if (!issues.empty() && options.strict) throw TableValidationError(std::move(issues));
  out.issues = std::move(issues);
  return out;
}

LoadedTable load_table(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read table '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_table(ss.str(), path.string(), options);
}

std::string cache_key(const std::string& table_digest, const KnotExpr& expr) {
  return table_digest + "|" + expr.to_string();
}

std::string serialize_invariants(const KnotInvariants& inv) {
  json j;
  j["det"] = inv.det.get_str();
  j["sigma"] = inv.sigma;
  j["s"] = inv.s ? json(*inv.s) : json(nullptr);
  j["tau"] = inv.tau ? json(*inv.tau) : json(nullptr);
  j["u_upper"] = inv.u_upper ? json(*inv.u_upper) : json(nullptr);
  j["u_exact"] = inv.u_exact;
  json fp = json::object();
  for (const auto& [p, r] : inv.fp_ranks) fp[std::to_string(p)] = r;
  j["fp_ranks"] = fp;
  json orders = json::array();
  for (const auto& d : inv.form.orders()) orders.push_back(d.get_str());
  j["orders"] = orders;
  json gram = json::array();
  for (const auto& q : inv.form.gram()) gram.push_back(q.to_string());
  j["gram"] = gram;
  j["summands"] = inv.summands;
  j["two_bridge"] = inv.two_bridge;
  return j.dump();
}

KnotInvariants deserialize_invariants(const std::string& text) {
  try {
    const json j = json::parse(text);
    KnotInvariants inv;
    inv.det = Integer(j.at("det").get<std::string>());
    inv.sigma = j.at("sigma").get<int>();
    if (!j.at("s").is_null()) inv.s = j.at("s").get<int>();
    if (!j.at("tau").is_null()) inv.tau = j.at("tau").get<int>();
    if (!j.at("u_upper").is_null()) inv.u_upper = j.at("u_upper").get<int>();
    inv.u_exact = j.at("u_exact").get<bool>();
    for (const auto& [p, r] : j.at("fp_ranks").items())
      inv.fp_ranks[std::stoll(p)] = r.get<std::size_t>();
    std::vector<Integer> orders;
    for (const auto& d : j.at("orders")) orders.emplace_back(d.get<std::string>());
    std::vector<QmodZ> gram;
    for (const auto& q : j.at("gram")) gram.push_back(QmodZ::parse(q.get<std::string>()));
    inv.form = LinkingForm(std::move(orders), std::move(gram));
    inv.summands = j.at("summands").get<std::size_t>();
    inv.two_bridge = j.at("two_bridge").get<bool>();
    return inv;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed cached invariants: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed cached invariants: ") + e.what());
  }
}

InvariantCache::InvariantCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // no cache yet
  auto map = std::make_shared<Map>();
  try {
    const json j = json::parse(in);
    if (j.at("version").get<int>() != kVersion)
      throw DataError("cache version " + j.at("version").dump() + " is not supported");
    for (const auto& [key, value] : j.at("entries").items()) {
      const std::string text = value.dump();
      deserialize_invariants(text);  // validate eagerly
      (*map)[key] = text;
    }
    entries_ = std::move(map);
  } catch (const std::exception& e) {
    warnings_.push_back("ignoring corrupt cache '" + path_.string() + "': " + e.what());
    std::cerr << "warning: " << warnings_.back() << '\n';
    dirty_ = true;  // rewrite on flush
  }
}

std::shared_ptr<const InvariantCache::Map> InvariantCache::snapshot() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

std::optional<KnotInvariants> InvariantCache::get(const std::string& key) const {
  const auto snap = snapshot();
  auto it = snap->find(key);
  if (it == snap->end()) return std::nullopt;
  return deserialize_invariants(it->second);
}

void InvariantCache::put(const std::string& key, const KnotInvariants& value) {
  const std::string text = serialize_invariants(value);
  std::lock_guard lock(mutex_);
  auto next = std::make_shared<Map>(*entries_);
  (*next)[key] = text;
  entries_ = std::move(next);
  dirty_ = true;
}

void InvariantCache::flush() {
  std::lock_guard lock(mutex_);
  if (!dirty_ || path_.empty()) return;
  json j;
  j["version"] = kVersion;
  json entries = json::object();
  for (const auto& [key, text] : *entries_) entries[key] = json::parse(text);
  j["entries"] = entries;
  const std::filesystem::path tmp = path_.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write cache '" + tmp.string() + "'");
    out << j.dump(1) << '\n';
    if (!out) throw DataError("failed writing cache '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path_);
  dirty_ = false;
}

std::size_t InvariantCache::size() const { return snapshot()->size(); }

}  // namespace gordian
