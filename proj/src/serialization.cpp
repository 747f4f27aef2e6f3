#include "raloops/serialization.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace raloops {

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw std::runtime_error("parse error: " + what);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// Next non-empty, non-comment line; comment lines are returned when
// `keep_comments` is set (labels live in comments).
bool next_line(std::istream& in, std::string& line, bool keep_comments) {
  while (std::getline(in, line)) {
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    if (line[b] == '#' && !keep_comments) continue;
    return true;
  }
  return false;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

Int to_int(const std::string& tok, const std::string& ctx) {
  try {
    return Int(tok);
  } catch (const std::exception&) {
    parse_fail(ctx + ": bad integer '" + tok + "'");
  }
}

std::int64_t to_i64(const std::string& tok, const std::string& ctx) {
  Int v = to_int(tok, ctx);
  if (v < std::numeric_limits<std::int64_t>::min() ||
      v > std::numeric_limits<std::int64_t>::max())
    parse_fail(ctx + ": integer out of range");
  return v.convert_to<std::int64_t>();
}

}  // namespace

CayleyTable read_cayley(std::istream& in) {
  std::string line;
  if (!next_line(in, line, false)) parse_fail("empty cayley document");
  if (split_ws(line) != std::vector<std::string>{"cayley", "1"})
    parse_fail("expected 'cayley 1' header");

  if (!next_line(in, line, false)) parse_fail("missing table size");
  auto toks = split_ws(line);
  if (toks.size() != 1) parse_fail("size line must hold one integer");
  const std::int64_t n = to_i64(toks[0], "size");
  if (n < 1 || n > 4096) parse_fail("table size must be in 1..4096");

  std::vector<std::int32_t> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  std::vector<std::string> labels;
  for (std::int64_t r = 0; r < n; ++r) {
    if (!next_line(in, line, false)) parse_fail("missing table row");
    toks = split_ws(line);
    if (static_cast<std::int64_t>(toks.size()) != n)
      parse_fail("row length mismatch");
    for (const std::string& t : toks) {
      const std::int64_t v = to_i64(t, "entry");
      if (v < 0 || v >= n) parse_fail("entry out of range");
      entries.push_back(static_cast<std::int32_t>(v));
    }
  }
  while (next_line(in, line, true)) {
    toks = split_ws(line);
    if (toks.size() == 4 && toks[0] == "#" && toks[1] == "label") {
      const std::int64_t i = to_i64(toks[2], "label index");
      if (i < 0 || i >= n) parse_fail("label index out of range");
      labels.resize(static_cast<std::size_t>(n));
      labels[static_cast<std::size_t>(i)] = toks[3];
    } else if (!toks.empty() && toks[0][0] == '#') {
      continue;  // ordinary comment
    } else {
      parse_fail("unexpected trailing content");
    }
  }
  CayleyTable t(static_cast<int>(n), std::move(entries));
  t.labels = std::move(labels);
  return t;
}

CayleyTable read_cayley_file(const std::string& path) {
  auto in = open_in(path);
  return read_cayley(in);
}

void write_cayley(std::ostream& out, const CayleyTable& t) {
  out << "cayley 1\n" << t.size() << "\n";
  for (int i = 0; i < t.size(); ++i) {
    for (int j = 0; j < t.size(); ++j) out << (j ? " " : "") << t.at(i, j);
    out << "\n";
  }
  for (std::size_t i = 0; i < t.labels.size(); ++i)
    if (!t.labels[i].empty())
      out << "# label " << i << " " << t.labels[i] << "\n";
}

void write_cayley_file(const std::string& path, const CayleyTable& t) {
  auto out = open_out(path);
  write_cayley(out, t);
}

RaLoop read_raloop(std::istream& in) {
  std::string line;
  if (!next_line(in, line, false)) parse_fail("empty raloop document");
  if (split_ws(line) != std::vector<std::string>{"raloop", "1"})
    parse_fail("expected 'raloop 1' header");

  auto keyed = [&](const std::string& key) {
    if (!next_line(in, line, false)) parse_fail("missing '" + key + "' line");
    auto toks = split_ws(line);
    if (toks.empty() || toks[0] != key)
      parse_fail("expected '" + key + "' line");
    toks.erase(toks.begin());
    return toks;
  };

  auto factor_toks = keyed("factors");
  if (factor_toks.empty()) parse_fail("factors line needs at least one entry");
  std::vector<Order> factors;
  for (const std::string& t : factor_toks) {
    const Int v = to_int(t, "factor order");
    if (v < 0) parse_fail("factor order must be >= 0");
    factors.push_back(v == 0 ? Order::infinity() : Order::finite(v));
  }
  const std::size_t rank = factors.size();

  auto names = keyed("names");
  if (names.size() != rank) parse_fail("names count mismatch");

  auto t1_toks = keyed("t1");
  if (t1_toks.size() != 1) parse_fail("t1 line must hold one index");
  const std::int64_t t1 = to_i64(t1_toks[0], "t1 index");
  if (t1 < 0 || t1 >= static_cast<std::int64_t>(rank))
    parse_fail("t1 index out of range");

  auto m1_toks = keyed("m1");
  if (m1_toks.size() != 1) parse_fail("m1 line must hold one integer");
  const std::int64_t m1 = to_i64(m1_toks[0], "m1");

  auto vec = [&](const std::string& key) {
    auto toks = keyed(key);
    if (toks.size() != rank) parse_fail(key + " length mismatch");
    ExponentVector v;
    for (const std::string& t : toks) v.e.push_back(to_int(t, key));
    return v;
  };
  ExponentVector xs = vec("xsq");
  ExponentVector ys = vec("ysq");
  ExponentVector g0 = vec("g0");

  if (next_line(in, line, false)) parse_fail("unexpected trailing content");

  GroupPresentation g = GroupPresentation::make(
      AbelianGroup(std::move(factors)), static_cast<std::size_t>(t1), m1,
      std::move(xs), std::move(ys), std::move(names));
  return RaLoop::make(std::move(g), std::move(g0));
}

RaLoop read_raloop_file(const std::string& path) {
  auto in = open_in(path);
  return read_raloop(in);
}

void write_raloop(std::ostream& out, const RaLoop& loop) {
  const GroupPresentation& g = loop.group();
  const AbelianGroup& z = g.center();
  out << "raloop 1\nfactors";
  for (std::size_t i = 0; i < z.rank(); ++i)
    out << " " << (z.factor(i).is_finite() ? z.factor(i).value() : Int(0));
  out << "\nnames";
  for (const std::string& n : g.factor_names()) out << " " << n;
  out << "\nt1 " << g.t1_index() << "\nm1 " << g.m1();
  auto emit = [&](const char* key, const ExponentVector& v) {
    out << "\n" << key;
    for (std::size_t i = 0; i < v.size(); ++i) out << " " << v[i];
  };
  emit("xsq", g.x_sq());
  emit("ysq", g.y_sq());
  emit("g0", loop.g0());
  out << "\n";
}

void write_raloop_file(const std::string& path, const RaLoop& loop) {
  auto out = open_out(path);
  write_raloop(out, loop);
}

Document read_document_file(const std::string& path) {
  Document doc;
  {
    auto in = open_in(path);
    std::string line;
    if (!next_line(in, line, false)) parse_fail("empty document");
    auto toks = split_ws(line);
    if (toks.empty()) parse_fail("empty document");
    if (toks[0] == "cayley") {
      auto again = open_in(path);
      doc.table = read_cayley(again);
    } else if (toks[0] == "raloop") {
      auto again = open_in(path);
      doc.loop = read_raloop(again);
    } else {
      parse_fail("unknown document kind '" + toks[0] + "'");
    }
  }
  return doc;
}

BuildSpec parse_build_spec(const std::vector<std::string>& tokens) {
  if (tokens.size() < 2) parse_fail("spec needs 'row <n>' or 'type <n>'");
  BuildSpec spec;
  if (tokens[0] == "row")
    spec.is_row = true;
  else if (tokens[0] == "type")
    spec.is_row = false;
  else
    parse_fail("spec must start with 'row' or 'type'");
  spec.id = static_cast<int>(to_i64(tokens[1], "spec id"));
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) parse_fail("expected key=value, got '" + t + "'");
    const std::string key = t.substr(0, eq);
    const std::int64_t val = to_i64(t.substr(eq + 1), key);
    if (key == "m1") spec.params.m1 = val;
    else if (key == "m2") spec.params.m2 = val;
    else if (key == "m3") spec.params.m3 = val;
    else if (key == "k") spec.params.k = val;
    else parse_fail("unknown parameter '" + key + "'");
  }
  return spec;
}

}  // namespace raloops
