#include "l2approx/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "l2approx/fixtures.hpp"

namespace l2approx {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_at(const SourcePos& p, const std::string& what) { throw ParseError(what, p.line, p.column); }

// Recursive-descent value parser over one logical statement.
class ValueParser {
 public:
  ValueParser(const std::string& s, const std::vector<SourcePos>& map, std::size_t begin)
      : s_(s), map_(map), i_(begin) {}

  std::vector<Value> sequence() {
    std::vector<Value> out;
    skip();
    if (i_ >= s_.size()) return out;
    while (true) {
      out.push_back(value());
      skip();
      if (i_ >= s_.size()) break;
      if (s_[i_] != ',') fail_at(pos(), std::string("expected ',' but found '") + s_[i_] + "'");
      ++i_;
    }
    return out;
  }

 private:
  SourcePos pos() const { return i_ < map_.size() ? map_[i_] : (map_.empty() ? SourcePos{} : map_.back()); }
  void skip() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\r')) ++i_;
  }

  Value value() {
    skip();
    Value v;
    v.pos = pos();
    if (i_ >= s_.size()) fail_at(v.pos, "missing value");
    const char c = s_[i_];
    if (c == '[' || c == '(') {
      v.kind = c == '[' ? Value::Kind::list : Value::Kind::tuple;
      v.items = group(c == '[' ? ']' : ')');
      return v;
    }
    if (c == '"') {
      v.kind = Value::Kind::string;
      ++i_;
      while (i_ < s_.size() && s_[i_] != '"') {
        if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
        v.text += s_[i_++];
      }
      if (i_ >= s_.size()) fail_at(v.pos, "unterminated string");
      ++i_;
      return v;
    }
    if (c == ',' || c == ']' || c == ')') fail_at(v.pos, std::string("unexpected '") + c + "'");
    std::string t;
    while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != ']' && s_[i_] != ')' && s_[i_] != '[' && s_[i_] != '(')
      t += s_[i_++];
    v.text = trim(t);
    if (i_ < s_.size() && s_[i_] == '(') {
      const bool ident = !v.text.empty() && std::all_of(v.text.begin(), v.text.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
      });
      if (!ident) fail_at(pos(), "unexpected '('");
      v.kind = Value::Kind::call;
      v.items = group(')');
      return v;
    }
    if (i_ < s_.size() && s_[i_] == '[') fail_at(pos(), "unexpected '['");
    return v;
  }

  std::vector<Value> group(char close) {
    const SourcePos open = pos();
    ++i_;
    std::vector<Value> items;
    skip();
    if (i_ < s_.size() && s_[i_] == close) {
      ++i_;
      return items;
    }
    while (true) {
      items.push_back(value());
      skip();
      if (i_ >= s_.size()) fail_at(open, std::string("missing '") + close + "'");
      if (s_[i_] == close) {
        ++i_;
        return items;
      }
      if (s_[i_] != ',') fail_at(pos(), std::string("expected ',' or '") + close + "'");
      ++i_;
    }
  }

  const std::string& s_;
  const std::vector<SourcePos>& map_;
  std::size_t i_;
};

bool parse_number(const std::string& t, double& out) {
  if (t.empty()) return false;
  const char* b = t.c_str();
  char* e = nullptr;
  out = std::strtod(b, &e);
  return e == b + t.size();
}

}  // namespace

// ---------------------------------------------------------------------------

void Value::fail(const std::string& what) const { fail_at(pos, what); }

double Value::as_double() const {
  double d = 0;
  if (kind != Kind::scalar || !parse_number(text, d)) fail("expected a number, got '" + text + "'");
  return d;
}

long Value::as_long() const {
  if (kind == Kind::scalar) {
    try {
      std::size_t used = 0;
      const long v = std::stol(text, &used);
      if (used == text.size()) return v;
    } catch (const std::logic_error&) {
    }
  }
  fail("expected an integer, got '" + text + "'");
}

Integer Value::as_integer() const {
  Integer z;
  if (kind != Kind::scalar || text.empty() || z.set_str(text, 10) != 0) fail("expected an integer, got '" + text + "'");
  return z;
}

Rational Value::as_rational() const {
  if (kind == Kind::scalar && !text.empty()) {
    Rational q;
    if (text.find('.') == std::string::npos && text.find('e') == std::string::npos &&
        text.find('E') == std::string::npos) {
      if (q.set_str(text, 10) == 0 && q.get_den() != 0) {
        q.canonicalize();
        return q;
      }
    } else {
      double d = 0;
      if (parse_number(text, d)) return Rational(d);
    }
  }
  fail("expected a rational number, got '" + text + "'");
}

Complex Value::as_complex() const {
  if (kind == Kind::tuple) {
    if (items.size() != 2) fail("complex numbers are written (re, im)");
    return {items[0].as_double(), items[1].as_double()};
  }
  if (kind == Kind::call) {
    if (text != "polar" || items.size() != 2) fail("expected polar(r, theta)");
    return std::polar(items[0].as_double(), items[1].as_double());
  }
  return {as_double(), 0.0};
}

std::string Value::as_text() const {
  if (kind != Kind::scalar && kind != Kind::string) fail("expected text");
  return text;
}

const std::vector<Value>& Value::as_list() const {
  if (kind != Kind::list) fail("expected a [list]");
  return items;
}

const Value& Statement::single() const {
  if (values.size() != 1) fail("expected a single value for '" + key + "'");
  return values[0];
}

void Statement::fail(const std::string& what) const { fail_at(pos, what); }

std::vector<Statement> parse_statements(const std::string& text) {
  std::vector<Statement> out;
  std::string buf;
  std::vector<SourcePos> map;
  std::size_t line = 1, col = 1;
  int depth = 0;
  bool in_string = false;
  SourcePos start{1, 1};

  auto finish = [&]() {
    const std::string t = trim(buf);
    if (t.empty()) {
      buf.clear();
      map.clear();
      return;
    }
    Statement st;
    std::size_t i = 0;
    while (i < buf.size() && (buf[i] == ' ' || buf[i] == '\t')) ++i;
    st.pos = map[i];
    // key: identifier (letters, digits, _ and -), optionally followed by (...)
    std::size_t j = i;
    if (j < buf.size() && (std::isalpha(static_cast<unsigned char>(buf[j])) || buf[j] == '_')) {
      while (j < buf.size() &&
             (std::isalnum(static_cast<unsigned char>(buf[j])) || buf[j] == '_' || buf[j] == '-'))
        ++j;
      if (j < buf.size() && buf[j] == '(') {
        const auto close = buf.find(')', j);
        if (close != std::string::npos) j = close + 1;
      }
      std::size_t k = j;
      while (k < buf.size() && (buf[k] == ' ' || buf[k] == '\t')) ++k;
      std::string op;
      if (k < buf.size() && (buf[k] == '=' || buf[k] == ':' || buf[k] == '~')) {
        op = buf[k] == '~' ? "~" : std::string(1, buf[k]);
        ++k;
      } else if (buf.compare(k, 3, "\xE2\x89\x88") == 0) {
        op = "~";
        k += 3;
      }
      if (!op.empty()) {
        st.key = buf.substr(i, j - i);
        st.op = op;
        i = k;
      }
    }
    while (i < buf.size() && (buf[i] == ' ' || buf[i] == '\t')) ++i;
    st.raw = trim(buf.substr(i));
    st.raw_pos = i < map.size() ? map[i] : st.pos;
    st.values = ValueParser(buf, map, i).sequence();
    out.push_back(std::move(st));
    buf.clear();
    map.clear();
  };

  // Cycle notation "(0 1)(2 3)" is not a value; such statements keep only
  // their raw text.
  auto finish_lenient = [&]() {
    const std::string saved = buf;
    const auto saved_map = map;
    try {
      finish();
    } catch (const ParseError&) {
      buf = saved;
      map = saved_map;
      const std::string t = trim(buf);
      const auto eq = t.find_first_of("=:");
      const std::string rest = trim(eq == std::string::npos ? t : t.substr(eq + 1));
      if (rest.empty() || rest.front() != '(') throw;
      Statement st;
      std::size_t i = 0;
      while (i < buf.size() && (buf[i] == ' ' || buf[i] == '\t')) ++i;
      st.pos = map[i];
      if (eq != std::string::npos) {
        st.key = trim(t.substr(0, eq));
        st.op = std::string(1, t[eq]);
      }
      st.raw = rest;
      st.raw_pos = map[buf.find(rest.front(), eq == std::string::npos ? 0 : buf.find(t[eq]) + 1)];
      out.push_back(std::move(st));
      buf.clear();
      map.clear();
    }
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (buf.empty() || trim(buf).empty()) start = {line, col};
    if (in_string) {
      buf += c;
      map.push_back({line, col});
      if (c == '\\' && i + 1 < text.size()) {
        buf += text[++i];
        map.push_back({line, ++col});
      } else if (c == '"') {
        in_string = false;
      }
      if (c == '\n') fail_at(start, "unterminated string");
      ++col;
      continue;
    }
    if (c == '#') {
      while (i + 1 < text.size() && text[i + 1] != '\n') ++i;
      continue;
    }
    if (c == '\n') {
      if (depth > 0) {
        buf += ' ';
        map.push_back({line, col});
      } else {
        finish_lenient();
      }
      ++line;
      col = 1;
      continue;
    }
    if (c == ';' && depth == 0) {
      finish_lenient();
      ++col;
      continue;
    }
    if (c == '"') in_string = true;
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') {
      if (depth == 0) fail_at({line, col}, std::string("unbalanced '") + c + "'");
      --depth;
    }
    buf += c;
    map.push_back({line, col});
    ++col;
  }
  if (in_string) fail_at(start, "unterminated string");
  if (depth > 0) fail_at(start, "unclosed bracket");
  finish_lenient();
  return out;
}

// ---------------------------------------------------------------------------

std::string format_double(double v) {
  if (v == 0) return "0";
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string format_complex(Complex z) {
  if (z.imag() == 0) return format_double(z.real());
  return "(" + format_double(z.real()) + ", " + format_double(z.imag()) + ")";
}

std::string list_text(const std::vector<std::string>& items) {
  std::string s = "[";
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + items[i];
  return s + "]";
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// Reads generators/relators; other keys are left to the caller.
Presentation presentation_from(const std::vector<Statement>& sts, bool allow_other) {
  Presentation p;
  const Statement* gens = nullptr;
  const Statement* rels = nullptr;
  for (const auto& st : sts) {
    if (st.key == "generators") {
      if (gens) st.fail("duplicate 'generators'");
      gens = &st;
    } else if (st.key == "relators") {
      if (rels) st.fail("duplicate 'relators'");
      rels = &st;
    } else if (!allow_other) {
      st.fail(st.key.empty() ? "expected 'key = value'" : "unknown key '" + st.key + "'");
    }
  }
  if (!gens) throw ParseError("missing 'generators = [...]'", 1, 1);
  for (const auto& v : gens->single().as_list()) {
    const std::string name = v.as_text();
    if (!is_identifier(name)) v.fail("generator names must be identifiers, got '" + name + "'");
    if (std::find(p.generators.begin(), p.generators.end(), name) != p.generators.end())
      v.fail("duplicate generator '" + name + "'");
    p.generators.push_back(name);
  }
  if (rels)
    for (const auto& v : rels->single().as_list()) p.relators.push_back(parse_word_value(v, p.generators));
  try {
    validate(p);
  } catch (const InvalidArgument& e) {
    fail_at(rels ? rels->pos : gens->pos, e.what());
  }
  return p;
}

}  // namespace

Word parse_word_value(const Value& v, const std::vector<std::string>& generators) {
  const std::string t = v.as_text();
  if (t == "1") return Word{};
  try {
    return parse_word(t, generators);
  } catch (const InvalidArgument& e) {
    v.fail(e.what());
  }
}

std::string quote_word(const Word& w, const std::vector<std::string>& generators) {
  return "\"" + format_word(w, generators) + "\"";
}

Presentation parse_presentation(const std::string& text) { return presentation_from(parse_statements(text), false); }

std::string serialize_presentation(const Presentation& p) {
  std::vector<std::string> rels;
  for (const auto& r : p.relators) rels.push_back(r.is_identity() ? "\"\"" : format_word(r, p.generators));
  return "generators = " + list_text(p.generators) + "\nrelators = " + list_text(rels) + "\n";
}

// ---------------------------------------------------------------------------

GroupComplex parse_complex(const std::string& text) {
  const auto sts = parse_statements(text);
  std::vector<Statement> pres;
  std::vector<IntMatrix> blocks;
  bool in_block = false;
  for (const auto& st : sts) {
    if (st.key == "generators" || st.key == "relators") {
      pres.push_back(st);
      continue;
    }
    if (st.key.size() >= 2 && st.key[0] == 'd' &&
        std::all_of(st.key.begin() + 1, st.key.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const std::size_t degree = std::stoul(st.key.substr(1));
      if (degree != blocks.size() + 1) st.fail("boundary blocks must appear as d1, d2, ... in order");
      const auto& shape = st.single().as_list();
      if (shape.size() != 2) st.fail("block header is d<j> = [rows, cols]");
      const long r = shape[0].as_long(), c = shape[1].as_long();
      if (r < 0 || c < 0) st.fail("negative block size");
      blocks.emplace_back(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      in_block = true;
      continue;
    }
    if (!st.key.empty()) st.fail("unknown key '" + st.key + "'");
    if (!in_block) st.fail("entry outside a boundary block");
  }
  GroupComplex c;
  c.presentation = presentation_from(pres, false);
  if (blocks.empty()) return presentation_complex(c.presentation);
  std::size_t b = 0;
  for (const auto& st : sts) {
    if (!st.key.empty()) {
      if (st.key[0] == 'd') ++b;
      continue;
    }
    if (st.values.size() != 3) st.fail("entry rows are: row, col, [[coeff, \"word\"], ...]");
    IntMatrix& m = blocks[b - 1];
    const long r = st.values[0].as_long(), col = st.values[1].as_long();
    if (r < 0 || col < 0 || static_cast<std::size_t>(r) >= m.rows() || static_cast<std::size_t>(col) >= m.cols())
      st.values[0].fail("entry index outside the block");
    IntElement e;
    for (const auto& term : st.values[2].as_list()) {
      if (term.kind != Value::Kind::list || term.items.size() != 2) term.fail("terms are [coeff, \"word\"]");
      e.add_term(parse_word_value(term.items[1], c.presentation.generators), term.items[0].as_integer());
    }
    if (!m.at(static_cast<std::size_t>(r), static_cast<std::size_t>(col)).is_zero()) st.fail("duplicate entry");
    m.set(static_cast<std::size_t>(r), static_cast<std::size_t>(col), e);
  }
  for (std::size_t j = 0; j + 1 < blocks.size(); ++j)
    if (blocks[j + 1].cols() != blocks[j].rows())
      throw ParseError("block d" + std::to_string(j + 2) + " does not chain with d" + std::to_string(j + 1), 1, 1);
  c.boundaries = std::move(blocks);
  return c;
}

std::string serialize_complex(const GroupComplex& c) {
  std::string s = serialize_presentation(c.presentation);
  for (std::size_t j = 0; j < c.boundaries.size(); ++j) {
    const auto& m = c.boundaries[j];
    s += "d" + std::to_string(j + 1) + " = [" + std::to_string(m.rows()) + ", " + std::to_string(m.cols()) + "]\n";
    for (const auto& [idx, e] : m.entries()) {
      std::vector<std::string> terms;
      for (const auto& [w, coef] : e.terms())
        terms.push_back("[" + coef.get_str() + ", " + quote_word(w, c.presentation.generators) + "]");
      s += std::to_string(idx.first) + ", " + std::to_string(idx.second) + ", " + list_text(terms) + "\n";
    }
  }
  return s;
}

ComplexMatrix parse_complex_matrix(const Value& v) {
  const auto& rows = v.as_list();
  std::size_t cols = rows.empty() ? 0 : rows[0].as_list().size();
  ComplexMatrix m(rows.size(), cols, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i].as_list();
    if (r.size() != cols) rows[i].fail("rows must have equal length");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = r[j].as_complex();
  }
  return m;
}

ComplexMatrix parse_complex_matrix(const std::string& text) {
  const auto sts = parse_statements(text);
  if (sts.size() != 1) throw ParseError("expected one matrix", 1, 1);
  return parse_complex_matrix(sts[0].single());
}

std::string serialize_complex_matrix(const ComplexMatrix& m) {
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<std::string> r;
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(format_complex(m(i, j)));
    rows.push_back(list_text(r));
  }
  return list_text(rows);
}

Matrix<Integer> parse_integer_matrix(const std::string& text) {
  const auto sts = parse_statements(text);
  if (sts.size() != 1) throw ParseError("expected one matrix", 1, 1);
  const auto& rows = sts[0].single().as_list();
  const std::size_t cols = rows.empty() ? 0 : rows[0].as_list().size();
  Matrix<Integer> m(rows.size(), cols, Integer(0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i].as_list();
    if (r.size() != cols) rows[i].fail("rows must have equal length");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = r[j].as_integer();
  }
  return m;
}

std::string serialize_integer_matrix(const Matrix<Integer>& m) {
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<std::string> r;
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).get_str());
    rows.push_back(list_text(r));
  }
  return list_text(rows);
}

// ---------------------------------------------------------------------------

namespace {

Permutation parse_cycles(const std::string& raw, std::size_t n, const SourcePos& pos) {
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
  std::size_t i = 0;
  std::vector<bool> used(n, false);
  while (i < raw.size()) {
    if (raw[i] == ' ' || raw[i] == '\t') {
      ++i;
      continue;
    }
    if (raw[i] != '(') fail_at(pos, "cycle notation expects '(' groups");
    const auto close = raw.find(')', i);
    if (close == std::string::npos) fail_at(pos, "unclosed cycle");
    std::istringstream in(raw.substr(i + 1, close - i - 1));
    std::vector<std::uint32_t> cyc;
    std::string tok;
    while (in >> tok) {
      std::size_t used_chars = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(tok, &used_chars);
      } catch (const std::logic_error&) {
        fail_at(pos, "bad point '" + tok + "' in cycle");
      }
      if (used_chars != tok.size() || v >= n) fail_at(pos, "bad point '" + tok + "' in cycle");
      if (used[v]) fail_at(pos, "point " + tok + " appears twice");
      used[v] = true;
      cyc.push_back(static_cast<std::uint32_t>(v));
    }
    for (std::size_t k = 0; k < cyc.size(); ++k) p[cyc[k]] = cyc[(k + 1) % cyc.size()];
    i = close + 1;
  }
  return p;
}

}  // namespace

CosetTable parse_coset_table(const std::string& text, const Presentation* pres) {
  const auto sts = parse_statements(text);
  std::optional<std::size_t> index;
  std::vector<Permutation> action;
  std::vector<std::string> names;
  SourcePos last{1, 1};
  for (const auto& st : sts) {
    last = st.pos;
    if (st.key == "index") {
      if (index) st.fail("duplicate 'index'");
      const long n = st.single().as_long();
      if (n <= 0) st.fail("index must be positive");
      index = static_cast<std::size_t>(n);
      continue;
    }
    if (!index) st.fail("'index = n' must come first");
    names.push_back(st.key);
    if (!st.raw.empty() && (st.raw.front() == '(' || st.raw == "id")) {
      action.push_back(st.raw == "id" ? parse_cycles("", *index, st.raw_pos) : parse_cycles(st.raw, *index, st.raw_pos));
      continue;
    }
    const auto& imgs = st.single().as_list();
    if (imgs.size() != *index) st.fail("image list must have " + std::to_string(*index) + " entries");
    Permutation p;
    for (const auto& v : imgs) {
      const long x = v.as_long();
      if (x < 0 || static_cast<std::size_t>(x) >= *index) v.fail("coset out of range");
      p.push_back(static_cast<std::uint32_t>(x));
    }
    action.push_back(std::move(p));
  }
  if (!index) throw ParseError("missing 'index = n'", 1, 1);
  CosetTable t;
  try {
    t = CosetTable(*index, action);
  } catch (const InvalidTower& e) {
    fail_at(last, e.what());
  }
  if (pres) {
    if (action.size() != pres->rank())
      fail_at(last, "table has " + std::to_string(action.size()) + " generators, presentation " +
                        std::to_string(pres->rank()));
    for (std::size_t g = 0; g < names.size(); ++g)
      if (!names[g].empty() && names[g] != pres->generators[g])
        throw ParseError("generator line " + std::to_string(g + 1) + " is '" + names[g] + "', expected '" +
                             pres->generators[g] + "'",
                         sts[g + 1].pos.line, sts[g + 1].pos.column);
    t.validate(*pres);
  }
  return t;
}

std::string serialize_coset_table(const CosetTable& t, const std::vector<std::string>& generators) {
  std::string s = "index = " + std::to_string(t.index()) + "\n";
  for (std::size_t g = 0; g < t.generators(); ++g) {
    std::vector<std::string> imgs;
    for (auto v : t.action()[g]) imgs.push_back(std::to_string(v));
    s += (g < generators.size() ? generators[g] : "g" + std::to_string(g)) + " = " + list_text(imgs) + "\n";
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

std::pair<long, long> parse_range(const Value& v) {
  const std::string t = v.as_text();
  const auto dots = t.find("..");
  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const long x = std::stol(trim(s), &used);
      if (used == trim(s).size() && x >= 0) return x;
    } catch (const std::logic_error&) {
    }
    v.fail("expected a non-negative integer or range a..b, got '" + t + "'");
  };
  if (dots == std::string::npos) {
    const long x = num(t);
    return {x, x};
  }
  const long a = num(t.substr(0, dots)), b = num(t.substr(dots + 2));
  if (a > b) v.fail("empty range '" + t + "'");
  return {a, b};
}

}  // namespace

TowerSpec parse_tower_spec(const std::string& text) {
  TowerSpec t;
  for (const auto& st : parse_statements(text)) {
    if (st.key == "weights") {
      std::vector<long> w;
      for (const auto& v : st.single().as_list()) w.push_back(v.as_long());
      t.weights = w;
    } else if (st.key == "cyclic") {
      const auto [a, b] = parse_range(st.single());
      if (a < 1) st.fail("cyclic quotients need k >= 1");
      for (long k = a; k <= b; ++k)
        t.entries.push_back({TowerSpec::Entry::Kind::cyclic, static_cast<std::size_t>(k), 0, ""});
    } else if (st.key == "kernel-mod") {
      const Value& v = st.single();
      const std::string s = v.as_text();
      const auto caret = s.find('^');
      if (caret == std::string::npos) v.fail("kernel-mod expects p^j");
      Value base = v, exps = v;
      base.text = trim(s.substr(0, caret));
      exps.text = trim(s.substr(caret + 1));
      const long p = base.as_long();
      if (p < 2) v.fail("kernel-mod needs a prime base");
      const auto [a, b] = parse_range(exps);
      for (long e = a; e <= b; ++e)
        t.entries.push_back({TowerSpec::Entry::Kind::kernel_mod, static_cast<std::size_t>(p),
                             static_cast<unsigned>(e), ""});
    } else if (st.key == "table") {
      t.entries.push_back({TowerSpec::Entry::Kind::table, 0, 0, st.single().as_text()});
    } else {
      st.fail(st.key.empty() ? "expected 'cyclic: k', 'kernel-mod: p^j' or 'table: path'"
                             : "unknown key '" + st.key + "'");
    }
  }
  if (t.entries.empty()) throw ParseError("tower has no levels", 1, 1);
  return t;
}

std::string serialize_tower_spec(const TowerSpec& t) {
  std::string s;
  if (t.weights) {
    std::vector<std::string> w;
    for (long x : *t.weights) w.push_back(std::to_string(x));
    s += "weights = " + list_text(w) + "\n";
  }
  for (const auto& e : t.entries) {
    switch (e.kind) {
      case TowerSpec::Entry::Kind::cyclic: s += "cyclic: " + std::to_string(e.k) + "\n"; break;
      case TowerSpec::Entry::Kind::kernel_mod:
        s += "kernel-mod: " + std::to_string(e.k) + "^" + std::to_string(e.exponent) + "\n";
        break;
      case TowerSpec::Entry::Kind::table: s += "table: \"" + e.path + "\"\n"; break;
    }
  }
  return s;
}

Tower build_tower(const TowerSpec& spec, const Presentation& p, const std::string& base_dir) {
  const std::vector<long> w = spec.weights.value_or(std::vector<long>(p.rank(), 1));
  if (w.size() != p.rank()) throw InvalidArgument("tower weights need one entry per generator");
  Tower t;
  for (const auto& e : spec.entries) {
    switch (e.kind) {
      case TowerSpec::Entry::Kind::cyclic:
        t.levels.push_back(cyclic_table(p, w, e.k));
        t.labels.push_back("Z/" + std::to_string(e.k));
        break;
      case TowerSpec::Entry::Kind::kernel_mod: {
        std::size_t k = 1;
        for (unsigned j = 0; j < e.exponent; ++j) k *= e.k;
        t.levels.push_back(cyclic_table(p, w, k));
        t.labels.push_back("Z/" + std::to_string(e.k) + "^" + std::to_string(e.exponent));
        break;
      }
      case TowerSpec::Entry::Kind::table: {
        const bool embedded = e.path.rfind("fixture:", 0) == 0;
        const std::string ref =
            embedded || std::filesystem::path(e.path).is_absolute() ? e.path : (std::filesystem::path(base_dir) / e.path).string();
        t.levels.push_back(parse_coset_table(read_input(ref), &p));
        t.labels.push_back(e.path);
        break;
      }
    }
  }
  t.validate(p);
  return t;
}

// ---------------------------------------------------------------------------

std::map<Word, Complex> parse_character_table(const std::string& text, const Presentation& p) {
  std::map<Word, Complex> values;
  for (const auto& st : parse_statements(text)) {
    if (!st.key.empty()) st.fail("character rows are: word, re, im");
    if (st.values.size() != 3) st.fail("character rows are: word, re, im");
    const Word w = parse_word_value(st.values[0], p.generators);
    if (!values.emplace(w, Complex(st.values[1].as_double(), st.values[2].as_double())).second)
      st.fail("duplicate word");
  }
  if (values.empty()) throw ParseError("empty character table", 1, 1);
  return values;
}

std::string serialize_character_table(const std::map<Word, Complex>& values, const Presentation& p) {
  std::string s;
  for (const auto& [w, z] : values)
    s += quote_word(w, p.generators) + ", " + format_double(z.real()) + ", " + format_double(z.imag()) + "\n";
  return s;
}

// ---------------------------------------------------------------------------

AlgebraicNumber parse_algebraic(const std::string& text) {
  std::optional<IntPoly> f;
  std::optional<Complex> hint;
  std::optional<RatPoly> expr;
  bool declared = false;
  SourcePos where{1, 1};
  for (const auto& st : parse_statements(text)) {
    if (st.key == "minpoly") {
      where = st.pos;
      IntPoly c;
      for (const auto& v : st.single().as_list()) c.push_back(v.as_integer());
      f = c;
    } else if (st.key == "root") {
      hint = st.single().as_complex();
    } else if (st.key == "expr") {
      RatPoly q;
      for (const auto& v : st.single().as_list()) q.push_back(v.as_rational());
      expr = q;
    } else if (st.key == "irreducible") {
      const std::string t = st.single().as_text();
      if (t != "true" && t != "false") st.fail("irreducible must be true or false");
      declared = t == "true";
    } else {
      st.fail("unknown key '" + st.key + "'");
    }
  }
  if (!f) throw ParseError("missing 'minpoly = [...]'", 1, 1);
  if (!hint) throw ParseError("missing 'root ≈ (re, im)'", where.line, where.column);
  if (f->size() < 2 || f->back() == 0) fail_at(where, "minimal polynomial must have positive degree");
  AlgebraicNumber a(*f, *hint, declared);
  return expr ? a.with_expression(*expr) : a;
}

std::string serialize_algebraic(const AlgebraicNumber& a) {
  std::vector<std::string> c;
  for (const auto& x : a.minpoly()) c.push_back(x.get_str());
  const Complex root = a.with_expression({Rational(0), Rational(1)}).value();
  std::string s = "minpoly = " + list_text(c) + "; root \xE2\x89\x88 (" + format_double(root.real()) + ", " +
                  format_double(root.imag()) + ")";
  const RatPoly& e = a.expression();
  if (!(e.size() == 2 && e[0] == 0 && e[1] == 1)) {
    std::vector<std::string> q;
    for (const auto& x : e) q.push_back(x.get_str());
    s += "; expr = " + list_text(q);
  }
  return s + "\n";
}

bool same_algebraic(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  return a.minpoly() == b.minpoly() && a.root_index() == b.root_index() && a.expression() == b.expression();
}

// ---------------------------------------------------------------------------

ArithmeticProfile ProfileSpec::arithmetic() const {
  ArithmeticProfile a;
  a.h = bound.h;
  a.M = Integer(static_cast<long>(bound.M));
  a.N = table;
  a.L = bound.L;
  return a;
}

ProfileSpec parse_profile(const std::string& text) {
  ProfileSpec p;
  bool have_n = false;
  for (const auto& st : parse_statements(text)) {
    if (st.key == "h") {
      const long h = st.single().as_long();
      if (h < 1) st.fail("h must be at least 1");
      p.bound.h = static_cast<std::size_t>(h);
    } else if (st.key == "M" || st.key == "N" || st.key == "L") {
      const double v = st.single().as_double();
      if (!(v >= 1.0)) st.fail(st.key + " must be at least 1");
      (st.key == "M" ? p.bound.M : st.key == "N" ? p.bound.N : p.bound.L) = v;
      have_n = have_n || st.key == "N";
    } else if (st.key == "a") {
      const long a = st.single().as_long();
      if (a < 1) st.fail("a must be positive");
      p.cells = static_cast<std::size_t>(a);
    } else if (st.key.size() > 3 && st.key.rfind("N(", 0) == 0 && st.key.back() == ')') {
      const double v = st.single().as_double();
      if (!(v > 0)) st.fail("majorant values must be positive");
      p.table[trim(st.key.substr(2, st.key.size() - 3))] = v;
    } else {
      st.fail(st.key.empty() ? "expected 'key = value'" : "unknown key '" + st.key + "'");
    }
  }
  if (!have_n) throw ParseError("profile needs 'N = ...'", 1, 1);
  return p;
}

std::string serialize_profile(const ProfileSpec& p) {
  std::string s = "h = " + std::to_string(p.bound.h) + "\nM = " + format_double(p.bound.M) +
                  "\nN = " + format_double(p.bound.N) + "\nL = " + format_double(p.bound.L) + "\n";
  if (p.cells) s += "a = " + std::to_string(*p.cells) + "\n";
  for (const auto& [g, v] : p.table) s += "N(" + g + ") = " + format_double(v) + "\n";
  return s;
}

// ---------------------------------------------------------------------------

std::vector<FiniteRep<Complex>> BundleSpec::build(const Presentation& p) const {
  std::vector<FiniteRep<Complex>> reps;
  for (std::size_t n = 0; n < levels.size(); ++n) {
    const auto& l = levels[n];
    try {
      FiniteRep<Complex> r;
      if (l.xi) {
        if (weights.size() != p.rank()) throw InvalidArgument("bundle weights need one entry per generator");
        r = line_bundle(p, weights, *l.xi);
        if (conjugate_pair) r = direct_sum(r, line_bundle(p, weights, std::conj(*l.xi)));
      } else {
        r = make_rep(p, l.images);
        if (conjugate_pair) {
          std::vector<ComplexMatrix> c = l.images;
          for (auto& m : c)
            for (std::size_t i = 0; i < m.rows(); ++i)
              for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = std::conj(m(i, j));
          r = direct_sum(r, make_rep(p, c));
        }
      }
      reps.push_back(std::move(r));
    } catch (Error& e) {
      if (e.level() < 0) e.set_level(static_cast<long>(n));
      throw;
    }
  }
  return reps;
}

BundleSpec parse_bundle(const std::string& text) {
  BundleSpec b;
  for (const auto& st : parse_statements(text)) {
    if (st.key == "weights") {
      for (const auto& v : st.single().as_list()) b.weights.push_back(v.as_long());
    } else if (st.key == "conjugate_pair") {
      const std::string t = st.single().as_text();
      if (t != "true" && t != "false") st.fail("conjugate_pair must be true or false");
      b.conjugate_pair = t == "true";
    } else if (st.key == "xi") {
      BundleSpec::Level l;
      l.xi = st.single().as_complex();
      b.levels.push_back(l);
    } else if (st.key == "images") {
      BundleSpec::Level l;
      for (const auto& v : st.single().as_list()) l.images.push_back(parse_complex_matrix(v));
      b.levels.push_back(l);
    } else if (st.key == "mu") {
      b.mu = st.single().as_double();
      if (!(*b.mu > 0)) st.fail("mu must be positive");
    } else if (st.key == "zero_tol") {
      b.zero_tol = st.single().as_double();
      if (!(*b.zero_tol >= 0)) st.fail("zero_tol must be non-negative");
    } else {
      st.fail(st.key.empty() ? "expected 'key = value'" : "unknown key '" + st.key + "'");
    }
  }
  if (b.levels.empty()) throw ParseError("bundle has no levels", 1, 1);
  return b;
}

std::string serialize_bundle(const BundleSpec& b) {
  std::string s;
  if (!b.weights.empty()) {
    std::vector<std::string> w;
    for (long x : b.weights) w.push_back(std::to_string(x));
    s += "weights = " + list_text(w) + "\n";
  }
  if (b.conjugate_pair) s += "conjugate_pair = true\n";
  if (b.mu) s += "mu = " + format_double(*b.mu) + "\n";
  if (b.zero_tol) s += "zero_tol = " + format_double(*b.zero_tol) + "\n";
  for (const auto& l : b.levels) {
    if (l.xi) {
      s += "xi = (" + format_double(l.xi->real()) + ", " + format_double(l.xi->imag()) + ")\n";
    } else {
      std::vector<std::string> m;
      for (const auto& x : l.images) m.push_back(serialize_complex_matrix(x));
      s += "images = " + list_text(m) + "\n";
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string read_input(const std::string& ref) {
  if (ref.rfind("fixture:", 0) == 0) return fixture(ref.substr(8));
  return read_file(ref);
}

}  // namespace l2approx
