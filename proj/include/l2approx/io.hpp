#pragma once

// Text formats for every input the tool reads. All parsers report errors as
// ParseError with a 1-based line and column; every serialiser produces text
// its parser maps back to an equal object.
//
// Common syntax: one statement per line (or separated by ';'), '#' starts a
// comment, brackets may span lines. A statement is `key = value` (also
// `key: value`, and `key ≈ value` or `key ~ value` for hints) or a bare
// comma-separated row. Words are space-separated tokens `x`, `x^-1`, `x^3`;
// the identity is `""` (or `1`).

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "l2approx/algnum.hpp"
#include "l2approx/asymptotics.hpp"
#include "l2approx/char_moments.hpp"
#include "l2approx/fox.hpp"
#include "l2approx/quotients.hpp"

namespace l2approx {

// ---------------------------------------------------------------------------
// Generic statement layer.

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

struct Value {
  enum class Kind { scalar, string, list, tuple, call };
  Kind kind = Kind::scalar;
  std::string text;  // scalar/string contents, or the call name
  std::vector<Value> items;
  SourcePos pos;

  [[noreturn]] void fail(const std::string& what) const;
  double as_double() const;
  long as_long() const;
  Integer as_integer() const;
  Rational as_rational() const;  // "3", "-1/2", "0.25"
  Complex as_complex() const;    // (re, im), polar(r, theta), or a real scalar
  std::string as_text() const;   // scalar or string
  const std::vector<Value>& as_list() const;
};

struct Statement {
  std::string key;  // empty for bare rows
  std::string op;   // "=", ":", "~"
  std::vector<Value> values;
  std::string raw;  // text after the operator, trimmed
  SourcePos pos;
  SourcePos raw_pos;

  const Value& single() const;
  [[noreturn]] void fail(const std::string& what) const;
};

std::vector<Statement> parse_statements(const std::string& text);

// ---------------------------------------------------------------------------
// Presentations:  generators = [x, y]   relators = [x y x^-1 y^-1]

Presentation parse_presentation(const std::string& text);
std::string serialize_presentation(const Presentation& p);

Word parse_word_value(const Value& v, const std::vector<std::string>& generators);
std::string quote_word(const Word& w, const std::vector<std::string>& generators);

// ---------------------------------------------------------------------------
// Complexes: a presentation followed by optional boundary blocks
//   d1 = [rows, cols]
//   row, col, [[coeff, "word"], ...]
// Without blocks the presentation complex is used.

GroupComplex parse_complex(const std::string& text);
std::string serialize_complex(const GroupComplex& c);

// Numeric matrices: [[1, 2], [3, 4]], entries real or (re, im).
ComplexMatrix parse_complex_matrix(const Value& v);
ComplexMatrix parse_complex_matrix(const std::string& text);
std::string serialize_complex_matrix(const ComplexMatrix& m);
Matrix<Integer> parse_integer_matrix(const std::string& text);
std::string serialize_integer_matrix(const Matrix<Integer>& m);

// ---------------------------------------------------------------------------
// Coset tables:
//   index = 4
//   x = [1, 2, 3, 0]        image list (0-based)
//   y = (0 1)(2 3)          cycle notation; () is the identity
// Generator lines follow the presentation order; names are checked when a
// presentation is supplied.

CosetTable parse_coset_table(const std::string& text, const Presentation* p = nullptr);
std::string serialize_coset_table(const CosetTable& t, const std::vector<std::string>& generators);

// ---------------------------------------------------------------------------
// Tower descriptors, one level per line:
//   weights = [1, 0]          weights for the cyclic shortcuts (default all 1)
//   cyclic: 5                 kernel of pi -> Z/5
//   cyclic: 2..64             one level per k
//   kernel-mod: 2^5           kernel of pi -> Z/2^5
//   kernel-mod: 3^1..4        exponents 1..4
//   table: path/to/level.txt  coset-table file (relative to the descriptor)

struct TowerSpec {
  struct Entry {
    enum class Kind { cyclic, kernel_mod, table };
    Kind kind = Kind::cyclic;
    std::size_t k = 0;  // modulus (cyclic) or prime (kernel_mod)
    unsigned exponent = 0;
    std::string path;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::optional<std::vector<long>> weights;
  std::vector<Entry> entries;

  friend bool operator==(const TowerSpec&, const TowerSpec&) = default;
};

TowerSpec parse_tower_spec(const std::string& text);
std::string serialize_tower_spec(const TowerSpec& t);
// Tables for every level with labels; `base_dir` resolves table paths.
Tower build_tower(const TowerSpec& spec, const Presentation& p, const std::string& base_dir = ".");

// ---------------------------------------------------------------------------
// Character tables: lines `word, re, im`.

std::map<Word, Complex> parse_character_table(const std::string& text, const Presentation& p);
std::string serialize_character_table(const std::map<Word, Complex>& values, const Presentation& p);

// ---------------------------------------------------------------------------
// Algebraic numbers:  minpoly = [c0, ..., cn]; root ≈ (re, im)
// with an optional `expr = [q0, q1, ...]` polynomial in the root.

AlgebraicNumber parse_algebraic(const std::string& text);
std::string serialize_algebraic(const AlgebraicNumber& a);
bool same_algebraic(const AlgebraicNumber& a, const AlgebraicNumber& b);

// ---------------------------------------------------------------------------
// Arithmetic profiles:
//   h = 1; M = 1; N = 16; L = 1
//   N(x) = 2                  majorant table for the condition-F checks

struct ProfileSpec {
  BoundProfile bound;
  std::map<std::string, double> table;
  std::optional<std::size_t> cells;  // a in the log-det bound; default from the complex

  ArithmeticProfile arithmetic() const;
  friend bool operator==(const ProfileSpec& a, const ProfileSpec& b) {
    return a.bound.h == b.bound.h && a.bound.M == b.bound.M && a.bound.N == b.bound.N && a.bound.L == b.bound.L &&
           a.table == b.table && a.cells == b.cells;
  }
};

ProfileSpec parse_profile(const std::string& text);
std::string serialize_profile(const ProfileSpec& p);

// ---------------------------------------------------------------------------
// Flat-bundle sequences, one level per `xi` or `images` line:
//   weights = [1, 1]
//   conjugate_pair = true      E_xi + E_conj(xi) instead of E_xi
//   xi = (0.5, 0.8660254037844386)
//   xi = polar(1, 1.0471975511965976)
//   images = [[[(0, 1)]], [[(0, -1)]]]   one matrix per generator
//   mu = 1                      optional common growth rate
//   zero_tol = 1e-14            optional kernel threshold

struct BundleSpec {
  struct Level {
    std::optional<Complex> xi;
    std::vector<ComplexMatrix> images;
    friend bool operator==(const Level&, const Level&) = default;
  };
  std::vector<long> weights;
  bool conjugate_pair = false;
  std::vector<Level> levels;
  std::optional<double> mu;
  std::optional<double> zero_tol;

  std::vector<FiniteRep<Complex>> build(const Presentation& p) const;
  friend bool operator==(const BundleSpec&, const BundleSpec&) = default;
};

BundleSpec parse_bundle(const std::string& text);
std::string serialize_bundle(const BundleSpec& b);

// ---------------------------------------------------------------------------

std::string read_file(const std::string& path);
// "fixture:name" reads an embedded fixture, anything else a file.
std::string read_input(const std::string& ref);
// Exact decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace l2approx
