#include "l2approx/word.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "l2approx/errors.hpp"

namespace l2approx {

std::vector<Letter> free_reduce(const std::vector<Letter>& letters) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (Letter l : letters) {
    if (l == 0) throw InvalidArgument("letter 0 is not a generator");
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word::Word(std::vector<Letter> letters) : letters_(free_reduce(letters)) {}

Word Word::inverse() const {
  std::vector<Letter> r(letters_.rbegin(), letters_.rend());
  for (auto& l : r) l = -l;
  Word w;
  w.letters_ = std::move(r);
  return w;
}

Word Word::power(long e) const {
  const Word base = e >= 0 ? *this : inverse();
  Word r;
  for (long i = 0; i < (e >= 0 ? e : -e); ++i) r = r * base;
  return r;
}

std::vector<long> Word::exponent_sums(std::size_t generators) const {
  std::vector<long> s(generators, 0);
  for (Letter l : letters_) {
    const std::size_t g = generator_of(l);
    if (g >= generators) throw InvalidArgument("generator index out of range");
    s[g] += sign_of(l);
  }
  return s;
}

Word Word::cyclically_reduced() const {
  std::size_t lo = 0, hi = letters_.size();
  while (hi - lo >= 2 && letters_[lo] == -letters_[hi - 1]) {
    ++lo;
    --hi;
  }
  Word w;
  w.letters_.assign(letters_.begin() + static_cast<long>(lo), letters_.begin() + static_cast<long>(hi));
  return w;
}

Word operator*(const Word& a, const Word& b) {
  std::vector<Letter> r = a.letters_;
  for (Letter l : b.letters_) {
    if (!r.empty() && r.back() == -l) {
      r.pop_back();
    } else {
      r.push_back(l);
    }
  }
  Word w;
  w.letters_ = std::move(r);
  return w;
}

Word abelian_normal_form(const Word& w, std::size_t generators) {
  const auto sums = w.exponent_sums(generators);
  std::vector<Letter> letters;
  for (std::size_t g = 0; g < generators; ++g) {
    for (long i = 0; i < std::abs(sums[g]); ++i) letters.push_back(letter(g, sums[g] > 0 ? 1 : -1));
  }
  return Word(std::move(letters));
}

GroupKind Presentation::kind() const {
  if (relators.empty()) return GroupKind::free;
  // Free abelian: one commutator for every unordered pair of generators.
  const std::size_t n = generators.size();
  if (relators.size() != n * (n - 1) / 2) return GroupKind::general;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& r : relators) {
    const auto& l = r.letters();
    if (l.size() != 4) return GroupKind::general;
    // Accept any cyclic rotation or inverse of a b a^-1 b^-1.
    bool matched = false;
    for (int inv = 0; inv < 2 && !matched; ++inv) {
      const Word w = inv ? r.inverse() : r;
      const auto& m = w.letters();
      for (std::size_t s = 0; s < 4 && !matched; ++s) {
        const Letter a = m[s], b = m[(s + 1) % 4], c = m[(s + 2) % 4], d = m[(s + 3) % 4];
        if (c == -a && d == -b && a > 0 && b > 0 && generator_of(a) != generator_of(b)) {
          auto key = std::minmax(generator_of(a), generator_of(b));
          seen.insert({key.first, key.second});
          matched = true;
        }
      }
    }
    if (!matched) return GroupKind::general;
  }
  return seen.size() == n * (n - 1) / 2 ? GroupKind::free_abelian : GroupKind::general;
}

Word Presentation::normalize(const Word& w) const {
  return kind() == GroupKind::free_abelian ? abelian_normal_form(w, generators.size()) : w;
}

void validate(const Presentation& p) {
  for (const auto& r : p.relators) {
    for (Letter l : r.letters()) {
      if (generator_of(l) >= p.generators.size()) throw InvalidArgument("relator uses unknown generator");
    }
    if (r.cyclically_reduced() != r) throw InvalidArgument("relator is not cyclically reduced");
  }
}

Word parse_word(const std::string& text, const std::vector<std::string>& generators) {
  std::istringstream in(text);
  std::string tok;
  std::vector<Letter> letters;
  while (in >> tok) {
    long exponent = 1;
    std::string name = tok;
    const auto caret = tok.find('^');
    if (caret != std::string::npos) {
      name = tok.substr(0, caret);
      const std::string e = tok.substr(caret + 1);
      try {
        std::size_t used = 0;
        exponent = std::stol(e, &used);
        if (used != e.size()) throw std::invalid_argument(e);
      } catch (const std::exception&) {
        throw InvalidArgument("bad exponent in token '" + tok + "'");
      }
    }
    auto it = std::find(generators.begin(), generators.end(), name);
    if (it == generators.end()) throw InvalidArgument("unknown generator '" + name + "'");
    const auto g = static_cast<std::size_t>(it - generators.begin());
    for (long i = 0; i < std::abs(exponent); ++i) letters.push_back(letter(g, exponent > 0 ? 1 : -1));
  }
  return Word(std::move(letters));
}

std::string format_word(const Word& w, const std::vector<std::string>& generators) {
  std::string s;
  for (Letter l : w.letters()) {
    if (!s.empty()) s += ' ';
    s += generators.at(generator_of(l));
    if (l < 0) s += "^-1";
  }
  return s;
}

}  // namespace l2approx
