#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace l2approx {

// A letter is generator index g encoded as g+1 (positive) or -(g+1) (inverse).
using Letter = int;

inline Letter letter(std::size_t generator, int sign) {
  const int l = static_cast<int>(generator) + 1;
  return sign >= 0 ? l : -l;
}
inline std::size_t generator_of(Letter l) { return static_cast<std::size_t>((l > 0 ? l : -l) - 1); }
inline int sign_of(Letter l) { return l > 0 ? 1 : -1; }

// Freely reduced word in the free group on the generators; the empty word is
// the identity.
class Word {
 public:
  Word() = default;
  // Reduces the given letter sequence.
  explicit Word(std::vector<Letter> letters);
  static Word generator(std::size_t g, int sign = 1) { return Word({letter(g, sign)}); }

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool is_identity() const noexcept { return letters_.empty(); }

  Word inverse() const;
  Word power(long e) const;
  // Exponent sum of each generator (abelianisation), sized to `generators`.
  std::vector<long> exponent_sums(std::size_t generators) const;
  // Cyclic reduction: strips inverse letter pairs at the two ends.
  Word cyclically_reduced() const;

  friend Word operator*(const Word& a, const Word& b);
  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
  // Shortlex order.
  friend bool operator<(const Word& a, const Word& b) {
    if (a.letters_.size() != b.letters_.size()) return a.letters_.size() < b.letters_.size();
    return a.letters_ < b.letters_;
  }

 private:
  std::vector<Letter> letters_;
};

// Free reduction of an arbitrary letter sequence.
std::vector<Letter> free_reduce(const std::vector<Letter>& letters);

// How symbolic products may be normalised. Only free and free-abelian groups
// admit a normal form here; everything else is computed in the free group on
// the generators and only becomes meaningful after specialisation.
enum class GroupKind { free, free_abelian, general };

// Normal form for free abelian groups: generators in index order with their
// exponent sums, e.g. x^2 y^-1.
Word abelian_normal_form(const Word& w, std::size_t generators);

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  std::size_t rank() const { return generators.size(); }
  GroupKind kind() const;
  // Word in the normal form appropriate for kind().
  Word normalize(const Word& w) const;

  friend bool operator==(const Presentation& a, const Presentation& b) {
    return a.generators == b.generators && a.relators == b.relators;
  }
};

// Throws InvalidArgument when a relator is not cyclically reduced or uses an
// unknown generator.
void validate(const Presentation& p);

// Space-separated tokens `x` or `x^-1` (also `x^n` for integer n).
Word parse_word(const std::string& text, const std::vector<std::string>& generators);
std::string format_word(const Word& w, const std::vector<std::string>& generators);

}  // namespace l2approx
