#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace redrep {

/// A generator x_i or its inverse. Generators are 1-based.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(int generator, bool inverted)
      : value_(static_cast<std::int8_t>(inverted ? -generator : generator)) {}

  /// Vertex index in X^{+-}: x_i -> 2(i-1), x_i^-1 -> 2(i-1)+1.
  static constexpr Letter from_vertex(int v) { return Letter(v / 2 + 1, (v & 1) != 0); }

  constexpr int generator() const { return value_ < 0 ? -value_ : value_; }
  constexpr bool inverted() const { return value_ < 0; }
  constexpr int signed_value() const { return value_; }
  constexpr int vertex() const { return 2 * (generator() - 1) + (inverted() ? 1 : 0); }
  constexpr Letter inverse() const { return Letter(generator(), !inverted()); }

  constexpr bool operator==(const Letter&) const = default;
  // Canonical order: x1 < x1^-1 < x2 < x2^-1 < ...
  constexpr std::strong_ordering operator<=>(const Letter& o) const { return vertex() <=> o.vertex(); }

 private:
  std::int8_t value_ = 1;
};

/// Freely reduced word in F_n. The empty word is the identity.
class Word {
 public:
  explicit Word(int rank);

  static Word generator(int rank, int index, bool inverted = false);

  int rank() const { return rank_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::span<const Letter> letters() const { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  Word inverse() const;
  Word power(int k) const;
  /// Sum of signed exponents per generator (the image in Z^n).
  std::vector<int> exponent_sums() const;

  friend Word operator*(const Word& a, const Word& b);
  bool operator==(const Word&) const = default;
  std::strong_ordering operator<=>(const Word& o) const;

 private:
  friend Word reduce(int rank, std::span<const Letter> letters);
  int rank_;
  std::vector<Letter> letters_;
};

/// Free reduction of an arbitrary letter sequence. Throws std::invalid_argument
/// when a letter's generator is outside 1..rank.
Word reduce(int rank, std::span<const Letter> letters);

Word commutator(const Word& a, const Word& b);

struct CyclicReduction {
  Word core;
  Word conjugator;  // w = conjugator * core * conjugator^-1
};

CyclicReduction cyclic_reduce(const Word& w);
std::size_t cyclic_length(const Word& w);

/// Parses whitespace separated tokens `x3` / `x3^-1`. Empty text is the identity.
Word parse_word(std::string_view text, int rank);
std::string to_string(const Word& w);

/// Conjugacy class of F_n up to inversion, keyed by the least cyclic rotation
/// of the cyclically reduced word and of its inverse.
class ConjClass {
 public:
  static ConjClass of(const Word& w);

  const Word& canonical() const { return canonical_; }
  std::size_t length() const { return canonical_.length(); }
  /// Compact byte key (one byte per letter vertex); equal iff classes are equal.
  std::string key() const;

  bool operator==(const ConjClass& o) const { return canonical_ == o.canonical_; }
  std::strong_ordering operator<=>(const ConjClass& o) const { return canonical_ <=> o.canonical_; }

 private:
  explicit ConjClass(Word w) : canonical_(std::move(w)) {}
  Word canonical_;
};

/// Least rotation (as letters) of a cyclically reduced word and its inverse.
/// Shared by ConjClass and the enumeration kernels.
void canonical_cyclic_letters(std::span<const Letter> core, std::vector<Letter>& out);

}  // namespace redrep
