#include "redrep/word.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace redrep {

Word::Word(int rank) : rank_(rank) {
  if (rank < 1) throw std::invalid_argument("rank must be positive");
}

Word Word::generator(int rank, int index, bool inverted) {
  const Letter l(index, inverted);
  return reduce(rank, std::span<const Letter>(&l, 1));
}

Word Word::inverse() const {
  Word out(rank_);
  out.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.letters_.push_back(it->inverse());
  return out;
}

Word Word::power(int k) const {
  if (k < 0) return inverse().power(-k);
  Word out(rank_);
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

std::vector<int> Word::exponent_sums() const {
  std::vector<int> sums(static_cast<std::size_t>(rank_), 0);
  for (Letter l : letters_) sums[static_cast<std::size_t>(l.generator() - 1)] += l.inverted() ? -1 : 1;
  return sums;
}

Word operator*(const Word& a, const Word& b) {
  if (a.rank_ != b.rank_) throw std::invalid_argument("rank mismatch in word product");
  Word out(a.rank_);
  std::size_t cancel = 0;
  const std::size_t na = a.letters_.size(), nb = b.letters_.size();
  while (cancel < na && cancel < nb && a.letters_[na - 1 - cancel] == b.letters_[cancel].inverse()) ++cancel;
  out.letters_.reserve(na + nb - 2 * cancel);
  out.letters_.insert(out.letters_.end(), a.letters_.begin(), a.letters_.end() - static_cast<std::ptrdiff_t>(cancel));
  out.letters_.insert(out.letters_.end(), b.letters_.begin() + static_cast<std::ptrdiff_t>(cancel), b.letters_.end());
  return out;
}

std::strong_ordering Word::operator<=>(const Word& o) const {
  if (auto c = rank_ <=> o.rank_; c != 0) return c;
  if (auto c = letters_.size() <=> o.letters_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(letters_.begin(), letters_.end(), o.letters_.begin(),
                                                o.letters_.end());
}

Word reduce(int rank, std::span<const Letter> letters) {
  Word out(rank);
  out.letters_.reserve(letters.size());
  for (Letter l : letters) {
    if (l.generator() < 1 || l.generator() > rank)
      throw std::invalid_argument("generator x" + std::to_string(l.generator()) + " outside rank " +
                                  std::to_string(rank));
    if (!out.letters_.empty() && out.letters_.back() == l.inverse())
      out.letters_.pop_back();
    else
      out.letters_.push_back(l);
  }
  return out;
}

Word commutator(const Word& a, const Word& b) { return a * b * a.inverse() * b.inverse(); }

CyclicReduction cyclic_reduce(const Word& w) {
  const auto letters = w.letters();
  std::size_t lo = 0, hi = letters.size();
  while (hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  return {reduce(w.rank(), letters.subspan(lo, hi - lo)), reduce(w.rank(), letters.first(lo))};
}

std::size_t cyclic_length(const Word& w) {
  const auto letters = w.letters();
  std::size_t lo = 0, hi = letters.size();
  while (hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  return hi - lo;
}

Word parse_word(std::string_view text, int rank) {
  std::vector<Letter> letters;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    std::string_view t = tok;
    bool inverted = false;
    if (t.size() > 3 && t.substr(t.size() - 3) == "^-1") {
      inverted = true;
      t.remove_suffix(3);
    }
    if (t.size() < 2 || t[0] != 'x') throw std::invalid_argument("malformed token '" + tok + "'");
    int index = 0;
    auto [ptr, ec] = std::from_chars(t.data() + 1, t.data() + t.size(), index);
    if (ec != std::errc() || ptr != t.data() + t.size() || index < 1 || index > 127)
      throw std::invalid_argument("malformed token '" + tok + "'");
    letters.emplace_back(index, inverted);
  }
  return reduce(rank, letters);
}

std::string to_string(const Word& w) {
  std::string out;
  for (Letter l : w.letters()) {
    if (!out.empty()) out += ' ';
    out += 'x';
    out += std::to_string(l.generator());
    if (l.inverted()) out += "^-1";
  }
  return out;
}

void canonical_cyclic_letters(std::span<const Letter> core, std::vector<Letter>& out) {
  const std::size_t n = core.size();
  out.assign(core.begin(), core.end());
  if (n == 0) return;
  auto better = [&](auto&& at) {
    for (std::size_t i = 0; i < n; ++i) {
      const Letter c = at(i);
      if (c < out[i]) return true;
      if (out[i] < c) return false;
    }
    return false;
  };
  for (std::size_t r = 0; r < n; ++r) {
    auto rot = [&](std::size_t i) { return core[(r + i) % n]; };
    if (r > 0 && better(rot))
      for (std::size_t i = 0; i < n; ++i) out[i] = rot(i);
    // Inverse word read from position r backwards.
    auto inv = [&](std::size_t i) { return core[(r + n - i) % n].inverse(); };
    if (better(inv))
      for (std::size_t i = 0; i < n; ++i) out[i] = inv(i);
  }
}

ConjClass ConjClass::of(const Word& w) {
  const Word core = cyclic_reduce(w).core;
  std::vector<Letter> best;
  canonical_cyclic_letters(core.letters(), best);
  return ConjClass(reduce(w.rank(), best));
}

std::string ConjClass::key() const {
  std::string k;
  k.reserve(canonical_.length());
  for (Letter l : canonical_.letters()) k.push_back(static_cast<char>(l.vertex()));
  return k;
}

}  // namespace redrep
