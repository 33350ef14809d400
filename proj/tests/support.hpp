#pragma once

#include <random>
#include <vector>

#include "redrep/automorphism.hpp"
#include "redrep/sl2.hpp"
#include "redrep/word.hpp"

namespace testing {

using namespace redrep;

// Uniform reduced word of the given length.
inline Word random_word(int rank, std::size_t length, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 2 * rank - 1);
  std::vector<Letter> letters;
  while (letters.size() < length) {
    const Letter l = Letter::from_vertex(pick(rng));
    if (!letters.empty() && letters.back() == l.inverse()) continue;
    letters.push_back(l);
  }
  return reduce(rank, letters);
}

// Raw letter sequence, possibly unreduced.
inline std::vector<Letter> random_letters(int rank, std::size_t length, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 2 * rank - 1);
  std::vector<Letter> out;
  for (std::size_t i = 0; i < length; ++i) out.push_back(Letter::from_vertex(pick(rng)));
  return out;
}

inline FreeAutomorphism random_automorphism(int rank, int moves, std::mt19937_64& rng) {
  const auto gens = nielsen_generators(rank);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  FreeAutomorphism a = FreeAutomorphism::identity(rank);
  for (int i = 0; i < moves; ++i) a = compose(a, gens[pick(rng)]);
  return a;
}

// Stack-based free reduction written independently of the library.
inline std::vector<int> naive_reduce(const std::vector<Letter>& letters) {
  std::vector<int> out;
  for (Letter l : letters) {
    const int v = l.signed_value();
    if (!out.empty() && out.back() == -v)
      out.pop_back();
    else
      out.push_back(v);
  }
  return out;
}

inline std::vector<int> signed_letters(const Word& w) {
  std::vector<int> out;
  for (Letter l : w.letters()) out.push_back(l.signed_value());
  return out;
}

// All reduced words of exactly the given length.
inline std::vector<Word> all_reduced_words(int rank, std::size_t length) {
  std::vector<std::vector<Letter>> layer{{}};
  for (std::size_t i = 0; i < length; ++i) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : layer)
      for (int v = 0; v < 2 * rank; ++v) {
        const Letter l = Letter::from_vertex(v);
        if (!w.empty() && w.back() == l.inverse()) continue;
        auto x = w;
        x.push_back(l);
        next.push_back(std::move(x));
      }
    layer = std::move(next);
  }
  std::vector<Word> out;
  for (const auto& w : layer) out.push_back(reduce(rank, w));
  return out;
}

inline double max_entry_difference(const GroupElement& x, const GroupElement& y) {
  double m = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m = std::max(m, std::abs(x.entry(r, c) - y.entry(r, c)));
  return m;
}

}  // namespace testing
