#include "redrep/automorphism.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace redrep {

namespace {

bool is_generator_image(const std::vector<Word>& images) {
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto& w = images[i];
    if (w.length() != 1 || w[0] != Letter(static_cast<int>(i) + 1, false)) return false;
  }
  return true;
}

std::vector<Word> compose_images(const std::vector<Word>& outer, const std::vector<Word>& inner) {
  std::vector<Word> out;
  out.reserve(inner.size());
  for (const auto& w : inner) out.push_back(apply_images(outer, w));
  return out;
}

}  // namespace

FreeAutomorphism::FreeAutomorphism(std::vector<Word> images, std::vector<Word> inverse_images)
    : images_(std::move(images)), inverse_images_(std::move(inverse_images)) {
  const std::size_t n = images_.size();
  if (n == 0 || inverse_images_.size() != n) throw std::invalid_argument("automorphism needs n images and n inverse images");
  for (const auto& w : images_)
    if (w.rank() != static_cast<int>(n)) throw std::invalid_argument("image rank mismatch");
  for (const auto& w : inverse_images_)
    if (w.rank() != static_cast<int>(n)) throw std::invalid_argument("inverse image rank mismatch");
  if (!is_generator_image(compose_images(images_, inverse_images_)) ||
      !is_generator_image(compose_images(inverse_images_, images_)))
    throw std::invalid_argument("inverse images do not invert the automorphism");
}

FreeAutomorphism FreeAutomorphism::identity(int rank) {
  std::vector<Word> gens;
  for (int i = 1; i <= rank; ++i) gens.push_back(Word::generator(rank, i));
  return FreeAutomorphism(gens, gens, Unchecked{});
}

FreeAutomorphism FreeAutomorphism::right_transvection(int rank, int target, const Word& w) {
  for (Letter l : w.letters())
    if (l.generator() == target) throw std::invalid_argument("transvection word involves its target");
  std::vector<Word> images, inverse;
  for (int i = 1; i <= rank; ++i) {
    const Word g = Word::generator(rank, i);
    images.push_back(i == target ? g * w : g);
    inverse.push_back(i == target ? g * w.inverse() : g);
  }
  return FreeAutomorphism(std::move(images), std::move(inverse));
}

bool FreeAutomorphism::is_identity() const { return is_generator_image(images_); }

Word apply_images(const std::vector<Word>& images, const Word& w) {
  const int rank = static_cast<int>(images.size());
  if (w.rank() != rank) throw std::invalid_argument("rank mismatch in apply");
  std::vector<Letter> buf;
  for (Letter l : w.letters()) {
    const Word& img = images[static_cast<std::size_t>(l.generator() - 1)];
    if (!l.inverted()) {
      buf.insert(buf.end(), img.letters().begin(), img.letters().end());
    } else {
      for (auto it = img.letters().rbegin(); it != img.letters().rend(); ++it) buf.push_back(it->inverse());
    }
  }
  return reduce(rank, buf);
}

Word apply(const FreeAutomorphism& a, const Word& w) { return apply_images(a.images(), w); }

FreeAutomorphism compose(const FreeAutomorphism& a, const FreeAutomorphism& b) {
  if (a.rank() != b.rank()) throw std::invalid_argument("rank mismatch in compose");
  // (a o b)^-1 = b^-1 o a^-1
  return FreeAutomorphism(compose_images(a.images_, b.images_), compose_images(b.inverse_images_, a.inverse_images_));
}

std::vector<FreeAutomorphism> nielsen_generators(int n) {
  if (n < 2) throw std::invalid_argument("nielsen_generators needs n >= 2");
  std::vector<FreeAutomorphism> out;
  auto gen = [n](int i, bool inv = false) { return Word::generator(n, i, inv); };
  auto identity_images = [&] {
    std::vector<Word> v;
    for (int i = 1; i <= n; ++i) v.push_back(gen(i));
    return v;
  };
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      auto img = identity_images();
      std::swap(img[static_cast<std::size_t>(i - 1)], img[static_cast<std::size_t>(j - 1)]);
      out.emplace_back(img, img);
    }
  for (int i = 1; i <= n; ++i) {
    auto img = identity_images();
    img[static_cast<std::size_t>(i - 1)] = gen(i, true);
    out.emplace_back(img, img);
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      for (bool inv : {false, true}) {
        for (bool left : {false, true}) {
          auto img = identity_images();
          auto back = identity_images();
          const auto idx = static_cast<std::size_t>(i - 1);
          if (left) {
            img[idx] = gen(j, inv) * gen(i);
            back[idx] = gen(j, !inv) * gen(i);
          } else {
            img[idx] = gen(i) * gen(j, inv);
            back[idx] = gen(i) * gen(j, !inv);
          }
          out.emplace_back(std::move(img), std::move(back));
        }
      }
    }
  return out;
}

WhiteheadMove WhiteheadMove::second_kind(int rank, Letter multiplier, std::uint32_t subset) {
  WhiteheadMove m;
  m.kind = Kind::Multiplier;
  m.rank = rank;
  m.multiplier = multiplier;
  m.subset = subset;
  if (!(subset & (1u << multiplier.vertex())) || (subset & (1u << multiplier.inverse().vertex())))
    throw std::invalid_argument("Whitehead subset must contain a and exclude a^-1");
  if (subset >> (2 * rank)) throw std::invalid_argument("Whitehead subset outside X^{+-}");
  return m;
}

void WhiteheadMove::apply_letters(std::span<const Letter> in, std::vector<Letter>& out) const {
  out.clear();
  auto push = [&out](Letter l) {
    if (!out.empty() && out.back() == l.inverse())
      out.pop_back();
    else
      out.push_back(l);
  };
  if (kind == Kind::Permutation) {
    for (Letter l : in) {
      const Letter img = permutation[static_cast<std::size_t>(l.generator() - 1)];
      push(l.inverted() ? img.inverse() : img);
    }
    return;
  }
  const Letter a = multiplier;
  for (Letter l : in) {
    if (l.generator() == a.generator()) {
      push(l);
      continue;
    }
    if (subset & (1u << l.inverse().vertex())) push(a.inverse());
    push(l);
    if (subset & (1u << l.vertex())) push(a);
  }
}

Word WhiteheadMove::apply(const Word& w) const {
  std::vector<Letter> out;
  apply_letters(w.letters(), out);
  return reduce(w.rank(), out);
}

FreeAutomorphism WhiteheadMove::automorphism() const {
  std::vector<Word> images, inverse;
  if (kind == Kind::Permutation) {
    std::vector<Letter> inv_perm(permutation.size());
    for (std::size_t i = 0; i < permutation.size(); ++i) {
      const Letter img = permutation[i];
      inv_perm[static_cast<std::size_t>(img.generator() - 1)] = Letter(static_cast<int>(i) + 1, img.inverted());
    }
    for (std::size_t i = 0; i < permutation.size(); ++i) {
      images.push_back(reduce(rank, std::span<const Letter>(&permutation[i], 1)));
      inverse.push_back(reduce(rank, std::span<const Letter>(&inv_perm[i], 1)));
    }
    return FreeAutomorphism(std::move(images), std::move(inverse));
  }
  const std::uint32_t inv_subset =
      (subset & ~(1u << multiplier.vertex())) | (1u << multiplier.inverse().vertex());
  const WhiteheadMove back = second_kind(rank, multiplier.inverse(), inv_subset);
  for (int i = 1; i <= rank; ++i) {
    const Word g = Word::generator(rank, i);
    images.push_back(apply(g));
    inverse.push_back(back.apply(g));
  }
  return FreeAutomorphism(std::move(images), std::move(inverse));
}

std::string WhiteheadMove::describe() const {
  auto label = [](Letter l) { return "x" + std::to_string(l.generator()) + (l.inverted() ? "^-1" : ""); };
  std::string s;
  if (kind == Kind::Permutation) {
    s = "perm(";
    for (std::size_t i = 0; i < permutation.size(); ++i) s += (i ? " " : "") + label(permutation[i]);
    return s + ")";
  }
  s = "mult(" + label(multiplier) + "; {";
  bool first = true;
  for (int v = 0; v < 2 * rank; ++v)
    if (subset & (1u << v)) {
      s += (first ? "" : " ") + label(Letter::from_vertex(v));
      first = false;
    }
  return s + "})";
}

std::vector<WhiteheadMove> whitehead_second_kind_moves(int n) {
  if (n < 2) throw std::invalid_argument("Whitehead moves need n >= 2");
  if (n > 8) throw std::invalid_argument("Whitehead moves supported for n <= 8");
  std::vector<WhiteheadMove> out;
  const int nv = 2 * n;
  for (int va = 0; va < nv; ++va) {
    const Letter a = Letter::from_vertex(va);
    const std::uint32_t fixed = (1u << va) | (1u << a.inverse().vertex());
    for (std::uint32_t mask = 1; mask < (1u << nv); ++mask) {
      if (mask & fixed) continue;
      out.push_back(WhiteheadMove::second_kind(n, a, mask | (1u << va)));
    }
  }
  return out;
}

std::vector<WhiteheadMove> whitehead_moves(int n) {
  if (n < 2) throw std::invalid_argument("Whitehead moves need n >= 2");
  std::vector<WhiteheadMove> out;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  do {
    for (std::uint32_t signs = 0; signs < (1u << n); ++signs) {
      WhiteheadMove m;
      m.kind = WhiteheadMove::Kind::Permutation;
      m.rank = n;
      bool identity = signs == 0;
      for (int i = 0; i < n; ++i) {
        m.permutation.emplace_back(perm[static_cast<std::size_t>(i)], (signs >> i) & 1u);
        if (perm[static_cast<std::size_t>(i)] != i + 1) identity = false;
      }
      if (!identity) out.push_back(std::move(m));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  auto second = whitehead_second_kind_moves(n);
  out.insert(out.end(), std::make_move_iterator(second.begin()), std::make_move_iterator(second.end()));
  return out;
}

std::vector<FreeAutomorphism> whitehead_automorphisms(int n) {
  std::vector<FreeAutomorphism> out;
  for (const auto& m : whitehead_moves(n)) out.push_back(m.automorphism());
  return out;
}

}  // namespace redrep
