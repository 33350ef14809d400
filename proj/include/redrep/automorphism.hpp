#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "redrep/word.hpp"

namespace redrep {

/// Automorphism of F_n stored by generator images together with the images of
/// its inverse. The constructor checks both composites are the identity.
class FreeAutomorphism {
 public:
  FreeAutomorphism(std::vector<Word> images, std::vector<Word> inverse_images);

  static FreeAutomorphism identity(int rank);
  /// x_target -> x_target * w (w must not involve x_target).
  static FreeAutomorphism right_transvection(int rank, int target, const Word& w);

  int rank() const { return static_cast<int>(images_.size()); }
  const std::vector<Word>& images() const { return images_; }
  const std::vector<Word>& inverse_images() const { return inverse_images_; }
  const Word& image(int generator) const { return images_[static_cast<std::size_t>(generator - 1)]; }

  FreeAutomorphism inverse() const { return FreeAutomorphism(inverse_images_, images_, Unchecked{}); }
  bool is_identity() const;

  bool operator==(const FreeAutomorphism& o) const { return images_ == o.images_; }

 private:
  struct Unchecked {};
  FreeAutomorphism(std::vector<Word> images, std::vector<Word> inverse_images, Unchecked)
      : images_(std::move(images)), inverse_images_(std::move(inverse_images)) {}
  friend FreeAutomorphism compose(const FreeAutomorphism& a, const FreeAutomorphism& b);

  std::vector<Word> images_;
  std::vector<Word> inverse_images_;
};

/// Image of w under the endomorphism given by generator images.
Word apply_images(const std::vector<Word>& images, const Word& w);
Word apply(const FreeAutomorphism& a, const Word& w);

/// a o b, i.e. x -> a(b(x)). Throws std::invalid_argument on rank mismatch.
FreeAutomorphism compose(const FreeAutomorphism& a, const FreeAutomorphism& b);

/// Transpositions, single inversions and the four one-sided multiplications
/// x_i -> x_i x_j^{+-1}, x_j^{+-1} x_i for i != j. Requires n >= 2.
std::vector<FreeAutomorphism> nielsen_generators(int n);

/// A Whitehead automorphism in compact form.
///
/// First kind: a signed permutation of the generators, `permutation[i]` is the
/// image letter of x_{i+1}.
/// Second kind: a multiplier letter a and a set A of vertices of X^{+-} with
/// a in A and a^-1 not in A. Each letter y != a^{+-1} maps to
/// [a^-1 if y^-1 in A] y [a if y in A]; a is fixed.
struct WhiteheadMove {
  enum class Kind { Permutation, Multiplier };

  Kind kind = Kind::Multiplier;
  int rank = 2;
  std::vector<Letter> permutation;
  Letter multiplier;
  std::uint32_t subset = 0;  // bitmask over vertices

  static WhiteheadMove second_kind(int rank, Letter multiplier, std::uint32_t subset);

  /// Letter-wise image followed by free reduction.
  Word apply(const Word& w) const;
  /// Same as apply but writes the letters of the image into `out` (reduced).
  void apply_letters(std::span<const Letter> in, std::vector<Letter>& out) const;

  FreeAutomorphism automorphism() const;
  std::string describe() const;
};

/// Every Whitehead move of rank n: all non-identity signed permutations first,
/// then second-kind moves ordered by multiplier vertex and subset mask. The
/// trivial second-kind moves with A = {a} are left out.
std::vector<WhiteheadMove> whitehead_moves(int n);
/// Second-kind moves only, in the same order as whitehead_moves.
std::vector<WhiteheadMove> whitehead_second_kind_moves(int n);
std::vector<FreeAutomorphism> whitehead_automorphisms(int n);

}  // namespace redrep
