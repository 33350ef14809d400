#pragma once

#include <span>
#include <vector>

#include <gmpxx.h>

#include "redrep/sl2.hpp"
#include "redrep/word.hpp"

namespace redrep {

/// Integer 2x2 matrix with arbitrary-precision entries.
struct IntMatrix {
  mpz_class a{1}, b{0}, c{0}, d{1};

  static IntMatrix from(const GroupElement& g);  // throws unless g.is_integral()
  IntMatrix inverse() const { return {d, -b, -c, a}; }
  mpz_class trace() const { return a + d; }
  mpz_class det() const { return a * d - b * c; }
  mpz_class frobenius2() const { return a * a + b * b + c * c + d * d; }
  bool operator==(const IntMatrix&) const = default;
};

IntMatrix operator*(const IntMatrix& x, const IntMatrix& y);

/// Generator images and their inverses for repeated evaluation.
class ExactRepresentation {
 public:
  explicit ExactRepresentation(const Representation& rep);
  int rank() const { return static_cast<int>(images_.size()); }
  const IntMatrix& image(Letter l) const;
  IntMatrix evaluate(const Word& w) const;

 private:
  std::vector<IntMatrix> images_, inverses_;
};

/// Natural log of a positive integer, valid beyond the double range.
double log_mpz(const mpz_class& x);
/// 2 arccosh(|t| / 2), 0 when |t| <= 2.
double translation_length_exact(const mpz_class& trace);
/// d(j, g j) = arccosh(|g|_F^2 / 2).
double displacement_exact(const IntMatrix& g);

}  // namespace redrep
