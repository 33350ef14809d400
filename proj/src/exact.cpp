#include "redrep/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace redrep {

namespace {

mpz_class to_mpz(double x) {
  mpz_class z;
  mpz_set_d(z.get_mpz_t(), x);
  return z;
}

// Above this many bits arccosh(y) and ln(2y) agree to double precision.
constexpr long kLargeBits = 64;

}  // namespace

IntMatrix IntMatrix::from(const GroupElement& g) {
  if (!g.is_integral()) throw std::invalid_argument("matrix entries are not exact integers");
  return {to_mpz(g.a().real()), to_mpz(g.b().real()), to_mpz(g.c().real()), to_mpz(g.d().real())};
}

IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

ExactRepresentation::ExactRepresentation(const Representation& rep) {
  for (const auto& g : rep.images()) {
    images_.push_back(IntMatrix::from(g));
    inverses_.push_back(images_.back().inverse());
  }
}

const IntMatrix& ExactRepresentation::image(Letter l) const {
  const auto i = static_cast<std::size_t>(l.generator() - 1);
  return l.inverted() ? inverses_.at(i) : images_.at(i);
}

IntMatrix ExactRepresentation::evaluate(const Word& w) const {
  if (w.rank() != rank()) throw std::invalid_argument("rank mismatch in exact evaluation");
  IntMatrix out;
  for (Letter l : w.letters()) out = out * image(l);
  return out;
}

double log_mpz(const mpz_class& x) {
  if (sgn(x) <= 0) throw std::invalid_argument("log of a nonpositive integer");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

double translation_length_exact(const mpz_class& trace) {
  const mpz_class t = abs(trace);
  if (t <= 2) return 0.0;
  if (mpz_sizeinbase(t.get_mpz_t(), 2) > kLargeBits) return 2.0 * log_mpz(t);
  return 2.0 * std::acosh(t.get_d() / 2.0);
}

double displacement_exact(const IntMatrix& g) {
  const mpz_class n = g.frobenius2();
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > kLargeBits) return log_mpz(n);
  // cosh d = n / 2 with n >= 2 for unit determinant.
  const mpz_class excess = n - 2;
  return 2.0 * std::asinh(std::sqrt(std::max(0.0, excess.get_d()) / 4.0));
}

}  // namespace redrep
