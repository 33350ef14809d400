#pragma once

#include <array>
#include <complex>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "redrep/automorphism.hpp"
#include "redrep/word.hpp"

namespace redrep {

using Scalar = std::complex<double>;

/// Which group a matrix lives in. Real and SU2 matrices are stored with
/// complex entries; Real keeps every imaginary part exactly zero.
enum class Field { Real, Complex, SU2 };

std::string to_string(Field f);
Field parse_field(const std::string& s);

/// Numerical thresholds shared by the sl2, density and dynamics modules.
struct Tolerance {
  double det = 1e-9;            // |det - 1|, relative to the entry scale
  double parabolic = 1e-8;      // band around trace +-2
  double rank_relative = 1e-8;  // singular value cutoff relative to the largest
};

const Tolerance& default_tolerance();

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 2x2 matrix [[a, b], [c, d]] with unit determinant.
class GroupElement {
 public:
  GroupElement() = default;  // identity of SL2(R)
  /// Validates the field constraints and |det - 1| <= tol.det (scaled by the
  /// magnitude of the entries). Throws NumericalError.
  GroupElement(Field field, Scalar a, Scalar b, Scalar c, Scalar d, const Tolerance& tol = default_tolerance());

  static GroupElement identity(Field field);
  static GroupElement real(double a, double b, double c, double d);
  /// SU(2) element [[alpha, beta], [-conj(beta), conj(alpha)]] (normalised).
  static GroupElement su2(Scalar alpha, Scalar beta);

  Field field() const { return field_; }
  Scalar a() const { return m_[0]; }
  Scalar b() const { return m_[1]; }
  Scalar c() const { return m_[2]; }
  Scalar d() const { return m_[3]; }
  Scalar entry(int row, int col) const { return m_[static_cast<std::size_t>(2 * row + col)]; }

  Scalar det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
  Scalar trace() const { return m_[0] + m_[3]; }
  double max_abs_entry() const;
  bool is_integral() const;

  /// Inverse via the adjugate (exact for unit determinant).
  GroupElement inverse() const;
  /// Explicit renormalisation: divides by sqrt(det); SU2 is projected back
  /// onto the unitary form.
  GroupElement renormalized() const;

  friend GroupElement operator*(const GroupElement& x, const GroupElement& y);
  GroupElement operator-() const;

 private:
  struct Raw {};
  GroupElement(Field field, Scalar a, Scalar b, Scalar c, Scalar d, Raw) : field_(field), m_{a, b, c, d} {}
  Field field_ = Field::Real;
  std::array<Scalar, 4> m_{Scalar{1}, Scalar{0}, Scalar{0}, Scalar{1}};
};

/// Spectral norm of x - y.
double operator_distance(const GroupElement& x, const GroupElement& y);
/// min(||g - I||, ||g + I||).
double distance_from_center(const GroupElement& g);
double operator_norm(const GroupElement& g);
/// Frobenius norm squared.
double frobenius_norm2(const GroupElement& g);

enum class IsometryKind { Identity, Elliptic, Parabolic, Hyperbolic, Loxodromic };
std::string to_string(IsometryKind k);

struct IsometryType {
  IsometryKind kind;
  Scalar trace;
};

IsometryType classify(const GroupElement& g, const Tolerance& tol = default_tolerance());

/// 2 ln(max eigenvalue modulus); exactly 0 for identity, elliptic and
/// parabolic classifications.
double translation_length(const GroupElement& g, const Tolerance& tol = default_tolerance());
/// 2 |Re arccosh(tr/2)|, the cross-check formula.
double translation_length_arccosh(const GroupElement& g);
/// Translation length from a real trace of large magnitude, overflow-safe.
double translation_length_from_trace(double abs_trace);

/// theta in (0, pi] with tr = 2 cos(theta). Throws std::invalid_argument for
/// non-elliptic input.
double rotation_angle(const GroupElement& g, const Tolerance& tol = default_tolerance());

using AdMatrix = Eigen::Matrix<Scalar, 3, 3>;

/// Matrix of v -> g v g^-1 on sl2 in the basis H, E, F; for SU2 on su(2) in
/// the basis (i sigma_3, i sigma_2, i sigma_1), which makes it real.
AdMatrix adjoint(const GroupElement& g);

/// Rank of span{Ad(g)} as 9-vectors over the base field (complex rank for the
/// Complex field). Value in 1..9.
int ad_span_rank(std::span<const GroupElement> elements, const Tolerance& tol = default_tolerance());
/// Rank over R of span{Ad(g)}, where complex 9-vectors count as real
/// 18-vectors. At most 9 for Real and SU2, 18 for Complex.
int ad_real_span_rank(std::span<const GroupElement> elements, const Tolerance& tol = default_tolerance());
/// Real dimension at which span{Ad(Gamma)} is the full algebra of the field.
int full_ad_real_rank(Field f);

/// exp(x H + y E + z F) (sl2 basis) or exp(x u1 + y u2 + z u3) (su(2) basis,
/// real coordinates), closed form.
GroupElement lie_exp(Field f, const std::array<Scalar, 3>& coords);

/// Seeded random element: Haar for SU2; exp of a Gaussian Lie algebra element
/// with standard deviation `spread` per coordinate otherwise.
GroupElement random_element(Field f, std::mt19937_64& rng, double spread = 1.0);
/// Element within operator distance about `radius` of the identity.
GroupElement random_near_identity(Field f, std::mt19937_64& rng, double radius);

/// Incrementally grown orthonormal basis of span{Ad(g)} over R.
class AdSpan {
 public:
  explicit AdSpan(Field field, const Tolerance& tol = default_tolerance());
  /// Adds Ad(g); returns true if the real rank grew.
  bool add(const GroupElement& g);
  int rank() const { return static_cast<int>(basis_.size()); }
  bool full() const { return rank() == full_ad_real_rank(field_); }

 private:
  Field field_;
  Tolerance tol_;
  double scale_ = 0.0;
  std::vector<Eigen::VectorXd> basis_;
};

/// A point of Hom(F_n, G) = G^n.
class Representation {
 public:
  explicit Representation(std::vector<GroupElement> images);

  int rank() const { return static_cast<int>(images_.size()); }
  Field field() const { return field_; }
  const std::vector<GroupElement>& images() const { return images_; }
  const GroupElement& image(int generator) const { return images_[static_cast<std::size_t>(generator - 1)]; }
  bool is_integral() const;

 private:
  Field field_;
  std::vector<GroupElement> images_;
};

GroupElement evaluate(const Representation& rep, const Word& w);
/// Evaluates a word over an explicit generator list (rank = size of the list).
GroupElement evaluate(std::span<const GroupElement> generators, const Word& w);
/// (a . rho)(x_i) = rho(a^-1(x_i)).
Representation act(const FreeAutomorphism& a, const Representation& rep);

/// Point of upper half-space: z + t j with t > 0.
struct H3Point {
  Scalar z;
  double height;

  static H3Point make(Scalar z, double height);
};

double h3_distance(const H3Point& p, const H3Point& q);
H3Point mobius_act(const GroupElement& g, const H3Point& p);
/// d(j, g j) for the height-1 basepoint j, via cosh d = |g|_F^2 / 2.
double basepoint_displacement(const GroupElement& g);

}  // namespace redrep
