#include "redrep/sl2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>

namespace redrep {

std::string to_string(Field f) {
  switch (f) {
    case Field::Real: return "real";
    case Field::Complex: return "complex";
    case Field::SU2: return "su2";
  }
  return "?";
}

Field parse_field(const std::string& s) {
  if (s == "real") return Field::Real;
  if (s == "complex") return Field::Complex;
  if (s == "su2") return Field::SU2;
  throw std::invalid_argument("unknown field '" + s + "' (expected real, complex or su2)");
}

const Tolerance& default_tolerance() {
  static const Tolerance tol{};
  return tol;
}

namespace {

double det_scale(Scalar a, Scalar b, Scalar c, Scalar d) {
  return std::max(1.0, std::abs(a) * std::abs(d) + std::abs(b) * std::abs(c));
}

}  // namespace

GroupElement::GroupElement(Field field, Scalar a, Scalar b, Scalar c, Scalar d, const Tolerance& tol)
    : field_(field), m_{a, b, c, d} {
  for (const auto& x : m_)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw NumericalError("non-finite matrix entry");
  if (field == Field::Real) {
    for (auto& x : m_) {
      if (std::abs(x.imag()) > tol.det * std::max(1.0, std::abs(x.real())))
        throw NumericalError("real field element with imaginary entries");
      x = Scalar(x.real(), 0.0);
    }
  }
  if (field == Field::SU2) {
    const double dev = std::abs(m_[3] - std::conj(m_[0])) + std::abs(m_[2] + std::conj(m_[1]));
    if (dev > tol.det) throw NumericalError("su2 element is not of the form [[a, b], [-conj b, conj a]]");
  }
  if (std::abs(det() - 1.0) > tol.det * det_scale(m_[0], m_[1], m_[2], m_[3]))
    throw NumericalError("determinant drifted from 1");
}

GroupElement GroupElement::identity(Field field) { return GroupElement(field, 1.0, 0.0, 0.0, 1.0, Raw{}); }

GroupElement GroupElement::real(double a, double b, double c, double d) { return GroupElement(Field::Real, a, b, c, d); }

GroupElement GroupElement::su2(Scalar alpha, Scalar beta) {
  const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (n == 0.0) throw NumericalError("zero quaternion");
  alpha /= n;
  beta /= n;
  return GroupElement(Field::SU2, alpha, beta, -std::conj(beta), std::conj(alpha), Raw{});
}

double GroupElement::max_abs_entry() const {
  double m = 0.0;
  for (const auto& x : m_) m = std::max(m, std::abs(x));
  return m;
}

bool GroupElement::is_integral() const {
  for (const auto& x : m_) {
    if (x.imag() != 0.0 || std::abs(x.real()) > 9007199254740992.0 || std::round(x.real()) != x.real()) return false;
  }
  return true;
}

GroupElement GroupElement::inverse() const { return GroupElement(field_, m_[3], -m_[1], -m_[2], m_[0], Raw{}); }

GroupElement GroupElement::operator-() const { return GroupElement(field_, -m_[0], -m_[1], -m_[2], -m_[3], Raw{}); }

GroupElement GroupElement::renormalized() const {
  if (field_ == Field::SU2) {
    const Scalar alpha = 0.5 * (m_[0] + std::conj(m_[3]));
    const Scalar beta = 0.5 * (m_[1] - std::conj(m_[2]));
    return su2(alpha, beta);
  }
  Scalar s = std::sqrt(det());
  if (field_ == Field::Real) {
    const double dr = det().real();
    if (dr <= 0.0) throw NumericalError("cannot renormalise a real matrix with nonpositive determinant");
    s = Scalar(std::sqrt(dr), 0.0);
  }
  return GroupElement(field_, m_[0] / s, m_[1] / s, m_[2] / s, m_[3] / s, Raw{});
}

GroupElement operator*(const GroupElement& x, const GroupElement& y) {
  if (x.field_ != y.field_) throw std::invalid_argument("field mismatch in product");
  const auto& p = x.m_;
  const auto& q = y.m_;
  GroupElement r(x.field_, p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3], p[2] * q[0] + p[3] * q[2],
                 p[2] * q[1] + p[3] * q[3], GroupElement::Raw{});
  const auto& m = r.m_;
  if (!std::isfinite(std::abs(m[0]) + std::abs(m[1]) + std::abs(m[2]) + std::abs(m[3])))
    throw NumericalError("matrix product overflowed");
  if (std::abs(r.det() - 1.0) > default_tolerance().det * det_scale(m[0], m[1], m[2], m[3]))
    throw NumericalError("determinant drifted from 1 in product");
  return r;
}

double frobenius_norm2(const GroupElement& g) {
  return std::norm(g.a()) + std::norm(g.b()) + std::norm(g.c()) + std::norm(g.d());
}

namespace {

double spectral_norm(Scalar a, Scalar b, Scalar c, Scalar d) {
  const double f = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
  const double det = std::abs(a * d - b * c);
  const double disc = std::max(0.0, f * f - 4.0 * det * det);
  return std::sqrt(std::max(0.0, 0.5 * (f + std::sqrt(disc))));
}

}  // namespace

double operator_norm(const GroupElement& g) { return spectral_norm(g.a(), g.b(), g.c(), g.d()); }

double operator_distance(const GroupElement& x, const GroupElement& y) {
  return spectral_norm(x.a() - y.a(), x.b() - y.b(), x.c() - y.c(), x.d() - y.d());
}

double distance_from_center(const GroupElement& g) {
  const double minus = spectral_norm(g.a() - 1.0, g.b(), g.c(), g.d() - 1.0);
  const double plus = spectral_norm(g.a() + 1.0, g.b(), g.c(), g.d() + 1.0);
  return std::min(minus, plus);
}

std::string to_string(IsometryKind k) {
  switch (k) {
    case IsometryKind::Identity: return "identity";
    case IsometryKind::Elliptic: return "elliptic";
    case IsometryKind::Parabolic: return "parabolic";
    case IsometryKind::Hyperbolic: return "hyperbolic";
    case IsometryKind::Loxodromic: return "loxodromic";
  }
  return "?";
}

IsometryType classify(const GroupElement& g, const Tolerance& tol) {
  const Scalar t = g.trace();
  if (distance_from_center(g) <= tol.parabolic) return {IsometryKind::Identity, t};
  if (g.field() == Field::SU2) return {IsometryKind::Elliptic, t};
  if (g.field() == Field::Real) {
    const double at = std::abs(t.real());
    if (at < 2.0 - tol.parabolic) return {IsometryKind::Elliptic, t};
    if (std::abs(at - 2.0) <= tol.parabolic) return {IsometryKind::Parabolic, t};
    return {IsometryKind::Hyperbolic, t};
  }
  if (std::abs(t - 2.0) <= tol.parabolic || std::abs(t + 2.0) <= tol.parabolic) return {IsometryKind::Parabolic, t};
  if (std::abs(t.imag()) <= tol.parabolic && std::abs(t.real()) < 2.0) return {IsometryKind::Elliptic, t};
  return {IsometryKind::Loxodromic, t};
}

double translation_length_from_trace(double abs_trace) {
  if (!(abs_trace > 2.0)) return 0.0;
  if (abs_trace > 1e150) return 2.0 * std::log(abs_trace);
  return 2.0 * std::acosh(abs_trace / 2.0);
}

double translation_length(const GroupElement& g, const Tolerance& tol) {
  const auto kind = classify(g, tol).kind;
  if (kind != IsometryKind::Hyperbolic && kind != IsometryKind::Loxodromic) return 0.0;
  const Scalar t = g.trace();
  if (std::abs(t) > 1e150) return 2.0 * std::log(std::abs(t));
  const Scalar s = std::sqrt(t * t - 4.0);
  const Scalar lambda = std::abs(t + s) >= std::abs(t - s) ? (t + s) / 2.0 : (t - s) / 2.0;
  return 2.0 * std::log(std::abs(lambda));
}

double translation_length_arccosh(const GroupElement& g) {
  return 2.0 * std::abs(std::acosh(g.trace() / 2.0).real());
}

double rotation_angle(const GroupElement& g, const Tolerance& tol) {
  if (classify(g, tol).kind != IsometryKind::Elliptic) throw std::invalid_argument("rotation_angle needs an elliptic element");
  const Scalar t = g.trace();
  if (g.field() == Field::Complex) {
    const Scalar s = std::sqrt(t * t - 4.0);
    return std::abs(std::arg((t + s) / 2.0));
  }
  return std::acos(std::clamp(t.real() / 2.0, -1.0, 1.0));
}

namespace {

using Mat2 = std::array<Scalar, 4>;

Mat2 conjugate_by(const GroupElement& g, const Mat2& v) {
  const GroupElement gi = g.inverse();
  // g v g^-1 with raw complex arithmetic (v is not in the group).
  const Scalar a = g.a(), b = g.b(), c = g.c(), d = g.d();
  const Mat2 gv{a * v[0] + b * v[2], a * v[1] + b * v[3], c * v[0] + d * v[2], c * v[1] + d * v[3]};
  const Scalar p = gi.a(), q = gi.b(), r = gi.c(), s = gi.d();
  return {gv[0] * p + gv[1] * r, gv[0] * q + gv[1] * s, gv[2] * p + gv[3] * r, gv[2] * q + gv[3] * s};
}

Eigen::MatrixXd real_ad_columns(std::span<const GroupElement> elements) {
  if (elements.empty()) throw std::invalid_argument("empty element list");
  const bool complex = elements.front().field() == Field::Complex;
  const int dim = complex ? 18 : 9;
  Eigen::MatrixXd m(dim, static_cast<Eigen::Index>(elements.size()));
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const AdMatrix ad = adjoint(elements[k]);
    for (int i = 0; i < 9; ++i) {
      const Scalar x = ad(i / 3, i % 3);
      m(i, static_cast<Eigen::Index>(k)) = x.real();
      if (complex) m(9 + i, static_cast<Eigen::Index>(k)) = x.imag();
    }
  }
  return m;
}

template <class M>
int numerical_rank(const M& m, double relative) {
  Eigen::JacobiSVD<M> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > relative * sv(0)) ++r;
  return r;
}

}  // namespace

AdMatrix adjoint(const GroupElement& g) {
  AdMatrix ad;
  const Scalar I(0.0, 1.0);
  if (g.field() == Field::SU2) {
    const std::array<Mat2, 3> basis{Mat2{I, 0.0, 0.0, -I}, Mat2{0.0, 1.0, -1.0, 0.0}, Mat2{0.0, I, I, 0.0}};
    for (int k = 0; k < 3; ++k) {
      const Mat2 m = conjugate_by(g, basis[static_cast<std::size_t>(k)]);
      ad(0, k) = m[0].imag();
      ad(1, k) = m[1].real();
      ad(2, k) = m[1].imag();
    }
    return ad;
  }
  const std::array<Mat2, 3> basis{Mat2{1.0, 0.0, 0.0, -1.0}, Mat2{0.0, 1.0, 0.0, 0.0}, Mat2{0.0, 0.0, 1.0, 0.0}};
  for (int k = 0; k < 3; ++k) {
    const Mat2 m = conjugate_by(g, basis[static_cast<std::size_t>(k)]);
    ad(0, k) = m[0];
    ad(1, k) = m[1];
    ad(2, k) = m[2];
  }
  return ad;
}

int ad_span_rank(std::span<const GroupElement> elements, const Tolerance& tol) {
  if (elements.empty()) throw std::invalid_argument("ad_span_rank needs a nonempty list");
  if (elements.front().field() != Field::Complex) return numerical_rank(real_ad_columns(elements), tol.rank_relative);
  Eigen::MatrixXcd m(9, static_cast<Eigen::Index>(elements.size()));
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const AdMatrix ad = adjoint(elements[k]);
    for (int i = 0; i < 9; ++i) m(i, static_cast<Eigen::Index>(k)) = ad(i / 3, i % 3);
  }
  return numerical_rank(m, tol.rank_relative);
}

int ad_real_span_rank(std::span<const GroupElement> elements, const Tolerance& tol) {
  return numerical_rank(real_ad_columns(elements), tol.rank_relative);
}

int full_ad_real_rank(Field f) { return f == Field::Complex ? 18 : 9; }

GroupElement lie_exp(Field f, const std::array<Scalar, 3>& coords) {
  const Scalar I(0.0, 1.0);
  Scalar a, b, c;
  if (f == Field::SU2) {
    const double x = coords[0].real(), y = coords[1].real(), z = coords[2].real();
    a = I * x;
    b = Scalar(y, z);
    c = Scalar(-y, z);
  } else {
    a = coords[0];
    b = coords[1];
    c = coords[2];
    if (f == Field::Real) a = a.real(), b = b.real(), c = c.real();
  }
  // X^2 = s^2 I with s^2 = a^2 + b c, so exp X = cosh s I + (sinh s / s) X.
  const Scalar s = std::sqrt(a * a + b * c);
  const Scalar ch = std::cosh(s);
  const Scalar sh = std::abs(s) < 1e-8 ? Scalar(1.0) + s * s / 6.0 : std::sinh(s) / s;
  Scalar m00 = ch + sh * a, m01 = sh * b, m10 = sh * c, m11 = ch - sh * a;
  if (f == Field::Real) m00 = m00.real(), m01 = m01.real(), m10 = m10.real(), m11 = m11.real();
  if (f == Field::SU2) return GroupElement::su2(m00, m01);
  return GroupElement(f, m00, m01, m10, m11).renormalized();
}

GroupElement random_element(Field f, std::mt19937_64& rng, double spread) {
  std::normal_distribution<double> normal(0.0, 1.0);
  if (f == Field::SU2) {
    const double w = normal(rng), x = normal(rng), y = normal(rng), z = normal(rng);
    return GroupElement::su2(Scalar(w, x), Scalar(y, z));
  }
  std::array<Scalar, 3> coords;
  for (auto& v : coords) {
    const double re = spread * normal(rng);
    v = f == Field::Complex ? Scalar(re, spread * normal(rng)) : Scalar(re);
  }
  return lie_exp(f, coords);
}

GroupElement random_near_identity(Field f, std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<Scalar, 3> coords;
  double norm2 = 0.0;
  for (auto& v : coords) {
    v = f == Field::Complex ? Scalar(normal(rng), normal(rng)) : Scalar(normal(rng));
    norm2 += std::norm(v);
  }
  const double scale = radius / std::sqrt(std::max(norm2, 1e-300));
  for (auto& v : coords) v *= scale;
  return lie_exp(f, coords);
}

AdSpan::AdSpan(Field field, const Tolerance& tol) : field_(field), tol_(tol) {}

bool AdSpan::add(const GroupElement& g) {
  if (full()) return false;
  const GroupElement one[] = {g};
  Eigen::VectorXd v = real_ad_columns(one).col(0);
  const double norm = v.norm();
  scale_ = std::max(scale_, norm);
  // Two Gram-Schmidt passes keep the basis orthonormal to working precision.
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& e : basis_) v -= e.dot(v) * e;
  // The search accepts only clearly independent directions so that replaying
  // the chosen words through the SVD rank reproduces full rank.
  if (v.norm() <= 100.0 * tol_.rank_relative * scale_) return false;
  basis_.push_back(v / v.norm());
  return true;
}

Representation::Representation(std::vector<GroupElement> images) : images_(std::move(images)) {
  if (images_.empty()) throw std::invalid_argument("representation needs at least one image");
  field_ = images_.front().field();
  for (const auto& g : images_)
    if (g.field() != field_) throw std::invalid_argument("representation images have mixed fields");
}

bool Representation::is_integral() const {
  return std::all_of(images_.begin(), images_.end(), [](const GroupElement& g) { return g.is_integral(); });
}

GroupElement evaluate(std::span<const GroupElement> generators, const Word& w) {
  if (static_cast<std::size_t>(w.rank()) != generators.size()) throw std::invalid_argument("rank mismatch in evaluate");
  GroupElement out = GroupElement::identity(generators.front().field());
  for (Letter l : w.letters()) {
    const GroupElement& g = generators[static_cast<std::size_t>(l.generator() - 1)];
    out = out * (l.inverted() ? g.inverse() : g);
  }
  return out;
}

GroupElement evaluate(const Representation& rep, const Word& w) { return evaluate(std::span(rep.images()), w); }

Representation act(const FreeAutomorphism& a, const Representation& rep) {
  if (a.rank() != rep.rank()) throw std::invalid_argument("rank mismatch in act");
  std::vector<GroupElement> images;
  images.reserve(static_cast<std::size_t>(rep.rank()));
  for (const auto& w : a.inverse_images()) images.push_back(evaluate(rep, w));
  return Representation(std::move(images));
}

H3Point H3Point::make(Scalar z, double height) {
  if (!(height > 0.0)) throw std::invalid_argument("H3 point needs positive height");
  return {z, height};
}

double h3_distance(const H3Point& p, const H3Point& q) {
  if (!(p.height > 0.0) || !(q.height > 0.0)) throw std::invalid_argument("H3 point needs positive height");
  const double dt = p.height - q.height;
  const double num = std::norm(p.z - q.z) + dt * dt;
  return 2.0 * std::asinh(std::sqrt(num) / (2.0 * std::sqrt(p.height * q.height)));
}

H3Point mobius_act(const GroupElement& g, const H3Point& p) {
  if (!(p.height > 0.0)) throw std::invalid_argument("H3 point needs positive height");
  const Scalar a = g.a(), b = g.b(), c = g.c(), d = g.d();
  const double t2 = p.height * p.height;
  const Scalar cz_d = c * p.z + d;
  const double denom = std::norm(cz_d) + std::norm(c) * t2;
  const Scalar z = ((a * p.z + b) * std::conj(cz_d) + a * std::conj(c) * t2) / denom;
  return H3Point::make(z, p.height / denom);
}

double basepoint_displacement(const GroupElement& g) {
  const double n = frobenius_norm2(g);
  if (!std::isfinite(n)) return std::numeric_limits<double>::infinity();
  return 2.0 * std::asinh(std::sqrt(std::max(0.0, n - 2.0) / 4.0));
}

}  // namespace redrep
