#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/SVD>

#include "redrep/density.hpp"
#include "support.hpp"

using namespace redrep;

namespace {

GroupElement rotation(double t) { return GroupElement::real(std::cos(t), -std::sin(t), std::sin(t), std::cos(t)); }

std::vector<GroupElement> dense_pair() { return {rotation(1.0), GroupElement::real(2, 1, 1, 1)}; }
std::vector<GroupElement> discrete_pair() { return {GroupElement::real(1, 2, 0, 1), GroupElement::real(1, 0, 2, 1)}; }

SearchBudget small_budget(std::uint64_t seed = 1) {
  SearchBudget b;
  b.max_word_length = 8;
  b.max_candidates = 4000;
  b.time_cap = std::chrono::milliseconds(20000);
  b.seed = seed;
  return b;
}

// Real rank of the maps v -> g v g^-1 on the trace-zero matrices H, E, F,
// assembled directly from matrix products.
int conjugation_rank_oracle(const std::vector<GroupElement>& values) {
  Eigen::Matrix2cd basis[3];
  basis[0] << 1, 0, 0, -1;
  basis[1] << 0, 1, 0, 0;
  basis[2] << 0, 0, 1, 0;
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(values.size()), 24);
  for (std::size_t r = 0; r < values.size(); ++r) {
    Eigen::Matrix2cd g, gi;
    const auto& x = values[r];
    g << x.a(), x.b(), x.c(), x.d();
    gi << x.d(), -x.b(), -x.c(), x.a();
    int col = 0;
    for (const auto& unit : basis) {
      const Eigen::Matrix2cd img = g * unit * gi;
      for (int k = 0; k < 4; ++k) {
        rows(static_cast<Eigen::Index>(r), col++) = img(k / 2, k % 2).real();
        rows(static_cast<Eigen::Index>(r), col++) = img(k / 2, k % 2).imag();
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  const auto s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-8 * s(0)) ++rank;
  return rank;
}

void check_certificate(const DensityVerdict& v) {
  REQUIRE(v.dense());
  REQUIRE(v.certificate.has_value());
  const auto rep = replay(*v.certificate);
  CHECK(rep.ok);
  CHECK(rep.rank == full_ad_real_rank(v.certificate->field()));
  CHECK(v.certificate->measured_rank == rep.rank);
}

}  // namespace

TEST_SUITE("density") {

TEST_CASE("budget validation and errors") {
  SearchBudget b;
  CHECK_NOTHROW(b.validate());
  b.max_word_length = 0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  CHECK_THROWS_AS(certify_dense(std::vector<GroupElement>{}, small_budget()), std::invalid_argument);
  const std::vector<GroupElement> mixed{GroupElement::identity(Field::Real), GroupElement::identity(Field::SU2)};
  CHECK_THROWS_AS(certify_dense(mixed, small_budget()), std::invalid_argument);
}

TEST_CASE("certify_dense examples") {
  const auto id = certify_dense(std::vector<GroupElement>{GroupElement::identity(Field::Real)}, small_budget());
  CHECK(id.kind == DensityVerdict::Kind::LikelyNotDense);
  CHECK(id.reason == Obstruction::Elementary);

  const auto dense = certify_dense(dense_pair(), small_budget());
  check_certificate(dense);

  const auto discrete = certify_dense(discrete_pair(), small_budget());
  CHECK_FALSE(discrete.dense());
  CHECK_FALSE(discrete.certificate.has_value());
}

TEST_CASE("the discrete pair is never certified across seeds") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SearchBudget b = small_budget(seed);
    b.max_word_length = 4 + static_cast<int>(seed % 6);
    b.max_candidates = 500 * seed;
    CHECK_FALSE(certify_dense(discrete_pair(), b).dense());
  }
}

TEST_CASE("dense certificates replay and match an independent rank computation") {
  std::mt19937_64 rng(4);
  std::vector<std::vector<GroupElement>> inputs{dense_pair()};
  // Generic large loxodromic pairs are usually Schottky; pair one with an
  // irrational elliptic instead.
  const GroupElement elliptic(Field::Complex, std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0));
  inputs.push_back({elliptic, random_element(Field::Complex, rng)});
  inputs.push_back({random_element(Field::SU2, rng), random_element(Field::SU2, rng)});
  for (const auto& s : inputs) {
    const auto v = certify_dense(s, small_budget());
    check_certificate(v);
    std::vector<GroupElement> values;
    for (const auto& w : v.certificate->spanning_words) values.push_back(evaluate(s, w));
    CHECK(conjugation_rank_oracle(values) == full_ad_real_rank(s.front().field()));
  }
}

TEST_CASE("su2 certificates use an elliptic witness") {
  std::mt19937_64 rng(9);
  const std::vector<GroupElement> s{random_element(Field::SU2, rng), random_element(Field::SU2, rng)};
  const auto v = certify_dense(s, small_budget());
  REQUIRE(v.dense());
  CHECK(v.certificate->witness.kind == NondiscretenessWitness::Kind::IrrationalElliptic);
  auto bad = *v.certificate;
  bad.witness.kind = NondiscretenessWitness::Kind::SmallNoncommuting;
  CHECK_FALSE(replay(bad).ok);
}

TEST_CASE("tampered certificates fail replay") {
  const auto v = certify_dense(dense_pair(), small_budget());
  REQUIRE(v.dense());
  auto fewer = *v.certificate;
  fewer.spanning_words.erase(fewer.spanning_words.begin() + 2, fewer.spanning_words.end());
  CHECK_FALSE(replay(fewer).ok);

  auto other = *v.certificate;
  other.generators = discrete_pair();
  CHECK_FALSE(replay(other).ok);

  auto rational = *v.certificate;
  rational.generators[0] = rotation(std::numbers::pi / 3);
  rational.witness.word = parse_word("x1", 2);
  rational.witness.kind = NondiscretenessWitness::Kind::IrrationalElliptic;
  CHECK_FALSE(replay(rational).ok);

  auto empty = *v.certificate;
  empty.spanning_words.clear();
  CHECK_FALSE(replay(empty).ok);
}

TEST_CASE("monotonicity: adding a generator keeps a dense verdict") {
  std::mt19937_64 rng(12);
  const auto base = dense_pair();
  for (int trial = 0; trial < 3; ++trial) {
    auto s = base;
    s.push_back(random_element(Field::Real, rng));
    check_certificate(certify_dense(s, small_budget(static_cast<std::uint64_t>(trial + 1))));
  }
  // The old certificate carries over once its words are lifted to the larger rank.
  const auto v = certify_dense(base, small_budget());
  REQUIRE(v.dense());
  DensityCertificate lifted = *v.certificate;
  lifted.generators.push_back(GroupElement::real(3, 1, 2, 1));
  auto lift = [](const Word& w) {
    std::vector<Letter> l(w.letters().begin(), w.letters().end());
    return reduce(3, l);
  };
  for (auto& w : lifted.spanning_words) w = lift(w);
  lifted.witness.word = lift(lifted.witness.word);
  lifted.witness.companion = lift(lifted.witness.companion);
  CHECK(replay(lifted).ok);
}

TEST_CASE("conjugation equivariance") {
  std::mt19937_64 rng(14);
  const auto base = dense_pair();
  const auto v = certify_dense(base, small_budget());
  REQUIRE(v.dense());
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = random_element(Field::Real, rng, 0.4);
    std::vector<GroupElement> conj;
    for (const auto& g : base) conj.push_back(h * g * h.inverse());
    const auto w = certify_dense(conj, small_budget());
    CHECK(w.kind == v.kind);
    DensityCertificate moved = *v.certificate;
    moved.generators = conj;
    CHECK(replay(moved).ok);
  }
  std::vector<GroupElement> disc;
  const auto h = GroupElement::real(2, 1, 1, 1);
  for (const auto& g : discrete_pair()) disc.push_back(h * g * h.inverse());
  CHECK_FALSE(certify_dense(disc, small_budget()).dense());
}

TEST_CASE("elementary detection") {
  const auto hyp = GroupElement::real(2, 1, 1, 1);
  const std::vector<GroupElement> powers{hyp, hyp * hyp};
  CHECK(pairwise_commuting(powers));
  const std::vector<GroupElement> upper{GroupElement::real(1, 1, 0, 1), GroupElement::real(2, 5, 0, 0.5)};
  CHECK(shares_fixed_point(upper));
  CHECK_FALSE(shares_fixed_point(dense_pair()));
  const auto v = certify_dense(upper, small_budget());
  CHECK(v.kind == DensityVerdict::Kind::LikelyNotDense);
  CHECK(v.reason == Obstruction::Elementary);
}

TEST_CASE("omega_member examples") {
  const auto a = omega_member(dense_pair(), GroupElement::identity(Field::Real), small_budget());
  check_certificate(a);
  const auto hyp = GroupElement::real(2, 1, 1, 1);
  const auto b = omega_member(std::vector<GroupElement>{hyp}, hyp * hyp * hyp, small_budget());
  CHECK(b.kind == DensityVerdict::Kind::LikelyNotDense);
  CHECK(b.reason == Obstruction::Elementary);
  const auto c = omega_member(std::vector<GroupElement>{rotation(1.0)}, hyp, small_budget());
  check_certificate(c);
}

TEST_CASE("omega_tilde_search") {
  const auto pair = dense_pair();
  const Representation padded({pair[0], pair[1], GroupElement::identity(Field::Real)});
  const auto r = omega_tilde_search(padded, small_budget());
  REQUIRE(r.witness.has_value());
  REQUIRE(r.verdicts.size() == 3);
  for (int i = 1; i <= 3; ++i) {
    std::vector<GroupElement> sub;
    for (int j = 1; j <= 3; ++j)
      if (j != i) sub.push_back(padded.image(j));
    sub.push_back(*r.witness);
    const auto& cert = *r.verdicts[static_cast<std::size_t>(i - 1)].certificate;
    CHECK(replay(cert).ok);
    for (std::size_t k = 0; k < sub.size(); ++k) CHECK(testing::max_entry_difference(cert.generators[k], sub[k]) == 0.0);
  }

  const Representation upper({GroupElement::real(1, 1, 0, 1), GroupElement::real(2, 5, 0, 0.5), GroupElement::real(1, -3, 0, 1)});
  const auto blocked = omega_tilde_search(upper, small_budget());
  CHECK(blocked.obstruction);
  CHECK_FALSE(blocked.budget_exhausted);
  CHECK_FALSE(blocked.witness.has_value());

  CHECK_THROWS_AS(omega_tilde_search(Representation(pair), small_budget()), std::invalid_argument);
}

TEST_CASE("strongly_redundant") {
  std::mt19937_64 rng(21);
  const Representation su2({random_element(Field::SU2, rng), random_element(Field::SU2, rng), random_element(Field::SU2, rng)});
  const auto s = strongly_redundant(su2, small_budget());
  CHECK(s.strongly_redundant);
  REQUIRE(s.subtuples.size() == 3);
  for (const auto& v : s.subtuples) check_certificate(v);

  const auto pair = dense_pair();
  const Representation padded({pair[0], pair[1], GroupElement::identity(Field::Real)});
  const auto p = strongly_redundant(padded, small_budget());
  CHECK_FALSE(p.strongly_redundant);
  CHECK(p.subtuples[2].dense());
  CHECK_FALSE(p.subtuples[0].dense());
  CHECK_FALSE(p.subtuples[1].dense());

  // Built from the Omega-tilde witness, the triple is strongly redundant.
  const auto r = omega_tilde_search(padded, small_budget());
  REQUIRE(r.witness.has_value());
  const Representation built({pair[0], pair[1], *r.witness});
  CHECK(strongly_redundant(built, small_budget()).strongly_redundant);

  const auto g = rotation(1.0);
  const auto same = strongly_redundant(Representation({g, g, g}), small_budget());
  CHECK_FALSE(same.strongly_redundant);
  CHECK_THROWS_AS(strongly_redundant(Representation(pair), small_budget()), std::invalid_argument);
}

TEST_CASE("redundant_heuristic") {
  std::mt19937_64 rng(22);
  const Representation su2({random_element(Field::SU2, rng), random_element(Field::SU2, rng), random_element(Field::SU2, rng)});
  const auto sr = redundant_heuristic(su2, small_budget());
  CHECK(sr.redundant);
  REQUIRE(sr.basis.has_value());
  CHECK(sr.basis->is_identity());

  const auto pair = dense_pair();
  const Representation ggh({pair[0], pair[0], pair[1]});
  const auto v = redundant_heuristic(ggh, small_budget());
  REQUIRE(v.redundant);
  REQUIRE(v.certificate.has_value());
  // Replay against the subtuple of the moved representation.
  const auto moved = act(*v.basis, ggh);
  std::vector<GroupElement> sub;
  for (int i = 1; i <= 3; ++i)
    if (i != v.dropped) sub.push_back(moved.image(i));
  DensityCertificate cert = *v.certificate;
  for (std::size_t k = 0; k < sub.size(); ++k) CHECK(testing::max_entry_difference(cert.generators[k], sub[k]) == 0.0);
  CHECK(replay(cert).ok);

  // Following x2 -> x2 x1^-1 the duplicate becomes the identity.
  const auto t = FreeAutomorphism::right_transvection(3, 2, parse_word("x1^-1", 3));
  const auto kill = act(t.inverse(), ggh);
  CHECK(distance_from_center(kill.image(2)) < 1e-12);

  const auto none = redundant_heuristic(Representation(discrete_pair()), small_budget());
  CHECK_FALSE(none.redundant);
  CHECK_THROWS_AS(redundant_heuristic(Representation({rotation(1.0)}), small_budget()), std::invalid_argument);
}

TEST_CASE("links") {
  std::mt19937_64 rng(23);
  const Representation phi({random_element(Field::SU2, rng), random_element(Field::SU2, rng), random_element(Field::SU2, rng)});
  const auto self = links(phi, phi, small_budget());
  CHECK(self.links);
  REQUIRE(self.stages.size() == 2);
  for (const auto& v : self.stages) check_certificate(v);

  const Representation ids({GroupElement::identity(Field::SU2), GroupElement::identity(Field::SU2), GroupElement::identity(Field::SU2)});
  const auto none = links(phi, ids, small_budget());
  CHECK_FALSE(none.links);
  REQUIRE(none.stages.size() == 2);
  // Stage 1 sees only psi coordinates; stage 2 mixes phi(x1) with psi(x3).
  CHECK_FALSE(none.stages[0].dense());
  CHECK_FALSE(none.stages[1].dense());
  const auto m = mixed_tuple(phi, ids, 2);
  REQUIRE(m.size() == 2);
  CHECK(testing::max_entry_difference(m[0], phi.image(1)) == 0.0);

  int linked = 0;
  for (int trial = 0; trial < 3; ++trial) {
    const Representation a({random_element(Field::SU2, rng), random_element(Field::SU2, rng), random_element(Field::SU2, rng)});
    const Representation b({random_element(Field::SU2, rng), random_element(Field::SU2, rng), random_element(Field::SU2, rng)});
    const auto r = links(a, b, small_budget());
    if (r.links) {
      ++linked;
      for (const auto& v : r.stages) CHECK(replay(*v.certificate).ok);
    }
  }
  CHECK(linked == 3);
  CHECK_THROWS_AS(links(phi, Representation(dense_pair()), small_budget()), std::invalid_argument);
}

}  // TEST_SUITE
