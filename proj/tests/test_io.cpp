#include <doctest.h>

#include <cmath>
#include <sstream>

#include "redrep/io.hpp"
#include "support.hpp"

using namespace redrep;

namespace {

bool same_bits(const GroupElement& x, const GroupElement& y) {
  if (x.field() != y.field()) return false;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (x.entry(r, c) != y.entry(r, c)) return false;
  return true;
}

GroupElement rotation(double t) { return GroupElement::real(std::cos(t), -std::sin(t), std::sin(t), std::cos(t)); }

Json reparse(const Json& j) { return Json::parse(j.dump()); }

}  // namespace

TEST_SUITE("io") {

TEST_CASE("manifest round-trip") {
  auto m = make_manifest("walk", {{"--steps", "100"}, {"--group", "su2"}}, 42);
  CHECK(m.versions.count("redrep") == 1);
  CHECK(!m.started.empty());
  m.finished = utc_timestamp();
  const auto back = manifest_from_json(reparse(to_json(m)));
  CHECK(back.subcommand == "walk");
  CHECK(back.flags == m.flags);
  CHECK(back.seed == 42);
  CHECK(back.versions == m.versions);
  CHECK(back.started == m.started);
  CHECK(back.finished == m.finished);
  CHECK(library_version() == "1.0.0");
}

TEST_CASE("group elements and representations round-trip bit for bit") {
  std::mt19937_64 rng(1);
  for (Field f : {Field::Real, Field::Complex, Field::SU2})
    for (int trial = 0; trial < 50; ++trial) {
      const auto g = random_element(f, rng);
      CHECK(same_bits(element_from_json(reparse(to_json(g)), f), g));
    }
  const Representation rep({random_element(Field::Complex, rng), random_element(Field::Complex, rng)});
  const auto back = representation_from_json(reparse(to_json(rep)));
  REQUIRE(back.rank() == 2);
  CHECK(back.field() == Field::Complex);
  for (int i = 1; i <= 2; ++i) CHECK(same_bits(back.image(i), rep.image(i)));
  CHECK(to_json(GroupElement::real(1, 2, 0, 1)).contains("re"));
  CHECK_FALSE(to_json(GroupElement::real(1, 2, 0, 1)).contains("im"));
}

TEST_CASE("malformed representation JSON is rejected") {
  CHECK_THROWS(representation_from_json(Json::parse(R"({"field":"real","rank":2,"images":[]})")));
  CHECK_THROWS(representation_from_json(Json::parse(R"({"field":"real","rank":1,"images":[{"re":[[1,1],[1,1]]}]})")));
  CHECK_THROWS(representation_from_json(Json::parse(R"({"field":"octonion","rank":1,"images":[]})")));
}

TEST_CASE("automorphisms and Whitehead moves round-trip") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testing::random_automorphism(3, 5, rng);
    CHECK(automorphism_from_json(reparse(to_json(a))) == a);
  }
  for (const auto& m : whitehead_moves(2)) {
    const auto back = move_from_json(reparse(to_json(m)));
    CHECK(back.automorphism() == m.automorphism());
    CHECK(back.describe() == m.describe());
  }
}

TEST_CASE("primitivity verdicts round-trip and still verify") {
  for (const char* s : {"x1 x2 x1 x2 x2 x3", "x1 x1 x2 x2", "x1 x2 x3 x2 x1^-1"}) {
    const auto v = decide_primitive(parse_word(s, 3));
    const auto back = primitivity_from_json(reparse(to_json(v)));
    CHECK(back.status == v.status);
    CHECK(back.input_core == v.input_core);
    CHECK(back.terminal == v.terminal);
    CHECK(back.chain.size() == v.chain.size());
    CHECK(verify_primitivity_certificate(back));
  }
}

TEST_CASE("density certificates replay after a JSON round-trip") {
  SearchBudget b;
  b.max_word_length = 8;
  b.max_candidates = 4000;
  const std::vector<GroupElement> s{rotation(1.0), GroupElement::real(2, 1, 1, 1)};
  const auto v = certify_dense(s, b);
  REQUIRE(v.dense());
  const auto cert = certificate_from_json(reparse(to_json(*v.certificate)));
  CHECK(replay(cert).ok);
  CHECK(cert.spanning_words == v.certificate->spanning_words);
  CHECK(cert.witness.angle == v.certificate->witness.angle);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(same_bits(cert.generators[i], s[i]));

  const auto back = verdict_from_json(reparse(to_json(v)));
  CHECK(back.kind == DensityVerdict::Kind::Dense);
  REQUIRE(back.certificate.has_value());
  CHECK(replay(*back.certificate).ok);

  const auto no = certify_dense(std::vector<GroupElement>{GroupElement::identity(Field::Real)}, b);
  const auto no_back = verdict_from_json(reparse(to_json(no)));
  CHECK(no_back.kind == DensityVerdict::Kind::LikelyNotDense);
  CHECK(no_back.reason == Obstruction::Elementary);
  CHECK_FALSE(no_back.certificate.has_value());
}

TEST_CASE("steer results round-trip and replay") {
  std::mt19937_64 rng(3);
  std::vector<GroupElement> p, q;
  for (int i = 0; i < 3; ++i) {
    p.push_back(random_element(Field::SU2, rng));
    q.push_back(random_element(Field::SU2, rng));
  }
  SearchBudget b;
  b.max_word_length = 20;
  b.max_candidates = 200000;
  const Representation phi(p), psi(q);
  const auto r = steer(phi, psi, 0.15, b);
  const auto back = steer_result_from_json(reparse(to_json(r)));
  CHECK(back.automorphism == r.automorphism);
  CHECK(back.distances == r.distances);
  CHECK(back.success == r.success);
  REQUIRE(back.stages.size() == r.stages.size());
  for (std::size_t i = 0; i < r.stages.size(); ++i) CHECK(back.stages[i].word == r.stages[i].word);
  CHECK(coordinate_distances(act(back.automorphism, phi), psi) == r.distances);
}

TEST_CASE("PS2 summary and CSV round-trip") {
  const auto p = build_fuchsian_4punctured();
  PS2Options o;
  o.max_length = 5;
  const auto r = ps2_probe(p.rep, p.rep, o);
  const auto s = ps2_summary_from_json(reparse(to_json(r)));
  CHECK(s.options.max_length == 5);
  CHECK(s.options.k == o.k);
  CHECK(s.exact == r.exact);
  CHECK(s.min_max_ratio == r.min_max_ratio);
  CHECK(s.argmin == r.argmin);
  CHECK(s.zero_ratio[0] == r.zero_ratio[0]);

  std::stringstream csv;
  write_ps2_csv(csv, r);
  CHECK(csv.str().rfind("class,length,ell1,ell2,ratio1,ratio2,max_ratio,axis1,axis2,best_k1,best_k2\n", 0) == 0);
  const auto rows = read_ps2_csv(csv, 3);
  REQUIRE(rows.size() == r.records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].cls == r.records[i].cls);
    CHECK(rows[i].length == r.records[i].length);
    for (int k = 0; k < 2; ++k) {
      CHECK(rows[i].ell[k] == r.records[i].ell[k]);
      CHECK(rows[i].ratio[k] == r.records[i].ratio[k]);
      CHECK(rows[i].axis_pass[k] == r.records[i].axis_pass[k]);
      CHECK(rows[i].best_k[k] == r.records[i].best_k[k]);
    }
  }
}

TEST_CASE("walk CSV round-trip") {
  std::mt19937_64 rng(4);
  for (Field f : {Field::SU2, Field::Complex}) {
    const Representation rep({random_element(f, rng, 0.5), random_element(f, rng, 0.5)});
    WalkConfig c;
    c.steps = 200;
    c.stride = 10;
    const auto w = random_walk(rep, c);
    std::stringstream csv;
    write_walk_csv(csv, w, f);
    const auto back = read_walk_csv(csv);
    REQUIRE(back.samples.size() == w.samples.size());
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
      CHECK(back.samples[i].step == w.samples[i].step);
      CHECK(back.samples[i].excursion == w.samples[i].excursion);
      for (std::size_t k = 0; k < w.samples[i].traces.size(); ++k) {
        CHECK(back.samples[i].traces[k].real() == w.samples[i].traces[k].real());
        if (f == Field::Complex) CHECK(back.samples[i].traces[k].imag() == w.samples[i].traces[k].imag());
      }
    }
  }
}

}  // TEST_SUITE
