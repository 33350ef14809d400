// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Tolerances and budgets are fixed below; nothing is read from the command line.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "redrep/density.hpp"
#include "redrep/dynamics.hpp"
#include "redrep/exact.hpp"
#include "redrep/io.hpp"
#include "redrep/nonmixing.hpp"
#include "redrep/whitehead.hpp"
#include "support.hpp"

using namespace redrep;

namespace {

constexpr double kInvariantTol = 1e-8;
constexpr double kWalkOverflowGuard = 5.0;
constexpr double kWalkDriftGuard = 1e-10;
constexpr double kSteerEpsilon = 0.15;
constexpr double kKsAlpha = 0.01;
constexpr double kLengthTol = 1e-8;
constexpr double kIsometryTol = 1e-9;
constexpr double kMaxMinDecrease = 0.5;

SearchBudget steer_budget(std::uint64_t seed) {
  SearchBudget b;
  b.max_word_length = 20;
  b.max_candidates = 200000;
  b.seed = seed;
  return b;
}

GroupElement rotation(double t) { return GroupElement::real(std::cos(t), -std::sin(t), std::sin(t), std::cos(t)); }

Representation random_rep(Field f, int n, std::mt19937_64& rng, double spread = 1.0) {
  std::vector<GroupElement> images;
  for (int i = 0; i < n; ++i) images.push_back(random_element(f, rng, spread));
  return Representation(images);
}

// Plain integer 2x2 arithmetic, kept apart from the library's GMP matrices.
using M2 = std::array<long long, 4>;
M2 mul(const M2& x, const M2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}
M2 inv(const M2& x) { return {x[3], -x[1], -x[2], x[0]}; }
long long trace(const M2& x) { return x[0] + x[3]; }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

Outcome basic_lemma() {
  const auto f3 = basic_lemma_sweep(3, 12);
  const auto f4 = basic_lemma_sweep(4, 10);
  std::ostringstream s;
  s << "F3 L<=12 " << f3.classes << " classes, " << f3.violations.size() << " violations; F4 L<=10 " << f4.classes
    << " classes, " << f4.violations.size() << " violations";
  return {f3.classes > 0 && f4.classes > 0 && f3.violations.empty() && f4.violations.empty(), s.str()};
}

Outcome primitivity_oracle() {
  std::size_t words = 0, disagree = 0, gcd_fail = 0;
  for (int n : {2, 3}) {
    const auto classes = enumerate_primitive_classes(n, 6);
    const std::set<ConjClass> known(classes.begin(), classes.end());
    for (std::size_t len = 1; len <= 6; ++len)
      for (const Word& w : testing::all_reduced_words(n, len)) {
        ++words;
        const bool prim = decide_primitive(w).primitive();
        if (prim != (known.count(ConjClass::of(w)) == 1)) ++disagree;
        int g = 0;
        for (int e : w.exponent_sums()) g = std::gcd(g, e);
        if (prim && g != 1) ++gcd_fail;
      }
  }
  std::ostringstream s;
  s << words << " words in F2, F3; " << disagree << " disagreements with enumeration, " << gcd_fail
    << " primitive words with exponent gcd != 1";
  return {disagree == 0 && gcd_fail == 0, s.str()};
}

Outcome commutator_invariant() {
  // tr[a,b] by direct integer multiplication.
  const M2 a{1, 1, 0, 1}, b{1, 0, 1, 1};
  const long long base_ab = trace(mul(mul(a, b), mul(inv(a), inv(b))));
  const M2 p{1, 2, 0, 1}, q{1, 0, 2, 1};
  const long long base_pq = trace(mul(mul(p, q), mul(inv(p), inv(q))));

  WalkConfig cfg;
  cfg.steps = 10000;
  cfg.moves = MoveSet::Nielsen;
  cfg.overflow_guard = kWalkOverflowGuard;
  cfg.drift_guard = kWalkDriftGuard;
  auto worst_along = [&](const Representation& rep, std::uint64_t seed) {
    WalkConfig c = cfg;
    c.seed = seed;
    const Scalar base = commutator_trace(rep);
    const auto w = random_walk(rep, c);
    double worst = 0.0;
    for (const auto& s : w.samples) {
      const Scalar x = s.traces[0], y = s.traces[1], z = s.traces[2];
      worst = std::max(worst, std::abs(x * x + y * y + z * z - x * y * z - 2.0 - base));
    }
    return worst;
  };

  std::ostringstream s;
  bool ok = base_ab == 3 && base_pq == 18;
  s << "tr[A,B] = " << base_ab << " for [[1,1],[0,1]], [[1,0],[1,1]] and " << base_pq
    << " for [[1,2],[0,1]], [[1,0],[2,1]]";
  const Representation ab({GroupElement::real(1, 1, 0, 1), GroupElement::real(1, 0, 1, 1)});
  const Representation pq({GroupElement::real(1, 2, 0, 1), GroupElement::real(1, 0, 2, 1)});
  ok = ok && commutator_trace(ab).real() == 3.0 && commutator_trace(pq).real() == 18.0;
  const double worst_int = std::max(worst_along(ab, 1), worst_along(pq, 1));
  ok = ok && worst_int < kInvariantTol;
  s << "; integer pairs drift " << worst_int;

  std::mt19937_64 rng(2024);
  for (Field f : {Field::Real, Field::Complex, Field::SU2}) {
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep)
      worst = std::max(worst, worst_along(random_rep(f, 2, rng), static_cast<std::uint64_t>(rep + 1)));
    ok = ok && worst < kInvariantTol;
    s << "; " << to_string(f) << " max drift " << worst;
  }
  s << " (100 reps x 1e4 steps, tol " << kInvariantTol << ")";
  return {ok, s.str()};
}

Outcome density_soundness() {
  const std::vector<GroupElement> discrete{GroupElement::real(1, 2, 0, 1), GroupElement::real(1, 0, 2, 1)};
  const std::vector<GroupElement> dense{rotation(1.0), GroupElement::real(2, 1, 1, 1)};
  int false_dense = 0, missed = 0, replay_fail = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SearchBudget b;
    b.seed = seed;
    if (certify_dense(discrete, b).dense()) ++false_dense;
    const auto v = certify_dense(dense, b);
    if (!v.dense()) {
      ++missed;
      continue;
    }
    const auto back = certificate_from_json(Json::parse(to_json(*v.certificate).dump()));
    if (!replay(*v.certificate).ok || !replay(back).ok) ++replay_fail;
  }
  std::ostringstream s;
  s << "100 seeds: discrete pair Dense " << false_dense << "x; rotation+hyperbolic not Dense " << missed
    << "x; replay failures (direct or after JSON) " << replay_fail;
  return {false_dense == 0 && missed == 0 && replay_fail == 0, s.str()};
}

Outcome twisted_pipeline() {
  const auto p = build_fuchsian_4punctured();
  // Puncture traces of rho0 by plain integer products.
  std::vector<M2> x;
  for (int i = 1; i <= 3; ++i) {
    const auto& g = p.rep.image(i);
    x.push_back({std::lround(g.entry(0, 0).real()), std::lround(g.entry(0, 1).real()),
                 std::lround(g.entry(1, 0).real()), std::lround(g.entry(1, 1).real())});
  }
  const std::array<long long, 4> punct{trace(x[0]), trace(x[1]), trace(x[2]), trace(mul(mul(x[0], x[1]), x[2]))};
  bool ok = std::all_of(punct.begin(), punct.end(), [](long long t) { return t == 2; }) && punctures_parabolic(p);

  const Word g1 = default_g1(3), g2 = default_g2(3);
  const auto m1 = smallest_containing_m(1, g1, p.punctures);
  const auto m2 = smallest_containing_m(2, g2, p.punctures);
  if (!m1 || !m2) return {false, "no m passes puncture containment"};
  const int m = std::max(*m1, *m2);
  const auto t = twisted_pair(p, m, g1, g2);

  PS2Options o8;
  o8.max_length = 8;
  const auto r8 = ps2_probe(t.rho1, t.rho2, o8);
  PS2Options o12;
  o12.max_length = 12;
  const auto r12 = ps2_probe(t.rho1, t.rho2, o12);

  const bool a = r12.min_max_ratio > 0.0;
  bool b = !r12.zero_ratio[0].empty() && !r12.zero_ratio[1].empty();
  for (int slot = 0; slot < 2; ++slot) {
    const ExactRepresentation e(slot == 0 ? t.rho1 : t.rho2);
    for (const auto& z : r12.zero_ratio[slot]) b = b && abs(e.evaluate(z.canonical()).trace()) == 2;
  }
  const double decrease = r8.min_max_ratio > 0.0 ? (r8.min_max_ratio - r12.min_max_ratio) / r8.min_max_ratio : 1.0;
  const bool c = decrease < kMaxMinDecrease;
  ok = ok && a && b && c;

  std::ostringstream s;
  s << "rho0 puncture traces " << punct[0] << "," << punct[1] << "," << punct[2] << "," << punct[3] << "; m=" << m
    << "; L=12 " << r12.records.size() << " classes, (a) min max-ratio " << r12.min_max_ratio << " at ["
    << (r12.argmin ? to_string(r12.argmin->canonical()) : "") << "]; (b) zero-ratio classes rho1 "
    << r12.zero_ratio[0].size() << ", rho2 " << r12.zero_ratio[1].size() << "; (c) L=8 min " << r8.min_max_ratio
    << ", decrease " << 100.0 * decrease << "% (limit " << 100.0 * kMaxMinDecrease << "%)";
  return {ok, s.str()};
}

Outcome pair_graph() {
  const auto r = pair_graph_check(default_g1(3), default_g2(3));
  const auto u = graph_union(build_graph(default_g1(3)), build_graph(default_g2(3)));
  std::mt19937_64 rng(6);
  int found = 0, filter_pass = 0, primitive = 0;
  for (int trial = 0; trial < 1000000 && found < 20; ++trial) {
    const Word w = cyclic_reduce(testing::random_word(3, 8 + trial % 12, rng)).core;
    if (!build_graph(w).contains(u)) continue;
    ++found;
    if (basic_lemma_filter(w)) ++filter_pass;
    if (decide_primitive(w).primitive()) ++primitive;
  }
  std::ostringstream s;
  s << "pair_graph_check([x2,x3],[x1,x3]) = " << (r.ok ? "true" : "false") << "; " << found
    << " sampled words containing the union, " << filter_pass << " pass the Basic Lemma filter, " << primitive
    << " decided primitive";
  return {r.ok && found == 20 && filter_pass == 0 && primitive == 0, s.str()};
}

Outcome steering() {
  std::mt19937_64 rng(7);
  int qualified = 0, steered = 0, replay_ok = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto phi = random_rep(Field::SU2, 3, rng);
    const auto psi = random_rep(Field::SU2, 3, rng);
    const auto budget = steer_budget(static_cast<std::uint64_t>(trial + 1));
    if (strongly_redundant(phi, SearchBudget{}).strongly_redundant && certify_dense(psi.images(), SearchBudget{}).dense())
      ++qualified;
    const auto r = steer(phi, psi, kSteerEpsilon, budget);
    if (r.success) ++steered;
    const auto d = coordinate_distances(act(r.automorphism, phi), psi);
    const double m = *std::max_element(d.begin(), d.end());
    worst = std::max(worst, m);
    if (m <= kSteerEpsilon && d == r.distances) ++replay_ok;
  }
  const auto phi = random_rep(Field::SU2, 3, rng);
  const auto id = steer(phi, phi, kSteerEpsilon, steer_budget(1));
  const bool id_ok = id.success && id.automorphism.is_identity() &&
                     std::all_of(id.distances.begin(), id.distances.end(), [](double v) { return v == 0.0; });
  std::ostringstream s;
  s << "20 SU2 triples: strongly redundant with dense target " << qualified << ", steered " << steered
    << ", replay within eps " << replay_ok << ", worst distance " << worst << " (eps " << kSteerEpsilon
    << ", budget 20/200000); identity case " << (id_ok ? "ok" : "wrong");
  return {qualified == 20 && steered == 20 && replay_ok == 20 && id_ok, s.str()};
}

Outcome equidistribution() {
  std::mt19937_64 rng(8);
  const auto rep = random_rep(Field::SU2, 3, rng);
  WalkConfig c;
  c.steps = 100000;
  c.stride = 20;
  c.seed = 8;
  const auto w = random_walk(rep, c);
  double min_p = 1.0;
  for (std::size_t col = 0; col < w.columns.size(); ++col) {
    std::vector<double> xs;
    for (const auto& smp : w.samples) xs.push_back(smp.traces[col].real());
    min_p = std::min(min_p, ks_test(xs, haar_trace_cdf).p_value);
  }
  std::vector<double> baseline;
  for (const auto& h : rejection_sampled_haar(w.samples.size(), rng)) baseline.push_back(h.trace().real());
  const double base_p = ks_test(baseline, haar_trace_cdf).p_value;
  std::ostringstream s;
  s << "1e5 steps, " << w.samples.size() << " samples x " << w.columns.size() << " trace columns, min KS p "
    << min_p << "; rejection-sampled baseline p " << base_p << " (alpha " << kKsAlpha << ")";
  return {w.restarts == 0 && min_p > kKsAlpha && base_p > kKsAlpha, s.str()};
}

Outcome hyperbolic_numerics() {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  std::ostringstream s;
  bool ok = true;
  for (Field f : {Field::Real, Field::Complex, Field::SU2}) {
    double conj = 0, power = 0, cross = 0, iso = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const auto g = random_element(f, rng);
      const auto h = random_element(f, rng, 0.5);
      const double l = translation_length(g);
      conj = std::max(conj, std::abs(translation_length(h * g * h.inverse()) - l));
      GroupElement p = g;
      for (int k = 2; k <= 4; ++k) {
        p = p * g;
        power = std::max(power, std::abs(translation_length(p) - k * l));
      }
      cross = std::max(cross, std::abs(translation_length_arccosh(g) - l));
      const auto x = H3Point::make({nd(rng), nd(rng)}, std::exp(nd(rng)));
      const auto y = H3Point::make({nd(rng), nd(rng)}, std::exp(nd(rng)));
      iso = std::max(iso, std::abs(h3_distance(mobius_act(g, x), mobius_act(g, y)) - h3_distance(x, y)));
    }
    ok = ok && conj < kLengthTol && power < kLengthTol && cross < kLengthTol && iso < kIsometryTol;
    s << to_string(f) << " conj " << conj << " power " << power << " arccosh " << cross << " isometry " << iso << "; ";
  }
  s << "tol " << kLengthTol << " / " << kIsometryTol;
  return {ok, s.str()};
}

}  // namespace

int main() {
  run(1, "basic-lemma-sweep", basic_lemma);
  run(2, "primitivity-oracle", primitivity_oracle);
  run(3, "commutator-invariant", commutator_invariant);
  run(4, "density-soundness", density_soundness);
  run(5, "twisted-pair-ps2", twisted_pipeline);
  run(6, "pair-graph-lemma", pair_graph);
  run(7, "steering", steering);
  run(8, "su2-equidistribution", equidistribution);
  run(9, "hyperbolic-numerics", hyperbolic_numerics);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
