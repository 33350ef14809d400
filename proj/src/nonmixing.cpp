#include "redrep/nonmixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <omp.h>

#include "redrep/exact.hpp"

namespace redrep {

PuncturedSphereRep build_fuchsian_4punctured() {
  PuncturedSphereRep out{Representation({GroupElement::real(1, 2, 0, 1), GroupElement::real(1, 0, -4, 1),
                                         GroupElement::real(-3, 2, -8, 5)}),
                         {}};
  for (int i = 1; i <= 3; ++i) out.punctures.push_back(ConjClass::of(Word::generator(3, i)));
  out.punctures.push_back(ConjClass::of(parse_word("x1 x2 x3", 3)));
  return out;
}

bool punctures_parabolic(const PuncturedSphereRep& p) {
  const ExactRepresentation exact(p.rep);
  for (const auto& c : p.punctures)
    if (abs(exact.evaluate(c.canonical()).trace()) != 2) return false;
  return true;
}

int distinguished_generator(int variant) {
  if (variant != 1 && variant != 2) throw std::invalid_argument("variant must be 1 or 2");
  return variant;
}

FreeAutomorphism build_phi(int m, int variant, const Word& g) {
  const int d = distinguished_generator(variant);
  const int n = g.rank();
  if (m < 1) throw std::invalid_argument("twist exponent m must be >= 1");
  if (n < 2 || d > n) throw std::invalid_argument("rank too small for the variant");
  if (g.empty() || cyclic_reduce(g).core.length() != g.length())
    throw std::invalid_argument("twisting word must be nontrivial and cyclically reduced");
  for (Letter l : g.letters())
    if (l.generator() == d) throw std::invalid_argument("twisting word involves the distinguished generator");
  std::vector<int> others;
  for (int i = 1; i <= n; ++i)
    if (i != d) others.push_back(i);
  if (!is_biconnected(build_graph(g), generator_mask(others)))
    throw std::invalid_argument("Whitehead graph of the twisting word is not connected without cutpoints");

  FreeAutomorphism phi = FreeAutomorphism::identity(n);
  const Word xd = Word::generator(n, d);
  for (int i : others) phi = compose(phi, FreeAutomorphism::right_transvection(n, i, xd));
  // x_d -> x_d l, one letter of g^m at a time; the outermost move is applied last.
  const Word gm = g.power(m);
  FreeAutomorphism twist = FreeAutomorphism::identity(n);
  for (Letter l : gm.letters()) {
    const Word single = reduce(n, std::span<const Letter>(&l, 1));
    twist = compose(twist, FreeAutomorphism::right_transvection(n, d, single));
  }
  return compose(twist, phi);
}

ContainmentReport puncture_whitehead_containment(const FreeAutomorphism& phi, std::span<const ConjClass> punctures,
                                                 const WhiteheadGraph& w) {
  if (phi.rank() != w.rank()) throw std::invalid_argument("rank mismatch in puncture containment");
  ContainmentReport out;
  out.contained = true;
  for (const auto& c : punctures) {
    PunctureContainment pc;
    pc.image = cyclic_reduce(apply(phi, c.canonical())).core;
    const WhiteheadGraph g = build_graph(pc.image);
    for (auto e : w.simple_edges())
      if (!g.has_edge(e.first, e.second)) pc.missing.push_back(e);
    out.contained = out.contained && pc.missing.empty();
    out.punctures.push_back(std::move(pc));
  }
  return out;
}

std::optional<int> smallest_containing_m(int variant, const Word& g, std::span<const ConjClass> punctures, int max_m) {
  const WhiteheadGraph w = build_graph(g);
  for (int m = 1; m <= max_m; ++m)
    if (puncture_whitehead_containment(build_phi(m, variant, g), punctures, w).contained) return m;
  return std::nullopt;
}

PairGraphReport pair_graph_check(const Word& g1, const Word& g2) {
  if (g1.rank() != g2.rank()) throw std::invalid_argument("rank mismatch in pair graph check");
  PairGraphReport out;
  const WhiteheadGraph w1 = build_graph(g1), w2 = build_graph(g2);
  out.g1_precondition = !g1.empty() && is_biconnected(w1, support_mask(g1));
  out.g2_precondition = !g2.empty() && is_biconnected(w2, support_mask(g2));
  if (!out.g1_precondition) out.detail += "g1 is not connected without cutpoints on its generators; ";
  if (!out.g2_precondition) out.detail += "g2 is not connected without cutpoints on its generators; ";
  if (!out.g1_precondition || !out.g2_precondition) return out;
  const WhiteheadGraph u = graph_union(w1, w2);
  out.ok = is_biconnected(u);
  if (!out.ok) {
    const auto cut = cutpoints(u);
    out.detail = is_connected(u) ? "union has cutpoint " + vertex_label(cut.front()) : "union is disconnected";
  } else {
    out.detail = "union connected without cutpoints";
  }
  return out;
}

namespace {

// Per-thread scratch for exact products: M <- M * G without reallocating.
struct ExactWorkspace {
  mpz_class a, b, c, d, t0, t1, t2, t3, f;

  void reset() { a = 1; b = 0; c = 0; d = 1; }

  void multiply(const IntMatrix& g) {
    mpz_mul(t0.get_mpz_t(), a.get_mpz_t(), g.a.get_mpz_t());
    mpz_addmul(t0.get_mpz_t(), b.get_mpz_t(), g.c.get_mpz_t());
    mpz_mul(t1.get_mpz_t(), a.get_mpz_t(), g.b.get_mpz_t());
    mpz_addmul(t1.get_mpz_t(), b.get_mpz_t(), g.d.get_mpz_t());
    mpz_mul(t2.get_mpz_t(), c.get_mpz_t(), g.a.get_mpz_t());
    mpz_addmul(t2.get_mpz_t(), d.get_mpz_t(), g.c.get_mpz_t());
    mpz_mul(t3.get_mpz_t(), c.get_mpz_t(), g.b.get_mpz_t());
    mpz_addmul(t3.get_mpz_t(), d.get_mpz_t(), g.d.get_mpz_t());
    mpz_swap(a.get_mpz_t(), t0.get_mpz_t());
    mpz_swap(b.get_mpz_t(), t1.get_mpz_t());
    mpz_swap(c.get_mpz_t(), t2.get_mpz_t());
    mpz_swap(d.get_mpz_t(), t3.get_mpz_t());
  }

  double displacement() {
    mpz_mul(f.get_mpz_t(), a.get_mpz_t(), a.get_mpz_t());
    mpz_addmul(f.get_mpz_t(), b.get_mpz_t(), b.get_mpz_t());
    mpz_addmul(f.get_mpz_t(), c.get_mpz_t(), c.get_mpz_t());
    mpz_addmul(f.get_mpz_t(), d.get_mpz_t(), d.get_mpz_t());
    if (mpz_sizeinbase(f.get_mpz_t(), 2) > 64) return log_mpz(f);
    return 2.0 * std::asinh(std::sqrt(std::max(0.0, f.get_d() - 2.0) / 4.0));
  }

  double translation_length() {
    mpz_add(f.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
    return translation_length_exact(f);
  }
};

// Smallest K with dt/K - K <= d <= K dt + K for one sampled pair.
double pair_k(double d, double dt) {
  const double upper = d / (dt + 1.0);
  const double lower = (-d + std::sqrt(d * d + 4.0 * dt)) / 2.0;
  return std::max(upper, lower);
}

void check_options(const PS2Options& options) {
  if (!(options.k > 0.0) || options.window < 1 || options.max_length < 1)
    throw std::invalid_argument("PS2 options need K > 0, window >= 1 and L >= 1");
}

class Prober {
 public:
  Prober(const Representation& rho1, const Representation& rho2, const PS2Options& options) : options_(options) {
    if (rho1.rank() != rho2.rank() || rho1.field() != rho2.field())
      throw std::invalid_argument("PS2 probe needs representations of equal rank and field");
    check_options(options);
    exact_ = rho1.is_integral() && rho2.is_integral();
    const Representation* reps[2] = {&rho1, &rho2};
    for (int slot = 0; slot < 2; ++slot) {
      const auto& rep = *reps[slot];
      for (int v = 0; v < 2 * rep.rank(); ++v) {
        const Letter l = Letter::from_vertex(v);
        const GroupElement g = l.inverted() ? rep.image(l.generator()).inverse() : rep.image(l.generator());
        images_[slot].push_back(g);
        if (exact_) exact_images_[slot].push_back(IntMatrix::from(g));
      }
    }
  }

  bool exact() const { return exact_; }

  PS2Record record(const ConjClass& cls, ExactWorkspace& ws) const {
    PS2Record r;
    r.cls = cls;
    r.length = cls.length();
    const auto letters = cls.canonical().letters();
    const std::size_t p = letters.size();
    const std::size_t span = static_cast<std::size_t>(options_.window) * p;
    for (int slot = 0; slot < 2; ++slot) {
      double best = 0.0;
      for (std::size_t s = 0; s < p; ++s) {
        if (exact_) ws.reset();
        GroupElement m = GroupElement::identity(images_[slot].front().field());
        for (std::size_t dt = 1; s + dt <= span; ++dt) {
          const int v = letters[(s + dt - 1) % p].vertex();
          double d;
          if (exact_) {
            ws.multiply(exact_images_[slot][static_cast<std::size_t>(v)]);
            d = ws.displacement();
            if (s == 0 && dt == p) r.ell[slot] = ws.translation_length();
          } else {
            m = m * images_[slot][static_cast<std::size_t>(v)];
            d = basepoint_displacement(m);
            if (s == 0 && dt == p) r.ell[slot] = translation_length(m);
          }
          best = std::max(best, pair_k(d, static_cast<double>(dt)));
        }
      }
      r.best_k[slot] = best;
      r.axis_pass[slot] = best <= options_.k;
      r.ratio[slot] = r.ell[slot] / static_cast<double>(p);
    }
    return r;
  }

 private:
  PS2Options options_;
  bool exact_ = false;
  std::vector<GroupElement> images_[2];
  std::vector<IntMatrix> exact_images_[2];
};

void summarize(PS2Report& report) {
  report.min_max_ratio = std::numeric_limits<double>::infinity();
  for (const auto& r : report.records) {
    if (r.max_ratio() < report.min_max_ratio) {
      report.min_max_ratio = r.max_ratio();
      report.argmin = r.cls;
    }
    for (int slot = 0; slot < 2; ++slot)
      if (r.ell[slot] == 0.0) report.zero_ratio[slot].push_back(r.cls);
  }
  if (report.records.empty()) report.min_max_ratio = 0.0;
}

PS2Report run(const Representation& rho1, const Representation& rho2, const PS2Options& options,
              std::span<const ConjClass> classes, bool parallel) {
  const Prober prober(rho1, rho2, options);
  PS2Report report;
  report.options = options;
  report.exact = prober.exact();
  std::vector<ConjClass> sorted(classes.begin(), classes.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& c : sorted)
    if (c.canonical().rank() != rho1.rank()) throw std::invalid_argument("class rank differs from representation rank");
  report.records.resize(sorted.size());
  const auto count = static_cast<std::ptrdiff_t>(sorted.size());
  if (parallel) {
#pragma omp parallel
    {
      ExactWorkspace ws;
#pragma omp for schedule(dynamic, 256)
      for (std::ptrdiff_t i = 0; i < count; ++i)
        report.records[static_cast<std::size_t>(i)] = prober.record(sorted[static_cast<std::size_t>(i)], ws);
    }
  } else {
    ExactWorkspace ws;
    for (std::ptrdiff_t i = 0; i < count; ++i)
      report.records[static_cast<std::size_t>(i)] = prober.record(sorted[static_cast<std::size_t>(i)], ws);
  }
  summarize(report);
  return report;
}

}  // namespace

PS2Report ps2_probe(const Representation& rho1, const Representation& rho2, const PS2Options& options) {
  check_options(options);
  if (rho1.rank() != rho2.rank()) throw std::invalid_argument("PS2 probe needs representations of equal rank and field");
  const auto classes = enumerate_primitive_classes(rho1.rank(), options.max_length);
  return run(rho1, rho2, options, classes, true);
}

PS2Report ps2_probe_serial(const Representation& rho1, const Representation& rho2, const PS2Options& options,
                           std::span<const ConjClass> classes) {
  return run(rho1, rho2, options, classes, false);
}

PS2Report ps2_probe_classes(const Representation& rho1, const Representation& rho2, const PS2Options& options,
                            std::span<const ConjClass> classes) {
  return run(rho1, rho2, options, classes, true);
}

Word default_g1(int n) {
  if (n < 3) throw std::invalid_argument("default twisting words need rank >= 3");
  return commutator(Word::generator(n, 2), Word::generator(n, 3));
}

Word default_g2(int n) {
  if (n < 3) throw std::invalid_argument("default twisting words need rank >= 3");
  return commutator(Word::generator(n, 1), Word::generator(n, 3));
}

TwistedPair twisted_pair(const PuncturedSphereRep& rho0, int m, const Word& g1, const Word& g2) {
  const Word* gs[2] = {&g1, &g2};
  TwistedPair out;
  out.m = m;
  for (int variant = 1; variant <= 2; ++variant) {
    const Word& g = *gs[variant - 1];
    const FreeAutomorphism phi = build_phi(m, variant, g);
    if (!puncture_whitehead_containment(phi, rho0.punctures, build_graph(g)).contained)
      throw std::invalid_argument("m = " + std::to_string(m) + " fails puncture containment for variant " +
                                  std::to_string(variant));
    Representation rho = act(phi, rho0.rep);
    if (rho0.rep.is_integral()) {
      const ExactRepresentation exact(rho);
      for (const auto& c : rho0.punctures)
        if (abs(exact.evaluate(apply(phi, c.canonical())).trace()) != 2)
          throw NumericalError("twisted puncture is not parabolic");
    }
    (variant == 1 ? out.phi1 : out.phi2) = phi;
    (variant == 1 ? out.rho1 : out.rho2) = std::move(rho);
  }
  return out;
}

}  // namespace redrep
