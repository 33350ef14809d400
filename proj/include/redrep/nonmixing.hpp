#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "redrep/automorphism.hpp"
#include "redrep/sl2.hpp"
#include "redrep/whitehead.hpp"
#include "redrep/word.hpp"

namespace redrep {

/// Fuchsian representation of a punctured sphere: the n generators and their
/// product are the k = n + 1 puncture classes.
struct PuncturedSphereRep {
  Representation rep;
  std::vector<ConjClass> punctures;
};

/// X1 = [[1,2],[0,1]], X2 = [[1,0],[-4,1]], X3 = [[-3,2],[-8,5]], a basis
/// A, B^-2, B A B^-1 of an index-2 subgroup of <A, B>, B = [[1,0],[2,1]].
/// All of X1, X2, X3 and X1 X2 X3 = [[5,-4],[4,-3]] have trace 2.
PuncturedSphereRep build_fuchsian_4punctured();

/// Checks exactly that every puncture class has trace +-2.
bool punctures_parabolic(const PuncturedSphereRep& p);

/// Variant 1: x1 -> x1 g^m, x_i -> x_i x1 g^m (i >= 2). Variant 2 swaps the
/// roles of x1 and x2. Built as N o M with M: x_i -> x_i x_d (i != d) and N the
/// right multiplication of x_d by g^m, one letter at a time. Throws
/// std::invalid_argument if m < 1, g involves x_d, is not cyclically reduced,
/// or Wh(g) is not connected without cutpoints on the other vertices.
FreeAutomorphism build_phi(int m, int variant, const Word& g);

/// The distinguished generator of a variant (1 or 2).
int distinguished_generator(int variant);

struct PunctureContainment {
  Word image{1};                             // cyclic core of phi(c)
  std::vector<std::pair<int, int>> missing;  // edges of W absent from Wh(phi(c))
};

struct ContainmentReport {
  bool contained = false;
  std::vector<PunctureContainment> punctures;
};

ContainmentReport puncture_whitehead_containment(const FreeAutomorphism& phi, std::span<const ConjClass> punctures,
                                                 const WhiteheadGraph& w);

/// Smallest m in [1, max_m] whose Phi passes containment of Wh(g).
std::optional<int> smallest_containing_m(int variant, const Word& g, std::span<const ConjClass> punctures,
                                         int max_m = 10);

struct PairGraphReport {
  bool ok = false;
  bool g1_precondition = false;
  bool g2_precondition = false;
  std::string detail;
};

/// Union of Wh(g1) and Wh(g2) on all 2n vertices is connected without
/// cutpoints. Each g_i must be biconnected on the vertices of its own
/// generators; a failed precondition yields ok = false with detail.
PairGraphReport pair_graph_check(const Word& g1, const Word& g2);

struct PS2Record {
  ConjClass cls = ConjClass::of(Word(1));
  std::size_t length = 0;
  double ell[2] = {0.0, 0.0};
  double ratio[2] = {0.0, 0.0};
  bool axis_pass[2] = {false, false};
  double best_k[2] = {0.0, 0.0};  // smallest K satisfying every sampled pair

  double max_ratio() const { return std::max(ratio[0], ratio[1]); }
};

struct PS2Options {
  int max_length = 12;
  double k = 10.0;
  int window = 2;  // axis samples span window * ||c|| steps
};

struct PS2Report {
  PS2Options options;
  bool exact = false;  // integer evaluation with GMP
  std::vector<PS2Record> records;  // sorted by class
  double min_max_ratio = 0.0;
  std::optional<ConjClass> argmin;
  std::vector<ConjClass> zero_ratio[2];  // classes with ell = 0 for each slot
};

/// Translation-length ratios and axis quasi-geodesic checks over every
/// primitive class with ||c|| <= L. Records are computed in parallel.
PS2Report ps2_probe(const Representation& rho1, const Representation& rho2, const PS2Options& options);
/// Serial reference over an explicit class list.
PS2Report ps2_probe_serial(const Representation& rho1, const Representation& rho2, const PS2Options& options,
                           std::span<const ConjClass> classes);
/// Same computation over an explicit class list, in parallel.
PS2Report ps2_probe_classes(const Representation& rho1, const Representation& rho2, const PS2Options& options,
                            std::span<const ConjClass> classes);

struct TwistedPair {
  int m = 0;
  FreeAutomorphism phi1 = FreeAutomorphism::identity(1);
  FreeAutomorphism phi2 = FreeAutomorphism::identity(1);
  Representation rho1{{GroupElement()}};
  Representation rho2{{GroupElement()}};
};

/// rho_i = rho0 o Phi_i^-1 = act(Phi_i, rho0). Throws std::invalid_argument
/// unless m passes containment for both variants, and NumericalError if a
/// twisted puncture fails to stay parabolic.
TwistedPair twisted_pair(const PuncturedSphereRep& rho0, int m, const Word& g1, const Word& g2);

/// Default twisting words [x2, x3] and [x1, x3] in rank n.
Word default_g1(int n);
Word default_g2(int n);

}  // namespace redrep
