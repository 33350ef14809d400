#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "redrep/automorphism.hpp"
#include "redrep/sl2.hpp"
#include "redrep/word.hpp"

namespace redrep {

struct SearchBudget {
  int max_word_length = 10;
  std::size_t max_candidates = 20000;
  std::chrono::milliseconds time_cap{20000};
  std::uint64_t seed = 1;
  /// Longest Nielsen chain tried by redundant_heuristic before rechecking.
  int nielsen_chain_length = 1;

  void validate() const;  // throws std::invalid_argument unless all positive
};

/// Thresholds of the two accepted nondiscreteness witnesses.
struct WitnessParams {
  double irrational_gap = 1e-6;  // |theta/pi - p/q| > gap for all q <= max_denominator
  int max_denominator = 64;
  double small_lo = 1e-9;        // distance from +-I strictly inside (small_lo, small_hi)
  double small_hi = 1e-3;
  double noncommuting = 1e-6;    // |wc - cw| >= noncommuting * distance * |c|
};

struct NondiscretenessWitness {
  enum class Kind { IrrationalElliptic, SmallNoncommuting };
  Kind kind = Kind::IrrationalElliptic;
  Word word{1};
  double angle = 0.0;      // elliptic: rotation angle
  double rational_gap = 0.0;  // elliptic: min |theta/pi - p/q| over q <= max_denominator
  Word companion{1};       // small: word failing to commute with `word`
  double distance = 0.0;   // small: distance of word from +-I
  double commutator = 0.0; // small: |wc - cw|
};

std::string to_string(NondiscretenessWitness::Kind k);

/// Everything needed to re-verify a Dense verdict from scratch.
struct DensityCertificate {
  std::vector<GroupElement> generators;
  std::vector<Word> spanning_words;
  int measured_rank = 0;  // real rank of span{Ad(w)}
  NondiscretenessWitness witness;
  WitnessParams params;

  Field field() const { return generators.front().field(); }
};

struct ReplayReport {
  bool ok = false;
  int rank = 0;
  std::string detail;
};

/// Re-evaluates the spanning words and witness through sl2 and checks every
/// predicate. Pure function of the certificate.
ReplayReport replay(const DensityCertificate& cert);

enum class Obstruction { DiscreteSchottkyLike, Elementary, ReducibleSpan };
std::string to_string(Obstruction o);

struct BudgetReport {
  std::size_t candidates = 0;
  int deepest_length = 0;
  int ad_rank = 0;
  bool witness_found = false;
  bool time_exhausted = false;
  double min_center_distance = 0.0;  // over nontrivial candidates
  std::string note;
};

struct DensityVerdict {
  enum class Kind { Dense, LikelyNotDense, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<DensityCertificate> certificate;
  Obstruction reason = Obstruction::Elementary;  // meaningful for LikelyNotDense
  BudgetReport report;

  bool dense() const { return kind == Kind::Dense; }
};

std::string to_string(DensityVerdict::Kind k);
std::string describe(const DensityVerdict& v);

/// Budgeted search for a density certificate of <S>. Throws
/// std::invalid_argument for empty S or mixed fields.
DensityVerdict certify_dense(std::span<const GroupElement> generators, const SearchBudget& budget,
                             const WitnessParams& params = {});

/// Verdict for <S, g>.
DensityVerdict omega_member(std::span<const GroupElement> generators, const GroupElement& g,
                            const SearchBudget& budget);

struct OmegaTildeResult {
  std::optional<GroupElement> witness;
  std::vector<DensityVerdict> verdicts;  // for (S \ {g_i}) + {g}, i = 1..n
  std::size_t attempts = 0;
  bool obstruction = false;  // refused: elementary input
  bool budget_exhausted = false;
  double sampling_radius = 0.0;
  std::string report;
};

/// Searches for g making every (S \ {g_i}) + {g} dense. Candidates are
/// products of coordinates perturbed by small random elements.
OmegaTildeResult omega_tilde_search(const Representation& rep, const SearchBudget& budget);

struct StrongRedundancyReport {
  bool strongly_redundant = false;
  bool unknown = false;  // some subtuple verdict was Unknown
  std::vector<DensityVerdict> subtuples;  // subtuples[i] drops coordinate i + 1
};

StrongRedundancyReport strongly_redundant(const Representation& rep, const SearchBudget& budget);

struct RedundancyVerdict {
  bool redundant = false;
  /// a with act(a, rep) having a dense subtuple; the free factor is generated
  /// by a^-1(x_i) for i != dropped.
  std::optional<FreeAutomorphism> basis;
  int dropped = 0;
  std::optional<DensityCertificate> certificate;
  std::string detail;
};

RedundancyVerdict redundant_heuristic(const Representation& rep, const SearchBudget& budget);

struct LinkReport {
  bool links = false;
  std::vector<DensityVerdict> stages;  // stages[k - 1] tests phi(x_1..x_{k-1}), psi(x_{k+1}..x_n)
};

/// Coordinates of the mixed tuple for stage k (1 <= k < n).
std::vector<GroupElement> mixed_tuple(const Representation& phi, const Representation& psi, int k);
LinkReport links(const Representation& phi, const Representation& psi, const SearchBudget& budget);

/// Representation-level helpers used by the searches.
bool shares_fixed_point(std::span<const GroupElement> elements, const Tolerance& tol = default_tolerance());
bool pairwise_commuting(std::span<const GroupElement> elements, const Tolerance& tol = default_tolerance());

}  // namespace redrep
