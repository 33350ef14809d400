#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "redrep/automorphism.hpp"
#include "redrep/density.hpp"
#include "redrep/sl2.hpp"

namespace redrep {

enum class MoveSet { Nielsen, Whitehead };
std::string to_string(MoveSet m);
MoveSet parse_move_set(const std::string& s);

struct WalkConfig {
  std::size_t steps = 1000;
  std::uint64_t seed = 1;
  MoveSet moves = MoveSet::Nielsen;
  std::size_t stride = 1;
  /// Noncompact fields: an entry beyond this restarts the walk from the
  /// initial tuple.
  double overflow_guard = 1e12;
  /// |det - 1| beyond this also restarts the walk. Determinant errors grow
  /// geometrically under product replacement when nothing renormalises.
  double drift_guard = 1e-10;
  /// Project back onto the group after every step. Defaults to on for SU2
  /// and off otherwise.
  std::optional<bool> renormalize;

  void validate() const;  // stride and guards positive
};

struct WalkSample {
  std::size_t step = 0;
  std::size_t excursion = 0;  // restarts before this sample
  std::vector<Scalar> traces; // tr(x_i), then tr(x_i x_j) for i < j
};

struct WalkResult {
  std::vector<std::string> columns;
  std::vector<WalkSample> samples;
  std::size_t restarts = 0;
  std::vector<std::size_t> restart_steps;
};

/// Column names matching WalkSample::traces for rank n.
std::vector<std::string> trace_columns(int n);
std::vector<Scalar> trace_sample(const Representation& rep);

/// Product-replacement walk: i.i.d. uniform moves from the move set, applied
/// through act(). Samples at step 0 and every `stride` steps.
WalkResult random_walk(const Representation& rep, const WalkConfig& cfg);

/// tr rho([x1, x2]); throws std::invalid_argument unless rank 2.
Scalar commutator_trace(const Representation& rep);

struct Approximation {
  Word word{1};
  double distance = 0.0;  // |w(S) - target| re-evaluated from the word
  bool success = false;
  std::size_t candidates = 0;
};

/// Beam search over word spheres for |w(S) - target| < epsilon (operator
/// norm). On budget exhaustion returns the best word found, success false.
Approximation approximate_element(std::span<const GroupElement> generators, const GroupElement& target, double epsilon,
                                  const SearchBudget& budget);

struct SteerStage {
  int coordinate = 0;
  Word word{1};  // rank-n word in the other coordinates multiplied on the right
  double distance = 0.0;
  bool success = false;
  std::string density;  // verdict summary of the stage's generating tuple
};

struct SteerResult {
  FreeAutomorphism automorphism = FreeAutomorphism::identity(1);
  std::vector<double> distances;  // coordinatewise |act(a, phi)(x_i) - psi(x_i)|
  std::vector<SteerStage> stages; // in execution order k = n..1
  bool success = false;
};

class SteerError : public std::runtime_error {
 public:
  SteerError(int stage, const std::string& what) : std::runtime_error(what), stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

/// For k = n..1 multiplies coordinate k on the right by an approximation of
/// rho(x_k)^-1 psi(x_k) over the other current coordinates. The automorphism
/// is tau_1 o ... o tau_n with act(tau_k, rho)(x_k) = rho(x_k w_k). Throws
/// SteerError when a stage's tuple is not certified dense.
SteerResult steer(const Representation& phi, const Representation& psi, double epsilon, const SearchBudget& budget);

/// Coordinatewise operator distances between two representations.
std::vector<double> coordinate_distances(const Representation& a, const Representation& b);

/// Haar measure on SU(2): trace density sqrt(4 - t^2) / (2 pi) on [-2, 2].
double haar_trace_density(double t);
double haar_trace_cdf(double t);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
  std::size_t n = 0;
  bool passes(double alpha) const { return p_value > alpha; }
};

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);
/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// Haar SU(2) elements by rejection: uniform in the cube [-1, 1]^4, keep
/// points inside the unit ball, project to the sphere.
std::vector<GroupElement> rejection_sampled_haar(std::size_t count, std::mt19937_64& rng);

}  // namespace redrep
