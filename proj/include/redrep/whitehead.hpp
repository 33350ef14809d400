#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "redrep/automorphism.hpp"
#include "redrep/word.hpp"

namespace redrep {

/// Raised when a budgeted search runs out of steps or memory allowance.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bitmask over the 2n vertices of X^{+-}.
using VertexMask = std::uint32_t;

/// Whitehead graph on X^{+-}. Edges are stored with multiplicity; the
/// connectivity and cutpoint queries look at the underlying simple graph.
class WhiteheadGraph {
 public:
  explicit WhiteheadGraph(int rank);

  int rank() const { return rank_; }
  int vertex_count() const { return 2 * rank_; }
  VertexMask all_vertices() const { return (VertexMask{1} << vertex_count()) - 1; }

  void add_edge(int u, int v, int multiplicity = 1);
  int multiplicity(int u, int v) const { return counts_[index(u, v)]; }
  bool has_edge(int u, int v) const { return multiplicity(u, v) > 0; }
  /// Degree counted with multiplicity.
  int degree(int v) const;
  /// Neighbours of v in the simple graph.
  VertexMask neighbours(int v) const;
  /// Simple edges (u < v) in lexicographic order.
  std::vector<std::pair<int, int>> simple_edges() const;
  std::size_t edge_count_with_multiplicity() const;

  /// Edgewise containment in the simple view.
  bool contains(const WhiteheadGraph& other) const;
  bool same_simple_graph(const WhiteheadGraph& other) const;

  bool operator==(const WhiteheadGraph&) const = default;

 private:
  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(vertex_count()) + static_cast<std::size_t>(v);
  }
  int rank_;
  std::vector<int> counts_;
};

/// Wh(A, X): for each cyclically adjacent pair (c, d) of each word the edge
/// {c, d^-1}. Words are cyclically reduced first; identity words add nothing.
WhiteheadGraph build_graph(std::span<const Word> words, int rank);
WhiteheadGraph build_graph(const Word& w);

/// Union with identification of duplicate edges: multiplicity becomes the max.
WhiteheadGraph graph_union(const WhiteheadGraph& a, const WhiteheadGraph& b);

/// Connectivity of the subgraph induced on `mask`; an isolated vertex makes a
/// graph with more than one vertex disconnected.
bool is_connected(const WhiteheadGraph& g, std::optional<VertexMask> mask = std::nullopt);
/// Articulation vertices of the induced simple graph (per component).
std::vector<int> cutpoints(const WhiteheadGraph& g, std::optional<VertexMask> mask = std::nullopt);
/// Connected with no cutpoint on `mask`.
bool is_biconnected(const WhiteheadGraph& g, std::optional<VertexMask> mask = std::nullopt);

/// Vertices of generators appearing in w (both signs).
VertexMask support_mask(const Word& w);
/// Vertices of the listed generators (1-based).
VertexMask generator_mask(std::span<const int> generators);

/// Necessary condition for primitivity: true iff Wh(w) is disconnected or has
/// a cutpoint. A false result proves w is not primitive.
bool basic_lemma_filter(const Word& w);

std::string vertex_label(int v);  // "x1", "x1'" for the inverse
std::string to_dot(const WhiteheadGraph& g, const std::string& name = "Wh");

struct PrimitivityVerdict {
  enum class Status { Primitive, NotPrimitive };
  Status status = Status::NotPrimitive;
  Word input_core{1};                // cyclically reduced input
  std::vector<WhiteheadMove> chain;  // strictly length-reducing moves
  Word terminal{1};                  // core after the chain

  bool primitive() const { return status == Status::Primitive; }
};

/// Greedy Whitehead descent: repeatedly take the first second-kind move that
/// strictly shortens the cyclic word. Primitive iff it reaches length 1.
/// Throws std::invalid_argument for the identity and BudgetExhausted after
/// `max_steps` moves.
PrimitivityVerdict decide_primitive(const Word& w, std::size_t max_steps = 1u << 20);

/// Replays the chain through the moves' automorphisms and checks the claimed
/// terminal word and status.
bool verify_primitivity_certificate(const PrimitivityVerdict& v);

/// Cyclic length change of a second-kind move computed from the graph:
/// cut(A, A') - deg(a).
int whitehead_length_change(const WhiteheadGraph& g, const WhiteheadMove& m);

struct EnumerationLimits {
  std::size_t max_classes = 50'000'000;
};

/// Conjugacy classes (up to inversion) of primitive elements with cyclic
/// length <= max_length (at most 15), sorted. Grows length buckets from the
/// generators through lengthening second-kind Whitehead moves; each bucket is
/// expanded with OpenMP.
std::vector<ConjClass> enumerate_primitive_classes(int n, int max_length, EnumerationLimits limits = {});
/// Single-threaded queue-based reference for the same set.
std::vector<ConjClass> enumerate_primitive_classes_serial(int n, int max_length, EnumerationLimits limits = {});

struct BasicLemmaSweep {
  std::size_t classes = 0;
  std::vector<ConjClass> violations;
};

/// Runs basic_lemma_filter over every class (OpenMP).
BasicLemmaSweep basic_lemma_sweep(std::span<const ConjClass> classes);
BasicLemmaSweep basic_lemma_sweep_serial(std::span<const ConjClass> classes);
/// Enumerates and sweeps in one pass over packed keys, without materialising
/// the class list; suited to the large F4 sweeps.
BasicLemmaSweep basic_lemma_sweep(int n, int max_length, EnumerationLimits limits = {});

}  // namespace redrep
