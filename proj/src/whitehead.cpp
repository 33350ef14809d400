#include "redrep/whitehead.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace redrep {

WhiteheadGraph::WhiteheadGraph(int rank) : rank_(rank) {
  if (rank < 1 || rank > 16) throw std::invalid_argument("Whitehead graphs support ranks 1..16");
  counts_.assign(static_cast<std::size_t>(vertex_count() * vertex_count()), 0);
}

void WhiteheadGraph::add_edge(int u, int v, int multiplicity) {
  if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
    throw std::invalid_argument("edge endpoint outside X^{+-}");
  counts_[index(u, v)] += multiplicity;
  if (u != v) counts_[index(v, u)] += multiplicity;
}

int WhiteheadGraph::degree(int v) const {
  int d = 0;
  for (int u = 0; u < vertex_count(); ++u) d += multiplicity(v, u);
  return d;
}

VertexMask WhiteheadGraph::neighbours(int v) const {
  VertexMask m = 0;
  for (int u = 0; u < vertex_count(); ++u)
    if (u != v && has_edge(v, u)) m |= VertexMask{1} << u;
  return m;
}

std::vector<std::pair<int, int>> WhiteheadGraph::simple_edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < vertex_count(); ++u)
    for (int v = u; v < vertex_count(); ++v)
      if (has_edge(u, v)) out.emplace_back(u, v);
  return out;
}

std::size_t WhiteheadGraph::edge_count_with_multiplicity() const {
  std::size_t total = 0;
  for (int u = 0; u < vertex_count(); ++u)
    for (int v = u; v < vertex_count(); ++v) total += static_cast<std::size_t>(multiplicity(u, v));
  return total;
}

bool WhiteheadGraph::contains(const WhiteheadGraph& other) const {
  if (other.rank_ != rank_) throw std::invalid_argument("rank mismatch in graph containment");
  for (std::size_t i = 0; i < counts_.size(); ++i)
    if (other.counts_[i] > 0 && counts_[i] == 0) return false;
  return true;
}

bool WhiteheadGraph::same_simple_graph(const WhiteheadGraph& other) const {
  return contains(other) && other.contains(*this);
}

WhiteheadGraph build_graph(std::span<const Word> words, int rank) {
  WhiteheadGraph g(rank);
  for (const auto& w : words) {
    if (w.rank() != rank) throw std::invalid_argument("rank mismatch among Whitehead graph words");
    const Word core = cyclic_reduce(w).core;
    const auto letters = core.letters();
    const std::size_t n = letters.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Letter c = letters[i];
      const Letter d = letters[(i + 1) % n];
      g.add_edge(c.vertex(), d.inverse().vertex());
    }
  }
  return g;
}

WhiteheadGraph build_graph(const Word& w) { return build_graph(std::span<const Word>(&w, 1), w.rank()); }

WhiteheadGraph graph_union(const WhiteheadGraph& a, const WhiteheadGraph& b) {
  if (a.rank() != b.rank()) throw std::invalid_argument("rank mismatch in graph union");
  WhiteheadGraph out(a.rank());
  for (int u = 0; u < a.vertex_count(); ++u)
    for (int v = u; v < a.vertex_count(); ++v) {
      const int m = std::max(a.multiplicity(u, v), b.multiplicity(u, v));
      if (m > 0) out.add_edge(u, v, m);
    }
  return out;
}

namespace {

VertexMask resolve(const WhiteheadGraph& g, std::optional<VertexMask> mask) {
  return mask.value_or(g.all_vertices()) & g.all_vertices();
}

// Tarjan's articulation-point scan restricted to `mask`.
void articulation(const WhiteheadGraph& g, VertexMask mask, std::vector<int>& cut, int& components) {
  const int nv = g.vertex_count();
  std::vector<int> disc(static_cast<std::size_t>(nv), -1), low(static_cast<std::size_t>(nv), 0);
  std::vector<VertexMask> adj(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) adj[static_cast<std::size_t>(v)] = g.neighbours(v) & mask;
  std::vector<bool> is_cut(static_cast<std::size_t>(nv), false);
  int timer = 0;
  components = 0;
  std::function<void(int, int)> dfs = [&](int v, int parent) {
    const auto sv = static_cast<std::size_t>(v);
    disc[sv] = low[sv] = timer++;
    int children = 0;
    for (VertexMask rest = adj[sv]; rest; rest &= rest - 1) {
      const int u = std::countr_zero(rest);
      const auto su = static_cast<std::size_t>(u);
      if (u == parent) continue;
      if (disc[su] >= 0) {
        low[sv] = std::min(low[sv], disc[su]);
        continue;
      }
      ++children;
      dfs(u, v);
      low[sv] = std::min(low[sv], low[su]);
      if (parent >= 0 && low[su] >= disc[sv]) is_cut[sv] = true;
    }
    if (parent < 0 && children > 1) is_cut[sv] = true;
  };
  for (VertexMask rest = mask; rest; rest &= rest - 1) {
    const int v = std::countr_zero(rest);
    if (disc[static_cast<std::size_t>(v)] < 0) {
      ++components;
      dfs(v, -1);
    }
  }
  cut.clear();
  for (int v = 0; v < nv; ++v)
    if (is_cut[static_cast<std::size_t>(v)]) cut.push_back(v);
}

}  // namespace

bool is_connected(const WhiteheadGraph& g, std::optional<VertexMask> mask) {
  std::vector<int> cut;
  int components = 0;
  articulation(g, resolve(g, mask), cut, components);
  return components <= 1;
}

std::vector<int> cutpoints(const WhiteheadGraph& g, std::optional<VertexMask> mask) {
  std::vector<int> cut;
  int components = 0;
  articulation(g, resolve(g, mask), cut, components);
  return cut;
}

bool is_biconnected(const WhiteheadGraph& g, std::optional<VertexMask> mask) {
  std::vector<int> cut;
  int components = 0;
  articulation(g, resolve(g, mask), cut, components);
  return components <= 1 && cut.empty();
}

VertexMask support_mask(const Word& w) {
  VertexMask m = 0;
  for (Letter l : w.letters()) m |= VertexMask{3} << (2 * (l.generator() - 1));
  return m;
}

VertexMask generator_mask(std::span<const int> generators) {
  VertexMask m = 0;
  for (int i : generators) m |= VertexMask{3} << (2 * (i - 1));
  return m;
}

bool basic_lemma_filter(const Word& w) { return !is_biconnected(build_graph(w)); }

std::string vertex_label(int v) {
  const Letter l = Letter::from_vertex(v);
  return "x" + std::to_string(l.generator()) + (l.inverted() ? "'" : "");
}

std::string to_dot(const WhiteheadGraph& g, const std::string& name) {
  std::ostringstream out;
  out << "graph " << name << " {\n";
  for (int v = 0; v < g.vertex_count(); ++v) out << "  \"" << vertex_label(v) << "\";\n";
  for (auto [u, v] : g.simple_edges()) {
    out << "  \"" << vertex_label(u) << "\" -- \"" << vertex_label(v) << "\"";
    if (g.multiplicity(u, v) > 1) out << " [label=" << g.multiplicity(u, v) << "]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

int whitehead_length_change(const WhiteheadGraph& g, const WhiteheadMove& m) {
  if (m.kind != WhiteheadMove::Kind::Multiplier) return 0;
  const int nv = g.vertex_count();
  int cut = 0;
  for (int u = 0; u < nv; ++u) {
    if (!(m.subset & (1u << u))) continue;
    for (int v = 0; v < nv; ++v)
      if (!(m.subset & (1u << v))) cut += g.multiplicity(u, v);
  }
  return cut - g.degree(m.multiplier.vertex());
}

namespace {

const std::vector<WhiteheadMove>& cached_second_kind(int n) {
  thread_local std::map<int, std::vector<WhiteheadMove>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, whitehead_second_kind_moves(n)).first;
  return it->second;
}

// Cut sizes of every vertex subset for one cyclic word, from the multiplicity
// matrix of its Whitehead graph.
class CutTable {
 public:
  CutTable(std::span<const Letter> core, int rank) : nv_(2 * rank), matrix_(static_cast<std::size_t>(nv_ * nv_), 0) {
    const std::size_t n = core.size();
    for (std::size_t i = 0; i < n; ++i) {
      const int u = core[i].vertex();
      const int v = core[(i + 1) % n].inverse().vertex();
      ++matrix_[static_cast<std::size_t>(u * nv_ + v)];
      ++matrix_[static_cast<std::size_t>(v * nv_ + u)];
    }
    degree_.assign(static_cast<std::size_t>(nv_), 0);
    for (int u = 0; u < nv_; ++u)
      for (int v = 0; v < nv_; ++v) degree_[static_cast<std::size_t>(u)] += at(u, v);
    if (nv_ <= 12) {
      const std::size_t count = std::size_t{1} << nv_;
      inner_.assign(count, 0);
      degsum_.assign(count, 0);
      for (std::size_t mask = 1; mask < count; ++mask) {
        const int u = std::countr_zero(mask);
        const std::size_t rest = mask & (mask - 1);
        int add = 0;
        for (std::size_t r = rest; r; r &= r - 1) add += at(u, std::countr_zero(r));
        inner_[mask] = inner_[rest] + add;
        degsum_[mask] = degsum_[rest] + degree_[static_cast<std::size_t>(u)];
      }
    }
  }

  int change(const WhiteheadMove& m) const {
    int cut = 0;
    if (!inner_.empty()) {
      cut = degsum_[m.subset] - 2 * inner_[m.subset];
    } else {
      for (int u = 0; u < nv_; ++u) {
        if (!(m.subset & (1u << u))) continue;
        for (int v = 0; v < nv_; ++v)
          if (!(m.subset & (1u << v))) cut += at(u, v);
      }
    }
    return cut - degree_[static_cast<std::size_t>(m.multiplier.vertex())];
  }

 private:
  // Self-pairs {a, a} never occur in a cyclically reduced word, so the
  // diagonal stays zero and doubling above is harmless.
  int at(int u, int v) const { return matrix_[static_cast<std::size_t>(u * nv_ + v)]; }
  int nv_;
  std::vector<int> matrix_;
  std::vector<int> degree_;
  std::vector<int> inner_;
  std::vector<int> degsum_;
};

void cyclic_core_in_place(std::vector<Letter>& letters) {
  std::size_t lo = 0, hi = letters.size();
  while (hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  if (lo > 0 || hi < letters.size()) {
    std::vector<Letter> core(letters.begin() + static_cast<std::ptrdiff_t>(lo),
                             letters.begin() + static_cast<std::ptrdiff_t>(hi));
    letters.swap(core);
  }
}

std::string key_of(std::span<const Letter> canonical) {
  std::string k;
  k.reserve(canonical.size());
  for (Letter l : canonical) k.push_back(static_cast<char>(l.vertex()));
  return k;
}

std::vector<Letter> letters_of(const std::string& key) {
  std::vector<Letter> out;
  out.reserve(key.size());
  for (char c : key) out.push_back(Letter::from_vertex(static_cast<int>(c)));
  return out;
}

// Neighbours of one class under second-kind moves that lengthen it without
// exceeding max_length. Every primitive class longer than 1 has a strictly
// shortening move back, so it is reached from a shorter class.
template <class Emit>
void expand_letters(const std::vector<Letter>& core, int n, int max_length, std::vector<Letter>& image,
                    std::vector<Letter>& canonical, Emit&& emit) {
  if (static_cast<int>(core.size()) >= max_length) return;
  const CutTable table(core, n);
  for (const auto& m : cached_second_kind(n)) {
    const int new_length = static_cast<int>(core.size()) + table.change(m);
    if (new_length > max_length || new_length <= static_cast<int>(core.size())) continue;
    m.apply_letters(core, image);
    cyclic_core_in_place(image);
    canonical_cyclic_letters(image, canonical);
    emit(canonical);
  }
}

std::vector<std::string> seed_keys(int n) {
  std::vector<std::string> seeds;
  for (int i = 1; i <= n; ++i) {
    const Letter l(i, false);
    seeds.push_back(key_of(std::span<const Letter>(&l, 1)));
  }
  return seeds;
}

// Four bits per letter vertex, length in the top nibble.
using PackedKey = std::uint64_t;
constexpr int kMaxPackedLength = 15;

PackedKey pack(std::span<const Letter> canonical) {
  PackedKey k = static_cast<PackedKey>(canonical.size()) << 60;
  for (std::size_t i = 0; i < canonical.size(); ++i)
    k |= static_cast<PackedKey>(canonical[i].vertex()) << (4 * i);
  return k;
}

int packed_length(PackedKey k) { return static_cast<int>(k >> 60); }

void unpack(PackedKey k, std::vector<Letter>& out) {
  const int len = packed_length(k);
  out.resize(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) out[static_cast<std::size_t>(i)] = Letter::from_vertex(static_cast<int>((k >> (4 * i)) & 0xF));
}

void sort_unique(std::vector<PackedKey>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Primitive classes bucketed by length. Moves only lengthen, so a bucket is
// complete once every shorter bucket has been expanded.
std::vector<std::vector<PackedKey>> primitive_keys(int n, int max_length, EnumerationLimits limits) {
  std::vector<std::vector<PackedKey>> buckets(static_cast<std::size_t>(max_length) + 1);
  std::vector<std::size_t> settled(buckets.size(), 0);
  for (int i = 1; i <= n; ++i) {
    const Letter l(i, false);
    buckets[1].push_back(pack(std::span<const Letter>(&l, 1)));
  }
  std::size_t total = 0;
  auto settle = [&](int len) {
    auto& b = buckets[static_cast<std::size_t>(len)];
    sort_unique(b);
    settled[static_cast<std::size_t>(len)] = b.size();
    if (total + b.size() > limits.max_classes) throw BudgetExhausted("primitive enumeration exceeded max_classes");
  };
  constexpr std::size_t kChunk = std::size_t{1} << 14;
  for (int len = 1; len <= max_length; ++len) {
    settle(len);
    const auto& level = buckets[static_cast<std::size_t>(len)];
    total += level.size();
    if (len == max_length) break;
    for (std::size_t start = 0; start < level.size(); start += kChunk) {
      const auto stop = static_cast<std::ptrdiff_t>(std::min(level.size(), start + kChunk));
      std::vector<std::vector<PackedKey>> found;
#pragma omp parallel
      {
#pragma omp single
        {
#ifdef _OPENMP
          found.resize(static_cast<std::size_t>(omp_get_num_threads()));
#else
          found.resize(1);
#endif
        }
#ifdef _OPENMP
        auto& out = found[static_cast<std::size_t>(omp_get_thread_num())];
#else
        auto& out = found[0];
#endif
        std::vector<Letter> core, image, canonical;
#pragma omp for schedule(dynamic, 64)
        for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(start); i < stop; ++i) {
          unpack(level[static_cast<std::size_t>(i)], core);
          expand_letters(core, n, max_length, image, canonical, [&out](const std::vector<Letter>& c) { out.push_back(pack(c)); });
        }
      }
      for (const auto& batch : found)
        for (PackedKey k : batch) buckets[static_cast<std::size_t>(packed_length(k))].push_back(k);
      for (int m = len + 1; m <= max_length; ++m) {
        const auto sm = static_cast<std::size_t>(m);
        if (buckets[sm].size() > 2 * settled[sm] + (std::size_t{1} << 22)) settle(m);
      }
    }
  }
  return buckets;
}

std::vector<ConjClass> finish(int n, const std::unordered_set<std::string>& seen) {
  std::vector<ConjClass> out;
  out.reserve(seen.size());
  for (const auto& k : seen) out.push_back(ConjClass::of(reduce(n, letters_of(k))));
  std::sort(out.begin(), out.end());
  return out;
}

void check_enumeration_args(int n, int max_length) {
  if (n < 2) throw std::invalid_argument("enumeration needs n >= 2");
  if (n > 6) throw std::invalid_argument("enumeration supports n <= 6");
  if (max_length < 1) throw std::invalid_argument("enumeration needs max_length >= 1");
  if (max_length > kMaxPackedLength) throw std::invalid_argument("enumeration supports max_length <= 15");
}

}  // namespace

PrimitivityVerdict decide_primitive(const Word& w, std::size_t max_steps) {
  if (w.empty()) throw std::invalid_argument("decide_primitive needs a nontrivial word");
  PrimitivityVerdict v;
  v.input_core = cyclic_reduce(w).core;
  Word current = v.input_core;
  const auto& moves = cached_second_kind(w.rank());
  while (current.length() > 1) {
    const CutTable table(current.letters(), w.rank());
    const WhiteheadMove* reducing = nullptr;
    for (const auto& m : moves)
      if (table.change(m) < 0) {
        reducing = &m;
        break;
      }
    if (!reducing) break;
    if (v.chain.size() >= max_steps) throw BudgetExhausted("Whitehead descent exceeded its step budget");
    current = cyclic_reduce(reducing->apply(current)).core;
    v.chain.push_back(*reducing);
  }
  v.terminal = current;
  v.status = current.length() == 1 ? PrimitivityVerdict::Status::Primitive : PrimitivityVerdict::Status::NotPrimitive;
  return v;
}

bool verify_primitivity_certificate(const PrimitivityVerdict& v) {
  Word current = cyclic_reduce(v.input_core).core;
  for (const auto& m : v.chain) {
    const Word next = cyclic_reduce(apply(m.automorphism(), current)).core;
    if (next.length() >= current.length()) return false;
    current = next;
  }
  if (current != v.terminal) return false;
  if (v.primitive()) return current.length() == 1;
  if (current.length() <= 1) return false;
  for (const auto& m : whitehead_second_kind_moves(current.rank()))
    if (cyclic_length(apply(m.automorphism(), current)) < current.length()) return false;
  return true;
}

std::vector<ConjClass> enumerate_primitive_classes_serial(int n, int max_length, EnumerationLimits limits) {
  check_enumeration_args(n, max_length);
  std::unordered_set<std::string> seen;
  std::deque<std::string> queue;
  for (auto& s : seed_keys(n)) {
    seen.insert(s);
    queue.push_back(s);
  }
  std::vector<std::string> next;
  std::vector<Letter> image, canonical;
  while (!queue.empty()) {
    const std::string key = std::move(queue.front());
    queue.pop_front();
    next.clear();
    const auto core = letters_of(key);
    expand_letters(core, n, max_length, image, canonical, [&next](const std::vector<Letter>& c) { next.push_back(key_of(c)); });
    for (auto& k : next)
      if (seen.insert(k).second) {
        if (seen.size() > limits.max_classes) throw BudgetExhausted("primitive enumeration exceeded max_classes");
        queue.push_back(k);
      }
  }
  return finish(n, seen);
}

std::vector<ConjClass> enumerate_primitive_classes(int n, int max_length, EnumerationLimits limits) {
  check_enumeration_args(n, max_length);
  std::vector<ConjClass> out;
  std::vector<Letter> letters;
  for (const auto& bucket : primitive_keys(n, max_length, limits))
    for (PackedKey k : bucket) {
      unpack(k, letters);
      out.push_back(ConjClass::of(reduce(n, letters)));
    }
  std::sort(out.begin(), out.end());
  return out;
}

BasicLemmaSweep basic_lemma_sweep_serial(std::span<const ConjClass> classes) {
  BasicLemmaSweep out;
  out.classes = classes.size();
  for (const auto& c : classes)
    if (!basic_lemma_filter(c.canonical())) out.violations.push_back(c);
  return out;
}

BasicLemmaSweep basic_lemma_sweep(std::span<const ConjClass> classes) {
  BasicLemmaSweep out;
  out.classes = classes.size();
  std::vector<char> bad(classes.size(), 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(classes.size()); ++i)
    bad[static_cast<std::size_t>(i)] = basic_lemma_filter(classes[static_cast<std::size_t>(i)].canonical()) ? 0 : 1;
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (bad[i]) out.violations.push_back(classes[i]);
  return out;
}

BasicLemmaSweep basic_lemma_sweep(int n, int max_length, EnumerationLimits limits) {
  check_enumeration_args(n, max_length);
  BasicLemmaSweep out;
  std::vector<PackedKey> bad;
  for (const auto& bucket : primitive_keys(n, max_length, limits)) {
    out.classes += bucket.size();
#pragma omp parallel
    {
      std::vector<Letter> letters;
      std::vector<PackedKey> local;
#pragma omp for schedule(static) nowait
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(bucket.size()); ++i) {
        unpack(bucket[static_cast<std::size_t>(i)], letters);
        if (!basic_lemma_filter(reduce(n, letters))) local.push_back(bucket[static_cast<std::size_t>(i)]);
      }
#pragma omp critical
      bad.insert(bad.end(), local.begin(), local.end());
    }
  }
  std::vector<Letter> letters;
  for (PackedKey k : bad) {
    unpack(k, letters);
    out.violations.push_back(ConjClass::of(reduce(n, letters)));
  }
  std::sort(out.violations.begin(), out.violations.end());
  return out;
}

}  // namespace redrep
