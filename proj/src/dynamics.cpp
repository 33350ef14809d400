#include "redrep/dynamics.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace redrep {

std::string to_string(MoveSet m) { return m == MoveSet::Nielsen ? "nielsen" : "whitehead"; }

MoveSet parse_move_set(const std::string& s) {
  if (s == "nielsen") return MoveSet::Nielsen;
  if (s == "whitehead") return MoveSet::Whitehead;
  throw std::invalid_argument("unknown move set '" + s + "' (expected nielsen or whitehead)");
}

void WalkConfig::validate() const {
  if (stride < 1) throw std::invalid_argument("walk stride must be positive");
  if (!(overflow_guard > 0.0) || !(drift_guard > 0.0)) throw std::invalid_argument("walk guards must be positive");
}

std::vector<std::string> trace_columns(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back("tr_x" + std::to_string(i));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) out.push_back("tr_x" + std::to_string(i) + "x" + std::to_string(j));
  return out;
}

std::vector<Scalar> trace_sample(const Representation& rep) {
  std::vector<Scalar> out;
  const int n = rep.rank();
  for (int i = 1; i <= n; ++i) out.push_back(rep.image(i).trace());
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) out.push_back((rep.image(i) * rep.image(j)).trace());
  return out;
}

namespace {

bool escaped(const Representation& rep, const WalkConfig& cfg) {
  for (const auto& g : rep.images()) {
    if (rep.field() != Field::SU2 && g.max_abs_entry() > cfg.overflow_guard) return true;
    if (std::abs(g.det() - 1.0) > cfg.drift_guard) return true;
  }
  return false;
}

Representation renormalize(const Representation& rep) {
  std::vector<GroupElement> out;
  for (const auto& g : rep.images()) out.push_back(g.renormalized());
  return Representation(std::move(out));
}

}  // namespace

WalkResult random_walk(const Representation& rep, const WalkConfig& cfg) {
  cfg.validate();
  const int n = rep.rank();
  if (n < 2) throw std::invalid_argument("random walks need rank >= 2");
  const auto moves = cfg.moves == MoveSet::Nielsen ? nielsen_generators(n) : whitehead_automorphisms(n);
  const bool renorm = cfg.renormalize.value_or(rep.field() == Field::SU2);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
  WalkResult out;
  out.columns = trace_columns(n);
  Representation current = rep;
  out.samples.push_back(WalkSample{0, 0, trace_sample(current)});
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    const auto& move = moves[pick(rng)];
    const bool record = step % cfg.stride == 0;
    bool restart = false;
    std::vector<Scalar> traces;
    try {
      current = act(move, current);
      if (renorm) current = renormalize(current);
      restart = escaped(current, cfg);
      if (!restart && record) traces = trace_sample(current);
    } catch (const NumericalError&) {
      // Determinant drift or overflow: treated like an escape.
      restart = true;
    }
    if (restart) {
      current = rep;
      ++out.restarts;
      out.restart_steps.push_back(step);
      if (record) traces = trace_sample(current);
    }
    if (record) out.samples.push_back(WalkSample{step, out.restarts, std::move(traces)});
  }
  return out;
}

Scalar commutator_trace(const Representation& rep) {
  if (rep.rank() != 2) throw std::invalid_argument("commutator_trace needs rank 2");
  const GroupElement& a = rep.image(1);
  const GroupElement& b = rep.image(2);
  return (a * b * a.inverse() * b.inverse()).trace();
}

namespace {

struct Node {
  std::vector<Letter> letters;
  GroupElement value;
  double distance;
};

// Entries (real and imaginary parts of the first row, or all four real
// entries) differ by at most the operator distance, so cells of side h find
// every element within h of a query in the 3^4 surrounding cells.
using Cell = std::array<long long, 4>;

struct CellHash {
  std::size_t operator()(const Cell& c) const {
    std::size_t h = 0;
    for (long long v : c) h = h * 0x9E3779B97F4A7C15ull + static_cast<std::size_t>(v);
    return h;
  }
};

std::array<double, 4> grid_coords(const GroupElement& g) {
  if (g.field() == Field::Real)
    return {g.entry(0, 0).real(), g.entry(0, 1).real(), g.entry(1, 0).real(), g.entry(1, 1).real()};
  return {g.entry(0, 0).real(), g.entry(0, 0).imag(), g.entry(0, 1).real(), g.entry(0, 1).imag()};
}

class SuffixGrid {
 public:
  explicit SuffixGrid(double side) : side_(side) {}

  void insert(std::size_t index, const GroupElement& g) { cells_[cell_of(g)].push_back(index); }

  // Calls f(index) for every entry within `radius` cells of g.
  template <class F>
  void near(const GroupElement& g, int radius, F&& f) const {
    const Cell c = cell_of(g);
    Cell q;
    for (q[0] = c[0] - radius; q[0] <= c[0] + radius; ++q[0])
      for (q[1] = c[1] - radius; q[1] <= c[1] + radius; ++q[1])
        for (q[2] = c[2] - radius; q[2] <= c[2] + radius; ++q[2])
          for (q[3] = c[3] - radius; q[3] <= c[3] + radius; ++q[3]) {
            const auto it = cells_.find(q);
            if (it == cells_.end()) continue;
            for (std::size_t i : it->second) f(i);
          }
  }

 private:
  Cell cell_of(const GroupElement& g) const {
    const auto x = grid_coords(g);
    Cell c;
    for (int i = 0; i < 4; ++i) c[static_cast<std::size_t>(i)] = static_cast<long long>(std::floor(x[static_cast<std::size_t>(i)] / side_));
    return c;
  }

  double side_;
  std::unordered_map<Cell, std::vector<std::size_t>, CellHash> cells_;
};

Approximation approximate_from(std::span<const GroupElement> gens, const GroupElement& prefix,
                               const GroupElement& target, double epsilon, const SearchBudget& budget) {
  budget.validate();
  if (gens.empty()) throw std::invalid_argument("approximation needs generators");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const int k = static_cast<int>(gens.size());
  std::vector<GroupElement> inverses;
  for (const auto& g : gens) inverses.push_back(g.inverse());
  auto distance = [&](const GroupElement& w) { return operator_distance(prefix * w, target); };
  const auto start = std::chrono::steady_clock::now();
  const std::size_t width = std::clamp<std::size_t>(
      budget.max_candidates / static_cast<std::size_t>(budget.max_word_length * 2 * k), 8, 4096);

  Approximation out;
  const auto id = GroupElement::identity(gens.front().field());
  // Short suffix words in BFS order, skipping any within epsilon / 64 of one
  // already kept, hashed on an epsilon grid.
  const std::size_t table_cap = std::clamp<std::size_t>(budget.max_candidates / 16, 16, std::size_t{1} << 15);
  const double merge = epsilon / 64.0;
  std::vector<Node> table{Node{{}, id, 0.0}};
  SuffixGrid grid(epsilon);
  grid.insert(0, id);
  for (std::size_t head = 0; head < table.size() && table.size() < table_cap; ++head)
    for (int v = 0; v < 2 * k && table.size() < table_cap; ++v) {
      const Letter l = Letter::from_vertex(v);
      if (!table[head].letters.empty() && table[head].letters.back() == l.inverse()) continue;
      if (static_cast<int>(table[head].letters.size()) >= budget.max_word_length) continue;
      const auto i = static_cast<std::size_t>(l.generator() - 1);
      GroupElement value;
      try {
        value = table[head].value * (l.inverted() ? inverses[i] : gens[i]);
      } catch (const NumericalError&) {
        continue;
      }
      bool seen = false;
      grid.near(value, 1, [&](std::size_t j) { seen = seen || operator_distance(table[j].value, value) < merge; });
      if (seen) continue;
      Node child{table[head].letters, value, 0.0};
      child.letters.push_back(l);
      grid.insert(table.size(), child.value);
      table.push_back(std::move(child));
    }

  std::vector<Node> beam{Node{{}, id, 0.0}};
  beam[0].distance = distance(beam[0].value);
  Node best = beam[0];
  out.candidates = 1;
  auto exhausted = [&] {
    return out.candidates >= budget.max_candidates || std::chrono::steady_clock::now() - start > budget.time_cap;
  };
  // Every prefix p is matched against the suffixes t near (prefix p)^-1 target.
  // |prefix p t - target| < epsilon forces |t - (prefix p)^-1 target| <
  // epsilon |(prefix p)^-1|, which bounds the cell radius (capped at 2 cells,
  // so far from the compact case the match is only heuristic).
  auto complete = [&](const std::vector<Node>& prefixes) {
    for (const auto& pre : prefixes) {
      if (best.distance < epsilon || exhausted()) return;
      GroupElement lead, wanted;
      try {
        lead = prefix * pre.value;
        wanted = lead.inverse() * target;
      } catch (const NumericalError&) {
        continue;
      }
      const int radius = std::clamp(static_cast<int>(std::ceil(operator_norm(lead.inverse()))), 1, 2);
      grid.near(wanted, radius, [&](std::size_t j) {
        const Node& t = table[j];
        if (t.letters.empty() || best.distance < epsilon) return;
        if (pre.letters.size() + t.letters.size() > static_cast<std::size_t>(budget.max_word_length)) return;
        double d;
        try {
          d = operator_distance(lead * t.value, target);
        } catch (const NumericalError&) {
          return;
        }
        ++out.candidates;
        if (d < best.distance) {
          std::vector<Letter> letters = pre.letters;
          letters.insert(letters.end(), t.letters.begin(), t.letters.end());
          best = Node{std::move(letters), pre.value * t.value, d};
        }
      });
    }
  };
  if (best.distance >= epsilon) complete(beam);
  for (int len = 1; len <= budget.max_word_length && best.distance >= epsilon && !exhausted(); ++len) {
    std::vector<Node> children;
    for (const auto& node : beam) {
      for (int v = 0; v < 2 * k; ++v) {
        const Letter l = Letter::from_vertex(v);
        if (!node.letters.empty() && node.letters.back() == l.inverse()) continue;
        const auto i = static_cast<std::size_t>(l.generator() - 1);
        Node child{node.letters, GroupElement(), 0.0};
        try {
          child.value = node.value * (l.inverted() ? inverses[i] : gens[i]);
          child.distance = distance(child.value);
        } catch (const NumericalError&) {
          continue;
        }
        child.letters.push_back(l);
        ++out.candidates;
        if (child.distance < best.distance) best = child;
        children.push_back(std::move(child));
      }
    }
    if (best.distance < epsilon || exhausted()) break;
    const std::size_t keep = std::min(width, children.size());
    std::partial_sort(children.begin(), children.begin() + static_cast<std::ptrdiff_t>(keep), children.end(),
                      [](const Node& a, const Node& b) { return a.distance < b.distance; });
    children.resize(keep);
    beam.swap(children);
    if (static_cast<int>(beam.front().letters.size()) < budget.max_word_length) complete(beam);
  }
  out.word = reduce(k, best.letters);
  // The stored claim is the distance of the re-evaluated word.
  out.distance = distance(evaluate(gens, out.word));
  out.success = out.distance < epsilon;
  return out;
}

}  // namespace

Approximation approximate_element(std::span<const GroupElement> generators, const GroupElement& target, double epsilon,
                                  const SearchBudget& budget) {
  if (generators.empty()) throw std::invalid_argument("approximation needs generators");
  return approximate_from(generators, GroupElement::identity(generators.front().field()), target, epsilon, budget);
}

std::vector<double> coordinate_distances(const Representation& a, const Representation& b) {
  if (a.rank() != b.rank()) throw std::invalid_argument("rank mismatch");
  std::vector<double> out;
  for (int i = 1; i <= a.rank(); ++i) out.push_back(operator_distance(a.image(i), b.image(i)));
  return out;
}

SteerResult steer(const Representation& phi, const Representation& psi, double epsilon, const SearchBudget& budget) {
  const int n = phi.rank();
  if (psi.rank() != n) throw std::invalid_argument("steer needs equal ranks");
  if (phi.field() != psi.field()) throw std::invalid_argument("steer needs equal fields");
  if (n < 2) throw std::invalid_argument("steer needs rank >= 2");
  SteerResult out;
  FreeAutomorphism total = FreeAutomorphism::identity(n);
  Representation current = phi;
  out.success = true;
  for (int k = n; k >= 1; --k) {
    std::vector<GroupElement> others;
    std::vector<int> index;
    for (int i = 1; i <= n; ++i)
      if (i != k) {
        others.push_back(current.image(i));
        index.push_back(i);
      }
    SteerStage stage;
    stage.coordinate = k;
    const GroupElement& here = current.image(k);
    const GroupElement& goal = psi.image(k);
    if (operator_distance(here, goal) >= epsilon) {
      const auto verdict = certify_dense(others, budget);
      stage.density = describe(verdict);
      if (!verdict.dense())
        throw SteerError(k, "stage " + std::to_string(k) + ": tuple of the other coordinates is not certified dense: " +
                                stage.density);
    } else {
      stage.density = "skipped: coordinate already within epsilon";
    }
    const auto approx = approximate_from(others, here, goal, epsilon, budget);
    std::vector<Letter> letters;
    for (Letter l : approx.word.letters()) letters.emplace_back(index[static_cast<std::size_t>(l.generator() - 1)], l.inverted());
    stage.word = reduce(n, letters);
    stage.distance = approx.distance;
    stage.success = approx.success;
    out.success = out.success && approx.success;
    // act(tau, rho)(x_k) = rho(tau^-1(x_k)) = rho(x_k w) for tau: x_k -> x_k w^-1.
    const FreeAutomorphism tau = FreeAutomorphism::right_transvection(n, k, stage.word.inverse());
    current = act(tau, current);
    total = compose(tau, total);
    out.stages.push_back(std::move(stage));
  }
  out.automorphism = total;
  out.distances = coordinate_distances(act(total, phi), psi);
  for (double d : out.distances)
    if (!(d < epsilon)) out.success = false;
  return out;
}

double haar_trace_density(double t) {
  if (t <= -2.0 || t >= 2.0) return 0.0;
  return std::sqrt(4.0 - t * t) / (2.0 * std::numbers::pi);
}

double haar_trace_cdf(double t) {
  if (t <= -2.0) return 0.0;
  if (t >= 2.0) return 1.0;
  return 0.5 + t * std::sqrt(4.0 - t * t) / (4.0 * std::numbers::pi) + std::asin(t / 2.0) / std::numbers::pi;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("KS test needs a nonempty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  KsResult r;
  r.statistic = d;
  r.n = sample.size();
  // Stephens' small-sample correction of the asymptotic distribution.
  const double sn = std::sqrt(n);
  r.p_value = kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d);
  return r;
}

std::vector<GroupElement> rejection_sampled_haar(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<GroupElement> out;
  out.reserve(count);
  while (out.size() < count) {
    const double w = u(rng), x = u(rng), y = u(rng), z = u(rng);
    const double r2 = w * w + x * x + y * y + z * z;
    if (r2 > 1.0 || r2 < 1e-12) continue;
    out.push_back(GroupElement::su2(Scalar(w, x), Scalar(y, z)));
  }
  return out;
}

}  // namespace redrep
