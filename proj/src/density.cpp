#include "redrep/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace redrep {

void SearchBudget::validate() const {
  if (max_word_length < 1 || max_candidates < 1 || time_cap.count() < 1 || nielsen_chain_length < 1)
    throw std::invalid_argument("search budget fields must be positive");
}

std::string to_string(NondiscretenessWitness::Kind k) {
  return k == NondiscretenessWitness::Kind::IrrationalElliptic ? "irrational-elliptic" : "small-noncommuting";
}

std::string to_string(Obstruction o) {
  switch (o) {
    case Obstruction::DiscreteSchottkyLike: return "discrete-schottky-like";
    case Obstruction::Elementary: return "elementary";
    case Obstruction::ReducibleSpan: return "reducible-span";
  }
  return "?";
}

std::string to_string(DensityVerdict::Kind k) {
  switch (k) {
    case DensityVerdict::Kind::Dense: return "Dense";
    case DensityVerdict::Kind::LikelyNotDense: return "LikelyNotDense";
    case DensityVerdict::Kind::Unknown: return "Unknown";
  }
  return "?";
}

std::string describe(const DensityVerdict& v) {
  std::ostringstream out;
  out << to_string(v.kind);
  if (v.kind == DensityVerdict::Kind::LikelyNotDense) out << "(" << to_string(v.reason) << ")";
  out << " candidates=" << v.report.candidates << " depth=" << v.report.deepest_length << " rank=" << v.report.ad_rank;
  if (!v.report.note.empty()) out << " note=" << v.report.note;
  return out.str();
}

namespace {

void check_generators(std::span<const GroupElement> s) {
  if (s.empty()) throw std::invalid_argument("density search needs a nonempty generating set");
  for (const auto& g : s)
    if (g.field() != s.front().field()) throw std::invalid_argument("generating set mixes fields");
}

// min over q <= qmax of |x - p/q|.
double rational_gap(double x, int qmax) {
  double best = std::abs(x);
  for (int q = 1; q <= qmax; ++q) best = std::min(best, std::abs(x - std::round(x * q) / q));
  return best;
}

std::optional<NondiscretenessWitness> elliptic_witness(const GroupElement& g, const Word& w, const WitnessParams& p) {
  if (classify(g).kind != IsometryKind::Elliptic) return std::nullopt;
  const double theta = rotation_angle(g);
  const double gap = rational_gap(theta / std::numbers::pi, p.max_denominator);
  if (!(gap > p.irrational_gap)) return std::nullopt;
  NondiscretenessWitness out;
  out.kind = NondiscretenessWitness::Kind::IrrationalElliptic;
  out.word = w;
  out.angle = theta;
  out.rational_gap = gap;
  return out;
}

double commutator_norm(const GroupElement& x, const GroupElement& y) {
  const GroupElement xy = x * y, yx = y * x;
  return operator_distance(xy, yx);
}

bool small_enough(double dist, const WitnessParams& p) { return dist > p.small_lo && dist < p.small_hi; }

bool companion_ok(const GroupElement& w, double dist, const GroupElement& c, const WitnessParams& p, double* comm) {
  const double value = commutator_norm(w, c);
  if (comm) *comm = value;
  return value >= p.noncommuting * dist * operator_norm(c);
}

struct Candidate {
  std::vector<Letter> letters;
  GroupElement value;
};

Word as_word(int rank, const std::vector<Letter>& letters) { return reduce(rank, letters); }

class Search {
 public:
  Search(std::span<const GroupElement> gens, const SearchBudget& budget, const WitnessParams& params)
      : gens_(gens.begin(), gens.end()),
        rank_(static_cast<int>(gens.size())),
        field_(gens.front().field()),
        budget_(budget),
        params_(params),
        span_(field_),
        rng_(budget.seed),
        start_(std::chrono::steady_clock::now()) {
    for (const auto& g : gens_) inverses_.push_back(g.inverse());
  }

  DensityVerdict run() {
    DensityVerdict v;
    std::vector<Candidate> level{Candidate{{}, GroupElement::identity(field_)}};
    const std::size_t per_level = std::max<std::size_t>(
        64, budget_.max_candidates / static_cast<std::size_t>(budget_.max_word_length));
    int last_growth = 0;
    for (int len = 1; len <= budget_.max_word_length && !out_of_budget(); ++len) {
      std::vector<Candidate> next;
      for (const auto& parent : level)
        for (int vtx = 0; vtx < 2 * rank_; ++vtx) {
          const Letter l = Letter::from_vertex(vtx);
          if (!parent.letters.empty() && parent.letters.back() == l.inverse()) continue;
          const auto i = static_cast<std::size_t>(l.generator() - 1);
          try {
            GroupElement value = parent.value * (l.inverted() ? inverses_[i] : gens_[i]);
            next.push_back(Candidate{parent.letters, value});
            next.back().letters.push_back(l);
          } catch (const NumericalError&) {
            // Entries left the representable range; the branch is dropped.
          }
        }
      if (next.size() > per_level) {
        std::shuffle(next.begin(), next.end(), rng_);
        next.resize(per_level);
        std::sort(next.begin(), next.end(), [](const Candidate& a, const Candidate& b) { return a.letters < b.letters; });
      }
      report_.deepest_length = len;
      for (auto& c : next) {
        if (out_of_budget()) break;
        ++report_.candidates;
        if (examine(c)) last_growth = len;
        if (done()) return finish(v);
      }
      pool_.insert(pool_.end(), next.begin(), next.end());
      search_near_pairs();
      if (done()) return finish(v);
      level.swap(next);
    }
    report_.ad_rank = span_.rank();
    report_.witness_found = witness_.has_value();
    report_.min_center_distance = min_center_;
    v.report = report_;
    const bool explored = report_.deepest_length >= std::min(4, budget_.max_word_length);
    if (!span_.full() && explored && report_.deepest_length - last_growth >= 2) {
      v.kind = DensityVerdict::Kind::LikelyNotDense;
      v.reason = Obstruction::ReducibleSpan;
      v.report.note = "Ad span rank plateaued below " + std::to_string(full_ad_real_rank(field_));
    } else if (span_.full() && !witness_ && explored && min_center_ >= 0.1 && min_pair_ >= 0.1) {
      v.kind = DensityVerdict::Kind::LikelyNotDense;
      v.reason = Obstruction::DiscreteSchottkyLike;
      v.report.note = "no element within 0.1 of the centre and no irrational elliptic";
    } else {
      v.kind = DensityVerdict::Kind::Unknown;
      v.report.note = report_.time_exhausted ? "time cap reached" : "candidate budget exhausted";
    }
    return v;
  }

 private:
  bool out_of_budget() {
    if (report_.candidates >= budget_.max_candidates) return true;
    if (std::chrono::steady_clock::now() - start_ > budget_.time_cap) {
      report_.time_exhausted = true;
      return true;
    }
    return false;
  }

  bool done() const { return span_.full() && witness_.has_value(); }

  // Returns true when the Ad span grew.
  bool examine(const Candidate& c) {
    bool grew = false;
    if (!span_.full() && span_.add(c.value)) {
      spanning_.push_back(as_word(rank_, c.letters));
      spanning_values_.push_back(c.value);
      grew = true;
    }
    const double dist = distance_from_center(c.value);
    if (dist > params_.small_lo) min_center_ = std::min(min_center_, dist);
    if (!witness_) {
      witness_ = elliptic_witness(c.value, as_word(rank_, c.letters), params_);
      if (!witness_ && field_ != Field::SU2) try_small(c.letters, c.value);
    }
    return grew;
  }

  void try_small(const std::vector<Letter>& letters, const GroupElement& value) {
    const double dist = distance_from_center(value);
    if (!small_enough(dist, params_)) return;
    auto check = [&](const Word& cw, const GroupElement& cv) {
      double comm = 0.0;
      if (!companion_ok(value, dist, cv, params_, &comm)) return false;
      NondiscretenessWitness w;
      w.kind = NondiscretenessWitness::Kind::SmallNoncommuting;
      w.word = as_word(rank_, letters);
      w.companion = cw;
      w.distance = dist;
      w.commutator = comm;
      witness_ = w;
      return true;
    };
    for (int i = 1; i <= rank_; ++i)
      if (check(Word::generator(rank_, i), gens_[static_cast<std::size_t>(i - 1)])) return;
    for (std::size_t i = 0; i < spanning_.size(); ++i)
      if (check(spanning_[i], spanning_values_[i])) return;
  }

  static std::vector<Letter> product_letters(const std::vector<Letter>& u, const std::vector<Letter>& v, bool invert_v) {
    std::vector<Letter> out = u;
    auto push = [&out](Letter l) {
      if (!out.empty() && out.back() == l.inverse())
        out.pop_back();
      else
        out.push_back(l);
    };
    if (invert_v) {
      for (auto it = v.rbegin(); it != v.rend(); ++it) push(it->inverse());
    } else {
      for (Letter l : v) push(l);
    }
    return out;
  }

  static std::vector<Letter> commutator_letters(const std::vector<Letter>& a, const std::vector<Letter>& b) {
    auto ab = product_letters(a, b, false);
    auto abA = product_letters(ab, a, true);
    return product_letters(abA, b, true);
  }

  // Pairs of candidates whose quotient lies near +-I, found by sorting random
  // projections of the normalised entries; then commutator descent.
  void search_near_pairs() {
    if (witness_ || pool_.size() < 2) return;
    const std::size_t n = pool_.size();
    std::vector<std::array<double, 8>> keys(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& g = pool_[i].value;
      double norm = std::sqrt(frobenius_norm2(g));
      // Fix the sign ambiguity of +-g by making the largest real part positive.
      const Scalar e[4] = {g.a(), g.b(), g.c(), g.d()};
      int lead = 0;
      for (int k = 1; k < 4; ++k)
        if (std::abs(e[k].real()) > std::abs(e[lead].real())) lead = k;
      if (e[lead].real() < 0) norm = -norm;
      for (int k = 0; k < 4; ++k) {
        keys[i][static_cast<std::size_t>(2 * k)] = e[k].real() / norm;
        keys[i][static_cast<std::size_t>(2 * k + 1)] = e[k].imag() / norm;
      }
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::size_t> order(n);
    struct Small {
      std::vector<Letter> letters;
      GroupElement value;
      double dist;
    };
    std::vector<Small> small;
    constexpr int kProjections = 4;
    constexpr std::size_t kWindow = 6;
    for (int p = 0; p < kProjections; ++p) {
      std::array<double, 8> dir;
      for (auto& d : dir) d = normal(rng_);
      std::vector<double> proj(n);
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < 8; ++k) s += dir[k] * keys[i][k];
        proj[i] = s;
      }
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&proj](std::size_t a, std::size_t b) { return proj[a] < proj[b]; });
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < std::min(n, i + 1 + kWindow); ++j) {
          const auto& u = pool_[order[i]];
          const auto& v = pool_[order[j]];
          GroupElement q;
          try {
            q = u.value * v.value.inverse();
          } catch (const NumericalError&) {
            continue;
          }
          const double dist = distance_from_center(q);
          if (dist <= params_.small_lo) continue;
          min_pair_ = std::min(min_pair_, dist);
          if (dist < 0.5) small.push_back(Small{product_letters(u.letters, v.letters, true), q, dist});
        }
    }
    if (small.empty()) return;
    std::sort(small.begin(), small.end(), [](const Small& a, const Small& b) { return a.dist < b.dist; });
    small.resize(std::min<std::size_t>(small.size(), 16));
    for (const auto& s : small) {
      if (witness_) return;
      try_small(s.letters, s.value);
    }
    // Commutators of near-identity elements are nearer the identity.
    for (std::size_t i = 0; i < small.size() && !witness_; ++i)
      for (std::size_t j = 0; j < small.size() && !witness_; ++j) {
        if (i == j) continue;
        auto e = small[i];
        const auto& f = small[j];
        for (int step = 0; step < 8 && !witness_; ++step) {
          GroupElement c;
          try {
            c = e.value * f.value * e.value.inverse() * f.value.inverse();
          } catch (const NumericalError&) {
            break;
          }
          const double dist = distance_from_center(c);
          if (dist <= params_.small_lo || dist >= e.dist) break;
          auto letters = commutator_letters(e.letters, f.letters);
          if (letters.size() > 4096) break;
          e = Small{std::move(letters), c, dist};
          min_pair_ = std::min(min_pair_, dist);
          try_small(e.letters, e.value);
        }
      }
  }

  DensityVerdict finish(DensityVerdict& v) {
    DensityCertificate cert;
    cert.generators = gens_;
    cert.spanning_words = spanning_;
    cert.measured_rank = span_.rank();
    cert.witness = *witness_;
    cert.params = params_;
    report_.ad_rank = span_.rank();
    report_.witness_found = true;
    report_.min_center_distance = min_center_;
    v.report = report_;
    const auto check = replay(cert);
    if (!check.ok) {
      v.kind = DensityVerdict::Kind::Unknown;
      v.report.note = "certificate failed replay: " + check.detail;
      return v;
    }
    cert.measured_rank = check.rank;
    v.kind = DensityVerdict::Kind::Dense;
    v.certificate = std::move(cert);
    return v;
  }

  std::vector<GroupElement> gens_, inverses_;
  int rank_;
  Field field_;
  SearchBudget budget_;
  WitnessParams params_;
  AdSpan span_;
  std::mt19937_64 rng_;
  std::chrono::steady_clock::time_point start_;
  BudgetReport report_;
  std::vector<Word> spanning_;
  std::vector<GroupElement> spanning_values_;
  std::optional<NondiscretenessWitness> witness_;
  std::vector<Candidate> pool_;
  double min_center_ = std::numeric_limits<double>::infinity();
  double min_pair_ = std::numeric_limits<double>::infinity();
};

DensityVerdict elementary(const char* note) {
  DensityVerdict v;
  v.kind = DensityVerdict::Kind::LikelyNotDense;
  v.reason = Obstruction::Elementary;
  v.report.note = note;
  return v;
}

std::vector<GroupElement> drop(const Representation& rep, int index) {
  std::vector<GroupElement> out;
  for (int i = 1; i <= rep.rank(); ++i)
    if (i != index) out.push_back(rep.image(i));
  return out;
}

}  // namespace

ReplayReport replay(const DensityCertificate& cert) {
  ReplayReport r;
  if (cert.generators.empty()) {
    r.detail = "no generators";
    return r;
  }
  const int rank = static_cast<int>(cert.generators.size());
  const Field f = cert.field();
  const std::span<const GroupElement> gens(cert.generators);
  try {
    if (cert.spanning_words.empty()) {
      r.detail = "no spanning words";
      return r;
    }
    std::vector<GroupElement> values;
    for (const auto& w : cert.spanning_words) {
      if (w.rank() != rank) throw std::invalid_argument("spanning word rank mismatch");
      values.push_back(evaluate(gens, w));
    }
    r.rank = ad_real_span_rank(values);
    if (r.rank != full_ad_real_rank(f)) {
      r.detail = "Ad span rank " + std::to_string(r.rank) + " < " + std::to_string(full_ad_real_rank(f));
      return r;
    }
    const auto& w = cert.witness;
    if (w.word.rank() != rank) throw std::invalid_argument("witness word rank mismatch");
    const GroupElement g = evaluate(gens, w.word);
    if (w.kind == NondiscretenessWitness::Kind::IrrationalElliptic) {
      const auto again = elliptic_witness(g, w.word, cert.params);
      if (!again) {
        r.detail = "witness word is not an irrational elliptic";
        return r;
      }
    } else {
      if (f == Field::SU2) {
        r.detail = "su2 certificates need an elliptic witness";
        return r;
      }
      if (w.companion.rank() != rank) throw std::invalid_argument("companion word rank mismatch");
      const double dist = distance_from_center(g);
      if (!small_enough(dist, cert.params)) {
        r.detail = "witness distance from centre outside the accepted window";
        return r;
      }
      if (!companion_ok(g, dist, evaluate(gens, w.companion), cert.params, nullptr)) {
        r.detail = "witness commutes with its companion";
        return r;
      }
    }
  } catch (const std::exception& e) {
    r.detail = e.what();
    return r;
  }
  r.ok = true;
  r.detail = "ok";
  return r;
}

bool pairwise_commuting(std::span<const GroupElement> elements, const Tolerance& tol) {
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      const double scale = std::max(1.0, operator_norm(elements[i]) * operator_norm(elements[j]));
      if (commutator_norm(elements[i], elements[j]) > tol.parabolic * scale) return false;
    }
  return true;
}

bool shares_fixed_point(std::span<const GroupElement> elements, const Tolerance& tol) {
  const GroupElement* pivot = nullptr;
  for (const auto& g : elements)
    if (distance_from_center(g) > tol.parabolic) {
      pivot = &g;
      break;
    }
  if (!pivot) return true;
  const Scalar a = pivot->a(), b = pivot->b(), c = pivot->c(), d = pivot->d();
  const Scalar t = a + d;
  const Scalar disc = std::sqrt(t * t - 4.0);
  std::vector<std::array<Scalar, 2>> vectors;
  for (const Scalar lambda : {(t + disc) / 2.0, (t - disc) / 2.0}) {
    const std::array<Scalar, 2> v1{b, lambda - a}, v2{lambda - d, c};
    const double n1 = std::hypot(std::abs(v1[0]), std::abs(v1[1]));
    const double n2 = std::hypot(std::abs(v2[0]), std::abs(v2[1]));
    const auto& v = n1 >= n2 ? v1 : v2;
    const double n = std::max(n1, n2);
    if (n == 0.0) {
      // Scalar-like block: every vector is an eigenvector; fall back to the axes.
      vectors.push_back({1.0, 0.0});
      vectors.push_back({0.0, 1.0});
      continue;
    }
    vectors.push_back({v[0] / n, v[1] / n});
  }
  for (const auto& v : vectors) {
    bool common = true;
    for (const auto& h : elements) {
      const Scalar hv0 = h.a() * v[0] + h.b() * v[1];
      const Scalar hv1 = h.c() * v[0] + h.d() * v[1];
      const double cross = std::abs(v[0] * hv1 - v[1] * hv0);
      if (cross > tol.parabolic * std::max(1.0, std::hypot(std::abs(hv0), std::abs(hv1)))) {
        common = false;
        break;
      }
    }
    if (common) return true;
  }
  return false;
}

DensityVerdict certify_dense(std::span<const GroupElement> generators, const SearchBudget& budget,
                             const WitnessParams& params) {
  check_generators(generators);
  budget.validate();
  if (std::all_of(generators.begin(), generators.end(),
                  [](const GroupElement& g) { return distance_from_center(g) <= default_tolerance().parabolic; }))
    return elementary("every generator is central");
  if (pairwise_commuting(generators)) return elementary("generators commute");
  if (shares_fixed_point(generators)) return elementary("generators share a fixed point");
  return Search(generators, budget, params).run();
}

DensityVerdict omega_member(std::span<const GroupElement> generators, const GroupElement& g, const SearchBudget& budget) {
  check_generators(generators);
  std::vector<GroupElement> all(generators.begin(), generators.end());
  all.push_back(g);
  return certify_dense(all, budget);
}

OmegaTildeResult omega_tilde_search(const Representation& rep, const SearchBudget& budget) {
  budget.validate();
  const int n = rep.rank();
  if (n < 3) throw std::invalid_argument("omega_tilde_search needs at least three coordinates");
  OmegaTildeResult out;
  const auto& images = rep.images();
  if (shares_fixed_point(images) || pairwise_commuting(images)) {
    out.obstruction = true;
    out.report = "all coordinates share a fixed point (elementary); search refused";
    return out;
  }
  std::mt19937_64 rng(budget.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<int> pick(1, n), length(1, 3);
  std::bernoulli_distribution flip(0.5);
  const double radii[] = {0.3, 0.1, 0.03};
  const std::size_t max_attempts = std::max<std::size_t>(4, std::min<std::size_t>(64, budget.max_candidates / 1000));
  const auto start = std::chrono::steady_clock::now();
  std::string last_block;
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    if (std::chrono::steady_clock::now() - start > budget.time_cap) break;
    ++out.attempts;
    GroupElement base = GroupElement::identity(rep.field());
    for (int k = length(rng); k > 0; --k) {
      const GroupElement& g = rep.image(pick(rng));
      base = base * (flip(rng) ? g.inverse() : g);
    }
    const double radius = radii[attempt % 3];
    const GroupElement candidate = base * random_near_identity(rep.field(), rng, radius);
    out.sampling_radius = radius;
    std::vector<DensityVerdict> verdicts;
    bool all_dense = true;
    for (int i = 1; i <= n && all_dense; ++i) {
      auto sub = drop(rep, i);
      SearchBudget b = budget;
      b.seed = budget.seed + static_cast<std::uint64_t>(1000 * attempt + static_cast<std::size_t>(i));
      verdicts.push_back(omega_member(sub, candidate, b));
      if (!verdicts.back().dense()) {
        all_dense = false;
        last_block = "subset dropping coordinate " + std::to_string(i) + ": " + describe(verdicts.back());
      }
    }
    if (all_dense) {
      out.witness = candidate;
      out.verdicts = std::move(verdicts);
      std::ostringstream msg;
      msg << "witness found after " << out.attempts << " attempts at sampling radius " << radius
          << " (radius is an untuned heuristic)";
      out.report = msg.str();
      return out;
    }
  }
  out.budget_exhausted = true;
  out.report = "budget exhausted after " + std::to_string(out.attempts) + " attempts; last block: " + last_block;
  return out;
}

StrongRedundancyReport strongly_redundant(const Representation& rep, const SearchBudget& budget) {
  if (rep.rank() < 3) throw std::invalid_argument("strong redundancy needs rank >= 3");
  StrongRedundancyReport out;
  out.strongly_redundant = true;
  for (int i = 1; i <= rep.rank(); ++i) {
    out.subtuples.push_back(certify_dense(drop(rep, i), budget));
    const auto& v = out.subtuples.back();
    if (!v.dense()) out.strongly_redundant = false;
    if (v.kind == DensityVerdict::Kind::Unknown) out.unknown = true;
  }
  return out;
}

RedundancyVerdict redundant_heuristic(const Representation& rep, const SearchBudget& budget) {
  const int n = rep.rank();
  if (n < 2) throw std::invalid_argument("redundancy needs rank >= 2");
  RedundancyVerdict out;
  auto try_basis = [&](const FreeAutomorphism& a) {
    const Representation moved = act(a, rep);
    for (int k = 1; k <= n; ++k) {
      auto v = certify_dense(drop(moved, k), budget);
      if (v.dense()) {
        out.redundant = true;
        out.basis = a;
        out.dropped = k;
        out.certificate = std::move(v.certificate);
        return true;
      }
    }
    return false;
  };
  if (try_basis(FreeAutomorphism::identity(n))) {
    out.detail = "dense subtuple in the given basis";
    return out;
  }
  const auto moves = nielsen_generators(n);
  std::vector<FreeAutomorphism> layer{FreeAutomorphism::identity(n)};
  for (int depth = 1; depth <= budget.nielsen_chain_length; ++depth) {
    std::vector<FreeAutomorphism> next;
    for (const auto& base : layer)
      for (const auto& m : moves) {
        FreeAutomorphism a = compose(m, base);
        if (try_basis(a)) {
          out.detail = "dense subtuple after a Nielsen chain of length " + std::to_string(depth);
          return out;
        }
        next.push_back(std::move(a));
      }
    layer.swap(next);
  }
  out.detail = "no dense proper subtuple found (inconclusive)";
  return out;
}

std::vector<GroupElement> mixed_tuple(const Representation& phi, const Representation& psi, int k) {
  if (phi.rank() != psi.rank()) throw std::invalid_argument("links needs equal ranks");
  if (phi.field() != psi.field()) throw std::invalid_argument("links needs equal fields");
  const int n = phi.rank();
  if (k < 1 || k >= n) throw std::invalid_argument("mixed tuple stage out of range");
  std::vector<GroupElement> out;
  for (int i = 1; i < k; ++i) out.push_back(phi.image(i));
  for (int i = k + 1; i <= n; ++i) out.push_back(psi.image(i));
  return out;
}

LinkReport links(const Representation& phi, const Representation& psi, const SearchBudget& budget) {
  if (phi.rank() != psi.rank()) throw std::invalid_argument("links needs equal ranks");
  LinkReport out;
  out.links = true;
  for (int k = 1; k < phi.rank(); ++k) {
    out.stages.push_back(certify_dense(mixed_tuple(phi, psi, k), budget));
    if (!out.stages.back().dense()) out.links = false;
  }
  return out;
}

}  // namespace redrep
