// redrep: command-line front end for the redundant-representation toolkit.
//
// Exit codes: 0 positive result, 1 negative result, 2 usage or input error,
// 3 inconclusive density verdict.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "redrep/density.hpp"
#include "redrep/dynamics.hpp"
#include "redrep/exact.hpp"
#include "redrep/io.hpp"
#include "redrep/nonmixing.hpp"
#include "redrep/sl2.hpp"
#include "redrep/whitehead.hpp"
#include "redrep/word.hpp"

using namespace redrep;

namespace {

constexpr int kPositive = 0;
constexpr int kNegative = 1;
constexpr int kError = 2;
constexpr int kUnknown = 3;

struct Common {
  std::uint64_t seed = 1;
  int budget_length = 10;
  std::size_t budget_candidates = 20000;
  long budget_time_ms = 20000;
  int budget_chain = 1;
  std::string out;

  SearchBudget budget() const {
    SearchBudget b;
    b.max_word_length = budget_length;
    b.max_candidates = budget_candidates;
    b.time_cap = std::chrono::milliseconds(budget_time_ms);
    b.seed = seed;
    b.nielsen_chain_length = budget_chain;
    b.validate();
    return b;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Seed for every stochastic step")->capture_default_str();
  app->add_option("--budget-length", c.budget_length, "Longest word explored by searches")->capture_default_str();
  app->add_option("--budget-candidates", c.budget_candidates, "Candidate cap for searches")->capture_default_str();
  app->add_option("--budget-time-ms", c.budget_time_ms, "Wall-clock cap for searches (ms)")->capture_default_str();
  app->add_option("--budget-chain", c.budget_chain, "Longest Nielsen chain in redundancy search")->capture_default_str();
  app->add_option("--out", c.out, "Output file (stdout when omitted)");
}

std::map<std::string, std::string> flag_map(const CLI::App* app) {
  std::map<std::string, std::string> flags;
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name == "-h") continue;
    if (opt->count() > 0) {
      std::string joined;
      for (const auto& r : opt->results()) joined += (joined.empty() ? "" : " ") + r;
      flags[name] = joined;
    } else if (!opt->get_default_str().empty()) {
      flags[name] = opt->get_default_str();
    }
  }
  return flags;
}

RunManifest manifest_for(const CLI::App* app, const std::string& name, std::uint64_t seed) {
  return make_manifest(name, flag_map(app), seed);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot write " + path);
  f << text;
}

// JSON outputs embed the manifest; any other file gets a sidecar.
void emit_json(const Common& c, RunManifest m, Json body) {
  m.finished = utc_timestamp();
  Json out;
  out["manifest"] = to_json(m);
  for (auto& [k, v] : body.items()) out[k] = v;
  const std::string text = out.dump(2) + "\n";
  if (c.out.empty())
    std::cout << text;
  else
    write_text(c.out, text);
}

void emit_sidecar(const std::string& path, RunManifest m) {
  m.finished = utc_timestamp();
  write_text(path + ".manifest.json", to_json(m).dump(2) + "\n");
}

Representation random_rep(Field f, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("--n must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<GroupElement> images;
  for (int i = 0; i < n; ++i) images.push_back(random_element(f, rng));
  return Representation(std::move(images));
}

Representation preset_rep(const std::string& preset) {
  if (preset == "discrete") return Representation({GroupElement::real(1, 2, 0, 1), GroupElement::real(1, 0, 2, 1)});
  if (preset == "rotation")
    return Representation({GroupElement::real(std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0)),
                           GroupElement::real(2, 1, 1, 1)});
  throw std::invalid_argument("unknown preset '" + preset + "' (expected discrete or rotation)");
}

// --- primitive -------------------------------------------------------------

struct PrimitiveArgs {
  Common c;
  int rank = 2;
  std::string word;
};

int run_primitive(const CLI::App* app, const PrimitiveArgs& a) {
  const Word w = parse_word(a.word, a.rank);
  const PrimitivityVerdict v = decide_primitive(w);
  Json body;
  body["word"] = to_string(w);
  body["basic_lemma_filter"] = basic_lemma_filter(w);
  body["verdict"] = to_json(v);
  body["certificate_verified"] = verify_primitivity_certificate(v);
  emit_json(a.c, manifest_for(app, "primitive", a.c.seed), body);
  if (!a.c.out.empty()) std::cout << (v.primitive() ? "Primitive" : "NotPrimitive") << "\n";
  return v.primitive() ? kPositive : kNegative;
}

// --- whgraph ---------------------------------------------------------------

struct WhgraphArgs {
  Common c;
  int rank = 2;
  std::vector<std::string> words;
};

int run_whgraph(const CLI::App* app, const WhgraphArgs& a) {
  std::vector<Word> words;
  for (const auto& s : a.words) words.push_back(parse_word(s, a.rank));
  const WhiteheadGraph g = build_graph(words, a.rank);
  const bool connected = is_connected(g);
  const auto cuts = cutpoints(g);
  std::ostringstream summary;
  summary << (connected ? "connected" : "disconnected") << ", " << cuts.size() << " cutpoints";
  for (int v : cuts) summary << " " << vertex_label(v);
  const std::string dot = to_dot(g);
  if (a.c.out.empty()) {
    std::cout << dot;
    std::cerr << summary.str() << "\n";
  } else {
    write_text(a.c.out, dot);
    emit_sidecar(a.c.out, manifest_for(app, "whgraph", a.c.seed));
    std::cout << summary.str() << "\n";
  }
  return kPositive;
}

// --- density ---------------------------------------------------------------

struct DensityArgs {
  Common c;
  std::string rep_file;
  std::string preset;
  std::string group = "real";
  int n = 2;
  std::string cert_file;
};

int run_density_certify(const CLI::App* app, const DensityArgs& a) {
  Representation rep = !a.rep_file.empty()  ? representation_from_json(read_json_file(a.rep_file))
                       : !a.preset.empty()  ? preset_rep(a.preset)
                                            : random_rep(parse_field(a.group), a.n, a.c.seed);
  const DensityVerdict v = certify_dense(rep.images(), a.c.budget());
  Json body;
  body["representation"] = to_json(rep);
  body["summary"] = describe(v);
  body["verdict"] = to_json(v);
  emit_json(a.c, manifest_for(app, "density certify", a.c.seed), body);
  std::cerr << describe(v) << "\n";
  if (v.dense()) return kPositive;
  return v.kind == DensityVerdict::Kind::LikelyNotDense ? kNegative : kUnknown;
}

int run_density_replay(const DensityArgs& a) {
  const Json j = read_json_file(a.cert_file);
  const Json* node = &j;
  if (node->contains("verdict")) node = &node->at("verdict");
  if (node->contains("certificate")) node = &node->at("certificate");
  if (node->is_null()) throw std::invalid_argument("file carries no certificate");
  const ReplayReport r = replay(certificate_from_json(*node));
  std::cout << (r.ok ? "verified" : "rejected") << " rank=" << r.rank << " " << r.detail << "\n";
  return r.ok ? kPositive : kNegative;
}

// --- walk ------------------------------------------------------------------

struct WalkArgs {
  Common c;
  std::string group = "su2";
  int n = 3;
  std::size_t steps = 1000;
  std::size_t stride = 100;
  std::string moves = "nielsen";
  std::string rep_file;
  double overflow_guard = 1e12;
  double drift_guard = 1e-10;
  double alpha = 0.01;
};

int run_walk(const CLI::App* app, const WalkArgs& a) {
  const Representation rep = a.rep_file.empty() ? random_rep(parse_field(a.group), a.n, a.c.seed)
                                                : representation_from_json(read_json_file(a.rep_file));
  WalkConfig cfg;
  cfg.steps = a.steps;
  cfg.seed = a.c.seed;
  cfg.moves = parse_move_set(a.moves);
  cfg.stride = a.stride;
  cfg.overflow_guard = a.overflow_guard;
  cfg.drift_guard = a.drift_guard;
  const WalkResult w = random_walk(rep, cfg);
  std::ostream* report = &std::cout;
  if (a.c.out.empty()) {
    write_walk_csv(std::cout, w, rep.field());
    report = &std::cerr;
  } else {
    std::ofstream f(a.c.out);
    if (!f) throw std::invalid_argument("cannot write " + a.c.out);
    write_walk_csv(f, w, rep.field());
    emit_sidecar(a.c.out, manifest_for(app, "walk", a.c.seed));
  }
  *report << "samples=" << w.samples.size() << " restarts=" << w.restarts << "\n";
  if (rep.field() == Field::SU2) {
    double min_p = 1.0;
    for (std::size_t col = 0; col < w.columns.size(); ++col) {
      std::vector<double> xs;
      for (const auto& s : w.samples) xs.push_back(s.traces[col].real());
      const KsResult ks = ks_test(xs, haar_trace_cdf);
      min_p = std::min(min_p, ks.p_value);
      *report << "ks column=" << w.columns[col] << " D=" << ks.statistic << " p=" << ks.p_value << " n=" << ks.n
              << "\n";
    }
    *report << "ks min_p=" << min_p << " alpha=" << a.alpha << (min_p > a.alpha ? " pass" : " fail") << "\n";
  }
  return kPositive;
}

// --- steer -----------------------------------------------------------------

struct SteerArgs {
  Common c;
  std::string group = "su2";
  int n = 3;
  double epsilon = 0.15;
  std::string phi_file, psi_file;
};

int run_steer(const CLI::App* app, const SteerArgs& a) {
  const Field f = parse_field(a.group);
  const Representation phi =
      a.phi_file.empty() ? random_rep(f, a.n, a.c.seed) : representation_from_json(read_json_file(a.phi_file));
  const Representation psi =
      a.psi_file.empty() ? random_rep(f, a.n, a.c.seed + 1) : representation_from_json(read_json_file(a.psi_file));
  Json body;
  body["phi"] = to_json(phi);
  body["psi"] = to_json(psi);
  body["epsilon"] = a.epsilon;
  try {
    const SteerResult r = steer(phi, psi, a.epsilon, a.c.budget());
    const auto replayed = coordinate_distances(act(r.automorphism, phi), psi);
    double worst = 0.0;
    for (double d : replayed) worst = std::max(worst, d);
    body["result"] = to_json(r);
    body["replay_max_distance"] = worst;
    emit_json(a.c, manifest_for(app, "steer", a.c.seed), body);
    std::cerr << (r.success ? "steered" : "not steered") << " max_distance=" << worst << "\n";
    return r.success && worst <= a.epsilon ? kPositive : kNegative;
  } catch (const SteerError& e) {
    body["error"] = {{"stage", e.stage()}, {"what", e.what()}};
    emit_json(a.c, manifest_for(app, "steer", a.c.seed), body);
    std::cerr << "steer failed at stage " << e.stage() << ": " << e.what() << "\n";
    return kNegative;
  }
}

// --- nonmixing demo / ps2 probe ----------------------------------------------

struct ProbeArgs {
  Common c;
  int L = 12;
  double K = 10.0;
  int window = 2;
  int max_m = 10;
  std::string csv;
  std::string rho1_file, rho2_file;
};

std::string summary_line(const PS2Report& r) {
  std::ostringstream s;
  s << "min max-ratio " << r.min_max_ratio << " at [" << (r.argmin ? to_string(r.argmin->canonical()) : "") << "] over "
    << r.records.size() << " classes (L=" << r.options.max_length << "); zero-ratio classes: rho1 "
    << r.zero_ratio[0].size() << ", rho2 " << r.zero_ratio[1].size();
  return s.str();
}

void write_rows(const CLI::App* app, const ProbeArgs& a, const PS2Report& r, const std::string& name) {
  if (a.csv.empty()) return;
  std::ofstream f(a.csv);
  if (!f) throw std::invalid_argument("cannot write " + a.csv);
  write_ps2_csv(f, r);
  emit_sidecar(a.csv, manifest_for(app, name, a.c.seed));
}

int run_nonmixing(const CLI::App* app, const ProbeArgs& a) {
  const PuncturedSphereRep rho0 = build_fuchsian_4punctured();
  if (!punctures_parabolic(rho0)) throw NumericalError("base representation punctures are not parabolic");
  const Word g1 = default_g1(3), g2 = default_g2(3);
  const auto m1 = smallest_containing_m(1, g1, rho0.punctures, a.max_m);
  const auto m2 = smallest_containing_m(2, g2, rho0.punctures, a.max_m);
  if (!m1 || !m2) throw std::invalid_argument("no m <= --max-m passes puncture containment");
  const int m = std::max(*m1, *m2);
  const TwistedPair tp = twisted_pair(rho0, m, g1, g2);
  const PS2Report r = ps2_probe(tp.rho1, tp.rho2, {a.L, a.K, a.window});
  Json body;
  body["m"] = m;
  body["g1"] = to_string(g1);
  body["g2"] = to_string(g2);
  body["pair_graph"] = pair_graph_check(g1, g2).ok;
  body["rho0"] = to_json(rho0.rep);
  body["phi1"] = to_json(tp.phi1);
  body["phi2"] = to_json(tp.phi2);
  body["rho1"] = to_json(tp.rho1);
  body["rho2"] = to_json(tp.rho2);
  body["report"] = to_json(r);
  emit_json(a.c, manifest_for(app, "nonmixing demo", a.c.seed), body);
  write_rows(app, a, r, "nonmixing demo");
  (a.c.out.empty() ? std::cerr : std::cout) << "m=" << m << "; " << summary_line(r) << "\n";
  const bool ok = r.min_max_ratio > 0.0 && !r.zero_ratio[0].empty() && !r.zero_ratio[1].empty();
  return ok ? kPositive : kNegative;
}

int run_ps2(const CLI::App* app, const ProbeArgs& a) {
  const Representation rho1 = representation_from_json(read_json_file(a.rho1_file));
  const Representation rho2 = representation_from_json(read_json_file(a.rho2_file));
  const PS2Report r = ps2_probe(rho1, rho2, {a.L, a.K, a.window});
  Json body;
  body["report"] = to_json(r);
  emit_json(a.c, manifest_for(app, "ps2 probe", a.c.seed), body);
  write_rows(app, a, r, "ps2 probe");
  (a.c.out.empty() ? std::cerr : std::cout) << summary_line(r) << "\n";
  return kPositive;
}

void add_probe_options(CLI::App* cmd, ProbeArgs& a) {
  add_common(cmd, a.c);
  cmd->add_option("--L", a.L, "Length cap for primitive classes (<= 15)")->capture_default_str();
  cmd->add_option("--K", a.K, "Quasi-geodesic constant for the axis check")->capture_default_str();
  cmd->add_option("--window", a.window, "Axis samples span window * ||c|| steps")->capture_default_str();
  cmd->add_option("--csv", a.csv, "Per-class rows as CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aut(F_n) actions on SL2 representations: Whitehead combinatorics, density, dynamics, PS2 probes"};
  app.require_subcommand(1);

  PrimitiveArgs prim;
  auto* cmd_prim = app.add_subcommand("primitive", "Decide primitivity (exit 0 primitive, 1 not, 2 error)");
  add_common(cmd_prim, prim.c);
  cmd_prim->add_option("--rank", prim.rank, "Rank n of F_n")->capture_default_str();
  cmd_prim->add_option("word", prim.word, "Word such as \"x1 x2^-1\"")->required();

  WhgraphArgs wh;
  auto* cmd_wh = app.add_subcommand("whgraph", "Whitehead graph of a word set as DOT");
  add_common(cmd_wh, wh.c);
  cmd_wh->add_option("--rank", wh.rank, "Rank n of F_n")->capture_default_str();
  cmd_wh->add_option("words", wh.words, "Words; the graph is their union");

  DensityArgs den;
  auto* cmd_den = app.add_subcommand("density", "Density certification");
  cmd_den->require_subcommand(1);
  auto* cmd_cert = cmd_den->add_subcommand("certify", "Search for a density certificate (exit 0 dense, 1 likely not, 3 unknown)");
  add_common(cmd_cert, den.c);
  cmd_cert->add_option("--rep", den.rep_file, "Representation JSON");
  cmd_cert->add_option("--preset", den.preset, "discrete or rotation");
  cmd_cert->add_option("--group", den.group, "real, complex or su2 for a seeded random tuple")->capture_default_str();
  cmd_cert->add_option("--n", den.n, "Tuple size for a random tuple")->capture_default_str();
  auto* cmd_replay = cmd_den->add_subcommand("replay", "Re-verify a certificate (exit 0 iff it verifies)");
  add_common(cmd_replay, den.c);
  cmd_replay->add_option("certificate", den.cert_file, "Certificate or certify output JSON")->required();

  WalkArgs walk;
  auto* cmd_walk = app.add_subcommand("walk", "Product-replacement random walk; CSV of trace samples");
  add_common(cmd_walk, walk.c);
  cmd_walk->add_option("--group", walk.group, "real, complex or su2")->capture_default_str();
  cmd_walk->add_option("--n", walk.n, "Rank")->capture_default_str();
  cmd_walk->add_option("--steps", walk.steps, "Walk length")->capture_default_str();
  cmd_walk->add_option("--stride", walk.stride, "Sample every stride steps")->capture_default_str();
  cmd_walk->add_option("--moves", walk.moves, "nielsen or whitehead")->capture_default_str();
  cmd_walk->add_option("--rep", walk.rep_file, "Initial representation JSON (random when omitted)");
  cmd_walk->add_option("--overflow-guard", walk.overflow_guard, "Restart when an entry exceeds this")->capture_default_str();
  cmd_walk->add_option("--drift-guard", walk.drift_guard, "Restart when |det - 1| exceeds this")->capture_default_str();
  cmd_walk->add_option("--alpha", walk.alpha, "KS significance level (su2)")->capture_default_str();

  SteerArgs st;
  auto* cmd_steer = app.add_subcommand("steer", "Steer phi towards psi by an automorphism (exit 0 on success)");
  add_common(cmd_steer, st.c);
  cmd_steer->add_option("--group", st.group, "Field of the random tuples")->capture_default_str();
  cmd_steer->add_option("--n", st.n, "Rank of the random tuples")->capture_default_str();
  cmd_steer->add_option("--epsilon", st.epsilon, "Coordinatewise target distance")->capture_default_str();
  cmd_steer->add_option("--phi", st.phi_file, "Starting representation JSON");
  cmd_steer->add_option("--psi", st.psi_file, "Target representation JSON");

  ProbeArgs nm;
  auto* cmd_nm = app.add_subcommand("nonmixing", "Punctured-sphere twisting construction");
  cmd_nm->require_subcommand(1);
  auto* cmd_demo = cmd_nm->add_subcommand("demo", "Full pipeline: rho0, smallest m, twisted pair, PS2 probe");
  add_probe_options(cmd_demo, nm);
  cmd_demo->add_option("--max-m", nm.max_m, "Largest twist exponent searched")->capture_default_str();

  ProbeArgs ps;
  auto* cmd_ps2 = app.add_subcommand("ps2", "PS2 probes");
  cmd_ps2->require_subcommand(1);
  auto* cmd_probe = cmd_ps2->add_subcommand("probe", "Length ratios and axis checks for a pair of representations");
  add_probe_options(cmd_probe, ps);
  cmd_probe->add_option("--rho1", ps.rho1_file, "First representation JSON")->required();
  cmd_probe->add_option("--rho2", ps.rho2_file, "Second representation JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (cmd_prim->parsed()) return run_primitive(cmd_prim, prim);
    if (cmd_wh->parsed()) return run_whgraph(cmd_wh, wh);
    if (cmd_cert->parsed()) return run_density_certify(cmd_cert, den);
    if (cmd_replay->parsed()) return run_density_replay(den);
    if (cmd_walk->parsed()) return run_walk(cmd_walk, walk);
    if (cmd_steer->parsed()) return run_steer(cmd_steer, st);
    if (cmd_demo->parsed()) return run_nonmixing(cmd_demo, nm);
    if (cmd_probe->parsed()) return run_ps2(cmd_probe, ps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
