#include "redrep/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Core>
#include <gmp.h>

namespace redrep {

namespace {

// JSON has no inf/nan; they travel as strings.
Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double get_num(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("expected a number, got " + j.dump());
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json word_json(const Word& w) { return to_string(w); }
Word word_from(const Json& j, int rank) { return parse_word(j.get<std::string>(), rank); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

NondiscretenessWitness::Kind parse_witness_kind(const std::string& s) {
  for (auto k : {NondiscretenessWitness::Kind::IrrationalElliptic, NondiscretenessWitness::Kind::SmallNoncommuting})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown witness kind '" + s + "'");
}

DensityVerdict::Kind parse_verdict_kind(const std::string& s) {
  for (auto k : {DensityVerdict::Kind::Dense, DensityVerdict::Kind::LikelyNotDense, DensityVerdict::Kind::Unknown})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown verdict kind '" + s + "'");
}

Obstruction parse_obstruction(const std::string& s) {
  for (auto o : {Obstruction::DiscreteSchottkyLike, Obstruction::Elementary, Obstruction::ReducibleSpan})
    if (to_string(o) == s) return o;
  throw std::invalid_argument("unknown obstruction '" + s + "'");
}

}  // namespace

std::string library_version() { return "1.0.0"; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest make_manifest(const std::string& subcommand, std::map<std::string, std::string> flags, std::uint64_t seed) {
  RunManifest m;
  m.subcommand = subcommand;
  m.flags = std::move(flags);
  m.seed = seed;
  m.versions["redrep"] = library_version();
  m.versions["compiler"] = __VERSION__;
  m.versions["gmp"] = gmp_version;
  m.versions["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION);
  m.versions["nlohmann_json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH);
  m.started = utc_timestamp();
  return m;
}

Json to_json(const RunManifest& m) {
  Json j;
  j["subcommand"] = m.subcommand;
  j["flags"] = m.flags;
  j["seed"] = m.seed;
  j["versions"] = m.versions;
  j["started"] = m.started;
  j["finished"] = m.finished;
  return j;
}

RunManifest manifest_from_json(const Json& j) {
  RunManifest m;
  m.subcommand = j.at("subcommand").get<std::string>();
  m.flags = j.at("flags").get<std::map<std::string, std::string>>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.versions = j.at("versions").get<std::map<std::string, std::string>>();
  m.started = j.at("started").get<std::string>();
  m.finished = j.at("finished").get<std::string>();
  return m;
}

Json to_json(const GroupElement& g) {
  Json j;
  j["re"] = {g.a().real(), g.b().real(), g.c().real(), g.d().real()};
  if (g.field() != Field::Real) j["im"] = {g.a().imag(), g.b().imag(), g.c().imag(), g.d().imag()};
  return j;
}

GroupElement element_from_json(const Json& j, Field field) {
  const auto re = j.at("re").get<std::vector<double>>();
  std::vector<double> im(4, 0.0);
  if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
  if (re.size() != 4 || im.size() != 4) throw std::invalid_argument("matrix needs 4 entries");
  if (field == Field::Real && j.contains("im")) throw std::invalid_argument("real matrix with imaginary parts");
  return GroupElement(field, {re[0], im[0]}, {re[1], im[1]}, {re[2], im[2]}, {re[3], im[3]});
}

Json to_json(const Representation& rep) {
  Json j;
  j["field"] = to_string(rep.field());
  j["rank"] = rep.rank();
  j["images"] = Json::array();
  for (const auto& g : rep.images()) j["images"].push_back(to_json(g));
  return j;
}

Representation representation_from_json(const Json& j) {
  const Field f = parse_field(j.at("field").get<std::string>());
  std::vector<GroupElement> images;
  for (const auto& e : j.at("images")) images.push_back(element_from_json(e, f));
  if (static_cast<int>(images.size()) != j.at("rank").get<int>()) throw std::invalid_argument("rank and image count differ");
  return Representation(std::move(images));
}

Json to_json(const FreeAutomorphism& a) {
  Json j;
  j["rank"] = a.rank();
  j["images"] = Json::array();
  j["inverse_images"] = Json::array();
  for (const auto& w : a.images()) j["images"].push_back(word_json(w));
  for (const auto& w : a.inverse_images()) j["inverse_images"].push_back(word_json(w));
  return j;
}

FreeAutomorphism automorphism_from_json(const Json& j) {
  const int n = j.at("rank").get<int>();
  std::vector<Word> images, inverse;
  for (const auto& w : j.at("images")) images.push_back(word_from(w, n));
  for (const auto& w : j.at("inverse_images")) inverse.push_back(word_from(w, n));
  return FreeAutomorphism(std::move(images), std::move(inverse));
}

Json to_json(const WhiteheadMove& m) {
  Json j;
  j["rank"] = m.rank;
  j["describe"] = m.describe();
  if (m.kind == WhiteheadMove::Kind::Permutation) {
    j["kind"] = "permutation";
    j["permutation"] = Json::array();
    for (Letter l : m.permutation) j["permutation"].push_back(l.signed_value());
  } else {
    j["kind"] = "multiplier";
    j["multiplier"] = m.multiplier.signed_value();
    j["subset"] = m.subset;
  }
  return j;
}

namespace {
Letter letter_from(int signed_value) {
  if (signed_value == 0) throw std::invalid_argument("letter 0 is not a generator");
  return Letter(signed_value < 0 ? -signed_value : signed_value, signed_value < 0);
}
}  // namespace

WhiteheadMove move_from_json(const Json& j) {
  const int n = j.at("rank").get<int>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "multiplier")
    return WhiteheadMove::second_kind(n, letter_from(j.at("multiplier").get<int>()), j.at("subset").get<std::uint32_t>());
  if (kind != "permutation") throw std::invalid_argument("unknown Whitehead move kind '" + kind + "'");
  WhiteheadMove m;
  m.kind = WhiteheadMove::Kind::Permutation;
  m.rank = n;
  for (const auto& v : j.at("permutation")) m.permutation.push_back(letter_from(v.get<int>()));
  if (static_cast<int>(m.permutation.size()) != n) throw std::invalid_argument("permutation needs n letters");
  return m;
}

Json to_json(const PrimitivityVerdict& v) {
  Json j;
  j["status"] = v.primitive() ? "Primitive" : "NotPrimitive";
  j["rank"] = v.input_core.rank();
  j["input_core"] = word_json(v.input_core);
  j["terminal"] = word_json(v.terminal);
  j["chain"] = Json::array();
  for (const auto& m : v.chain) j["chain"].push_back(to_json(m));
  return j;
}

PrimitivityVerdict primitivity_from_json(const Json& j) {
  PrimitivityVerdict v;
  const int n = j.at("rank").get<int>();
  const auto status = j.at("status").get<std::string>();
  if (status != "Primitive" && status != "NotPrimitive") throw std::invalid_argument("unknown status '" + status + "'");
  v.status = status == "Primitive" ? PrimitivityVerdict::Status::Primitive : PrimitivityVerdict::Status::NotPrimitive;
  v.input_core = word_from(j.at("input_core"), n);
  v.terminal = word_from(j.at("terminal"), n);
  for (const auto& m : j.at("chain")) v.chain.push_back(move_from_json(m));
  return v;
}

Json to_json(const DensityCertificate& c) {
  Json j;
  j["field"] = to_string(c.field());
  const int n = static_cast<int>(c.generators.size());
  j["rank"] = n;
  j["generators"] = Json::array();
  for (const auto& g : c.generators) j["generators"].push_back(to_json(g));
  j["spanning_words"] = Json::array();
  for (const auto& w : c.spanning_words) j["spanning_words"].push_back(word_json(w));
  j["measured_rank"] = c.measured_rank;
  const auto& w = c.witness;
  j["witness"] = {{"kind", to_string(w.kind)},   {"word", word_json(w.word)},
                  {"angle", num(w.angle)},       {"rational_gap", num(w.rational_gap)},
                  {"companion", word_json(w.companion)}, {"distance", num(w.distance)},
                  {"commutator", num(w.commutator)}};
  const auto& p = c.params;
  j["params"] = {{"irrational_gap", p.irrational_gap}, {"max_denominator", p.max_denominator},
                 {"small_lo", p.small_lo},             {"small_hi", p.small_hi},
                 {"noncommuting", p.noncommuting}};
  return j;
}

DensityCertificate certificate_from_json(const Json& j) {
  DensityCertificate c;
  const Field f = parse_field(j.at("field").get<std::string>());
  const int n = j.at("rank").get<int>();
  for (const auto& g : j.at("generators")) c.generators.push_back(element_from_json(g, f));
  if (static_cast<int>(c.generators.size()) != n || n < 1) throw std::invalid_argument("certificate rank mismatch");
  for (const auto& w : j.at("spanning_words")) c.spanning_words.push_back(word_from(w, n));
  c.measured_rank = j.at("measured_rank").get<int>();
  const auto& w = j.at("witness");
  c.witness.kind = parse_witness_kind(w.at("kind").get<std::string>());
  c.witness.word = word_from(w.at("word"), n);
  c.witness.angle = get_num(w.at("angle"));
  c.witness.rational_gap = get_num(w.at("rational_gap"));
  c.witness.companion = word_from(w.at("companion"), n);
  c.witness.distance = get_num(w.at("distance"));
  c.witness.commutator = get_num(w.at("commutator"));
  const auto& p = j.at("params");
  c.params.irrational_gap = p.at("irrational_gap").get<double>();
  c.params.max_denominator = p.at("max_denominator").get<int>();
  c.params.small_lo = p.at("small_lo").get<double>();
  c.params.small_hi = p.at("small_hi").get<double>();
  c.params.noncommuting = p.at("noncommuting").get<double>();
  return c;
}

Json to_json(const DensityVerdict& v) {
  Json j;
  j["kind"] = to_string(v.kind);
  if (v.kind == DensityVerdict::Kind::LikelyNotDense) j["reason"] = to_string(v.reason);
  const auto& r = v.report;
  j["report"] = {{"candidates", r.candidates},       {"deepest_length", r.deepest_length},
                 {"ad_rank", r.ad_rank},             {"witness_found", r.witness_found},
                 {"time_exhausted", r.time_exhausted}, {"min_center_distance", num(r.min_center_distance)},
                 {"note", r.note}};
  j["certificate"] = v.certificate ? to_json(*v.certificate) : Json(nullptr);
  return j;
}

DensityVerdict verdict_from_json(const Json& j) {
  DensityVerdict v;
  v.kind = parse_verdict_kind(j.at("kind").get<std::string>());
  if (j.contains("reason")) v.reason = parse_obstruction(j.at("reason").get<std::string>());
  const auto& r = j.at("report");
  v.report.candidates = r.at("candidates").get<std::size_t>();
  v.report.deepest_length = r.at("deepest_length").get<int>();
  v.report.ad_rank = r.at("ad_rank").get<int>();
  v.report.witness_found = r.at("witness_found").get<bool>();
  v.report.time_exhausted = r.at("time_exhausted").get<bool>();
  v.report.min_center_distance = get_num(r.at("min_center_distance"));
  v.report.note = r.at("note").get<std::string>();
  if (!j.at("certificate").is_null()) v.certificate = certificate_from_json(j.at("certificate"));
  return v;
}

Json to_json(const SteerResult& r) {
  Json j;
  j["success"] = r.success;
  j["automorphism"] = to_json(r.automorphism);
  j["distances"] = Json::array();
  for (double d : r.distances) j["distances"].push_back(num(d));
  j["stages"] = Json::array();
  for (const auto& s : r.stages)
    j["stages"].push_back({{"coordinate", s.coordinate},
                           {"word", word_json(s.word)},
                           {"distance", num(s.distance)},
                           {"success", s.success},
                           {"density", s.density}});
  return j;
}

SteerResult steer_result_from_json(const Json& j) {
  SteerResult r;
  r.success = j.at("success").get<bool>();
  r.automorphism = automorphism_from_json(j.at("automorphism"));
  const int n = r.automorphism.rank();
  for (const auto& d : j.at("distances")) r.distances.push_back(get_num(d));
  for (const auto& s : j.at("stages")) {
    SteerStage st;
    st.coordinate = s.at("coordinate").get<int>();
    st.word = word_from(s.at("word"), n);
    st.distance = get_num(s.at("distance"));
    st.success = s.at("success").get<bool>();
    st.density = s.at("density").get<std::string>();
    r.stages.push_back(std::move(st));
  }
  return r;
}

Json to_json(const PS2Report& r) {
  Json j;
  j["max_length"] = r.options.max_length;
  j["k"] = r.options.k;
  j["window"] = r.options.window;
  j["exact"] = r.exact;
  j["records"] = r.records.size();
  j["min_max_ratio"] = num(r.min_max_ratio);
  j["argmin"] = r.argmin ? word_json(r.argmin->canonical()) : Json(nullptr);
  std::size_t pass[2] = {0, 0};
  double worst_k[2] = {0.0, 0.0};
  for (const auto& rec : r.records)
    for (int s = 0; s < 2; ++s) {
      pass[s] += rec.axis_pass[s] ? 1 : 0;
      worst_k[s] = std::max(worst_k[s], rec.best_k[s]);
    }
  j["axis_pass"] = {pass[0], pass[1]};
  j["max_best_k"] = {num(worst_k[0]), num(worst_k[1])};
  j["zero_ratio"] = Json::array();
  for (int s = 0; s < 2; ++s) {
    Json list = Json::array();
    for (const auto& c : r.zero_ratio[s]) list.push_back(word_json(c.canonical()));
    j["zero_ratio"].push_back(list);
  }
  const int rank = r.records.empty() ? (r.argmin ? r.argmin->canonical().rank() : 0) : r.records.front().cls.canonical().rank();
  j["rank"] = rank;
  return j;
}

PS2Report ps2_summary_from_json(const Json& j) {
  PS2Report r;
  r.options.max_length = j.at("max_length").get<int>();
  r.options.k = j.at("k").get<double>();
  r.options.window = j.at("window").get<int>();
  r.exact = j.at("exact").get<bool>();
  r.min_max_ratio = get_num(j.at("min_max_ratio"));
  const int rank = j.at("rank").get<int>();
  if (!j.at("argmin").is_null()) r.argmin = ConjClass::of(word_from(j.at("argmin"), rank));
  const auto& z = j.at("zero_ratio");
  if (z.size() != 2) throw std::invalid_argument("zero_ratio needs two slots");
  for (int s = 0; s < 2; ++s)
    for (const auto& w : z.at(static_cast<std::size_t>(s))) r.zero_ratio[s].push_back(ConjClass::of(word_from(w, rank)));
  return r;
}

void write_ps2_csv(std::ostream& out, const PS2Report& r) {
  out << "class,length,ell1,ell2,ratio1,ratio2,max_ratio,axis1,axis2,best_k1,best_k2\n";
  for (const auto& rec : r.records) {
    out << to_string(rec.cls.canonical()) << ',' << rec.length << ',' << fmt(rec.ell[0]) << ',' << fmt(rec.ell[1])
        << ',' << fmt(rec.ratio[0]) << ',' << fmt(rec.ratio[1]) << ',' << fmt(rec.max_ratio()) << ','
        << (rec.axis_pass[0] ? 1 : 0) << ',' << (rec.axis_pass[1] ? 1 : 0) << ',' << fmt(rec.best_k[0]) << ','
        << fmt(rec.best_k[1]) << '\n';
  }
}

std::vector<PS2Record> read_ps2_csv(std::istream& in, int rank) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("class,", 0) != 0) throw std::invalid_argument("missing PS2 CSV header");
  std::vector<PS2Record> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 11) throw std::invalid_argument("PS2 CSV row needs 11 fields: " + line);
    PS2Record r;
    r.cls = ConjClass::of(parse_word(f[0], rank));
    r.length = std::stoul(f[1]);
    r.ell[0] = std::stod(f[2]);
    r.ell[1] = std::stod(f[3]);
    r.ratio[0] = std::stod(f[4]);
    r.ratio[1] = std::stod(f[5]);
    r.axis_pass[0] = f[7] == "1";
    r.axis_pass[1] = f[8] == "1";
    r.best_k[0] = std::stod(f[9]);
    r.best_k[1] = std::stod(f[10]);
    out.push_back(std::move(r));
  }
  return out;
}

void write_walk_csv(std::ostream& out, const WalkResult& w, Field field) {
  const bool complex = field == Field::Complex;
  out << "step,excursion";
  for (const auto& c : w.columns) {
    if (complex)
      out << ',' << c << ".re," << c << ".im";
    else
      out << ',' << c;
  }
  out << '\n';
  for (const auto& s : w.samples) {
    out << s.step << ',' << s.excursion;
    for (const auto& t : s.traces) {
      out << ',' << fmt(t.real());
      if (complex) out << ',' << fmt(t.imag());
    }
    out << '\n';
  }
}

WalkResult read_walk_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty walk CSV");
  auto header = split_csv(line);
  if (header.size() < 2 || header[0] != "step" || header[1] != "excursion")
    throw std::invalid_argument("walk CSV header must start with step,excursion");
  WalkResult w;
  const bool complex = header.size() > 2 && header[2].size() > 3 && header[2].substr(header[2].size() - 3) == ".re";
  for (std::size_t i = 2; i < header.size(); i += complex ? 2 : 1)
    w.columns.push_back(complex ? header[i].substr(0, header[i].size() - 3) : header[i]);
  std::size_t last_excursion = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != header.size()) throw std::invalid_argument("walk CSV row width differs from header");
    WalkSample s;
    s.step = std::stoul(f[0]);
    s.excursion = std::stoul(f[1]);
    for (std::size_t i = 2; i < f.size(); i += complex ? 2 : 1)
      s.traces.emplace_back(std::stod(f[i]), complex ? std::stod(f[i + 1]) : 0.0);
    if (s.excursion > last_excursion) {
      w.restarts = s.excursion;
      last_excursion = s.excursion;
    }
    w.samples.push_back(std::move(s));
  }
  return w;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

}  // namespace redrep
