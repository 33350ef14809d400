#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "redrep/automorphism.hpp"
#include "redrep/density.hpp"
#include "redrep/dynamics.hpp"
#include "redrep/nonmixing.hpp"
#include "redrep/sl2.hpp"
#include "redrep/whitehead.hpp"

namespace redrep {

using Json = nlohmann::ordered_json;

/// Provenance of one CLI run. Reruns with the same flags and seed reproduce
/// every output byte except the timestamps.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> flags;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> versions;
  std::string started;
  std::string finished;
};

RunManifest make_manifest(const std::string& subcommand, std::map<std::string, std::string> flags, std::uint64_t seed);
std::string utc_timestamp();
std::string library_version();

// Doubles are written in shortest round-trip form, so every reader below
// recovers bit-identical values.

Json to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& j);

/// Row-major entries; "im" only for the Complex and SU2 fields.
Json to_json(const GroupElement& g);
GroupElement element_from_json(const Json& j, Field field);

Json to_json(const Representation& rep);
Representation representation_from_json(const Json& j);

Json to_json(const FreeAutomorphism& a);
FreeAutomorphism automorphism_from_json(const Json& j);

Json to_json(const WhiteheadMove& m);
WhiteheadMove move_from_json(const Json& j);

Json to_json(const PrimitivityVerdict& v);
PrimitivityVerdict primitivity_from_json(const Json& j);

Json to_json(const DensityCertificate& c);
DensityCertificate certificate_from_json(const Json& j);

Json to_json(const DensityVerdict& v);
DensityVerdict verdict_from_json(const Json& j);

Json to_json(const SteerResult& r);
SteerResult steer_result_from_json(const Json& j);

/// Summary only: options, counts, minimum, argmin and zero-ratio witnesses.
/// Per-class rows go to CSV.
Json to_json(const PS2Report& r);
PS2Report ps2_summary_from_json(const Json& j);

void write_ps2_csv(std::ostream& out, const PS2Report& r);
std::vector<PS2Record> read_ps2_csv(std::istream& in, int rank);

/// step, excursion, then one column per trace (real part) or two (".re",
/// ".im") for the Complex field.
void write_walk_csv(std::ostream& out, const WalkResult& w, Field field);
WalkResult read_walk_csv(std::istream& in);

/// Parses a file as JSON, throwing std::invalid_argument on failure.
Json read_json_file(const std::string& path);

}  // namespace redrep
