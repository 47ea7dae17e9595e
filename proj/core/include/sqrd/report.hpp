// Record plumbing shared by the CLI and the checkpoint store: JSONL record
// builders with deterministic key order, a flat CSV projection, and a schema
// validator used by the self-check mode. Integers that fit in 64 signed bits
// are emitted as JSON numbers; wider exact values become decimal strings.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sqrd/descent.hpp"
#include "sqrd/heuristic.hpp"
#include "sqrd/int128.hpp"
#include "sqrd/lattice.hpp"
#include "sqrd/triples.hpp"

namespace sqrd::report {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

json int_value(Int128 v);
Int128 parse_int(const json& v);
std::string rat_str(const Rat& r);

json header_record(const std::string& canonical_config);
json hit_record(const PointProfile& p);
json search_summary(const SearchReport& rep);
json triple_record(const PythTriple& t);
json equation_record(const EquationInstance& inst);
json forced_k_record(const std::string& mode_name, std::int64_t n,
                     std::int64_t claimed, const std::vector<ForcedKTuple>& found);
json primes_record(const std::vector<MultiplierPair>& pairs);
json density_record(const DensityEstimate& est);

/// One output line, compact, no trailing newline.
std::string line(const json& rec);

/// Renders one record as a CSV row over the named columns. Missing keys and
/// nulls become empty cells; arrays are joined with ';'.
std::string csv_row(const json& rec, const std::vector<std::string>& columns);

/// Throws std::runtime_error when the parsed line fits none of the published
/// record shapes; used by --self-check to re-validate the tool's own output.
void validate_record(const json& rec);

}  // namespace sqrd::report
