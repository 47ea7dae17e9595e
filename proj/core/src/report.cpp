#include "sqrd/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sqrd::report {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error("schema: " + what);
}

bool is_exact(const json& v) {
  try {
    parse_int(v);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

bool is_tag_name(const std::string& t) {
  if (t == "on_edge" || t == "on_midline" || t == "on_diagonal") return true;
  if (t.rfind("n_times_distance(", 0) != 0 || t.back() != ')') return false;
  std::string body = t.substr(17, t.size() - 18);
  if (body.empty() || body.find_first_not_of("0123456789") != std::string::npos)
    return false;
  return body.size() < 19;
}

std::string csv_scalar(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

void validate_hit(const json& rec) {
  for (const char* key : {"z", "x", "y"})
    require(rec.contains(key) && is_exact(rec.at(key)),
            std::string("hit record needs exact field ") + key);
  require(rec.contains("sq_dists") && rec.at("sq_dists").is_array() &&
              rec.at("sq_dists").size() == 4,
          "hit record needs 4 squared distances");
  for (const json& d : rec.at("sq_dists"))
    require(is_exact(d), "squared distances must be exact values");
  require(rec.contains("roots") && rec.at("roots").is_array() &&
              rec.at("roots").size() == 4,
          "hit record needs 4 root slots");
  int present = 0;
  for (const json& r : rec.at("roots")) {
    require(r.is_null() || is_exact(r), "roots are exact values or null");
    if (!r.is_null()) ++present;
  }
  require(rec.contains("count") && rec.at("count").is_number_integer(),
          "hit record needs an integer count");
  int count = rec.at("count").get<int>();
  require(count >= 0 && count <= 4 && count == present,
          "count must equal the number of present roots");
  require(rec.contains("tags") && rec.at("tags").is_array(),
          "hit record needs a tags array");
  for (const json& t : rec.at("tags"))
    require(t.is_string() && is_tag_name(t.get<std::string>()),
            "unknown tag name");
}

}  // namespace

json int_value(Int128 v) {
  if (v.fits_int64()) return json(v.to_int64());
  return json(v.str());
}

Int128 parse_int(const json& v) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) {
      std::uint64_t u = v.get<std::uint64_t>();
      return Int128(u);
    }
    return Int128(v.get<std::int64_t>());
  }
  if (!v.is_string()) throw DomainError("exact value must be integer or string");
  const std::string s = v.get<std::string>();
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  if (i >= s.size()) throw DomainError("exact value string is empty");
  Int128 out = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw DomainError("exact value string has a non-digit");
    out = out * 10 + (s[i] - '0');
  }
  return neg ? -out : out;
}

std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r.numerator() << '/' << r.denominator();
  return os.str();
}

json header_record(const std::string& canonical_config) {
  json rec;
  rec["config"] = canonical_config;
  rec["version"] = kVersion;
  return rec;
}

json hit_record(const PointProfile& p) {
  json rec;
  rec["z"] = int_value(p.z);
  rec["x"] = int_value(p.x);
  rec["y"] = int_value(p.y);
  json dists = json::array();
  for (const Int128& d : p.sq_dists) dists.push_back(int_value(d));
  rec["sq_dists"] = std::move(dists);
  json roots = json::array();
  for (const auto& r : p.roots) roots.push_back(r ? int_value(*r) : json());
  rec["roots"] = std::move(roots);
  rec["count"] = p.rational_count;
  rec["tags"] = p.tags.names();
  return rec;
}

json search_summary(const SearchReport& rep) {
  json rec;
  rec["summary"] = true;
  rec["z_lo"] = rep.z_lo;
  rec["z_hi"] = rep.z_hi;
  rec["filter"] = rep.filter ? json(rep.filter->str()) : json();
  rec["min_count"] = rep.min_count;
  rec["points_scanned"] = int_value(rep.points_scanned);
  rec["hits3"] = rep.hits3.size();
  rec["hits4"] = rep.hits4.size();
  return rec;
}

json triple_record(const PythTriple& t) {
  json rec;
  rec["s"] = t.s;
  rec["t"] = t.t;
  rec["even_leg"] = t.even_leg;
  rec["odd_leg"] = t.odd_leg;
  rec["hyp"] = t.hyp;
  rec["primitive"] = t.primitive;
  return rec;
}

json equation_record(const EquationInstance& inst) {
  json rec;
  rec["family"] = inst.c;
  rec["a"] = inst.a;
  rec["b"] = inst.b;
  rec["e"] = inst.root ? int_value(*inst.root) : json();
  return rec;
}

json forced_k_record(const std::string& mode_name, std::int64_t n,
                     std::int64_t claimed, const std::vector<ForcedKTuple>& found) {
  json rec;
  rec["probe"] = "forced_k";
  rec["mode"] = mode_name;
  rec["n"] = n >= 1 ? json(n) : json();
  rec["claimed"] = claimed;
  std::set<std::int64_t> realized;
  for (const ForcedKTuple& t : found) realized.insert(t.k);
  rec["realized"] = json(realized);
  json wits = json::array();
  for (const ForcedKTuple& t : found) {
    json w;
    w["k"] = t.k;
    w["a"] = t.a;
    w["b"] = t.b;
    w["c"] = t.c;
    w["d"] = t.d;
    wits.push_back(std::move(w));
  }
  rec["witnesses"] = std::move(wits);
  return rec;
}

json primes_record(const std::vector<MultiplierPair>& pairs) {
  json arr = json::array();
  for (const MultiplierPair& p : pairs) arr.push_back(p.n);
  return arr;
}

json density_record(const DensityEstimate& est) {
  json rec;
  rec["a0"] = est.a0;
  rec["tail"] = rat_str(est.tail);
  rec["magnitudes"] = est.magnitudes;
  json rates = json::array();
  for (const Rat& r : est.rates) rates.push_back(rat_str(r));
  rec["rates"] = std::move(rates);
  rec["excluded"] = est.excluded;
  rec["slope"] = est.fitted_exponent;
  return rec;
}

std::string line(const json& rec) { return rec.dump(); }

std::string csv_row(const json& rec, const std::vector<std::string>& columns) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    if (!rec.contains(columns[i])) continue;
    const json& v = rec.at(columns[i]);
    if (v.is_array()) {
      std::string joined;
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (j) joined += ';';
        joined += csv_scalar(v[j]);
      }
      out += joined;
    } else {
      out += csv_scalar(v);
    }
  }
  return out;
}

void validate_record(const json& rec) {
  if (rec.is_array()) {
    for (const json& v : rec)
      require(v.is_number_integer(), "list record holds integers only");
    return;
  }
  require(rec.is_object(), "record must be a JSON object or array");
  if (rec.contains("config")) {
    require(rec.at("config").is_string(), "header config must be a string");
    require(rec.contains("version") && rec.at("version") == kVersion,
            "header version mismatch");
    return;
  }
  if (rec.contains("summary")) {
    require(rec.at("summary").is_boolean() && rec.at("summary").get<bool>(),
            "summary flag must be true");
    return;
  }
  if (rec.contains("z")) {
    validate_hit(rec);
    return;
  }
  if (rec.contains("family")) {
    for (const char* key : {"family", "a", "b"})
      require(rec.contains(key) && rec.at(key).is_number_integer(),
              std::string("equation record needs integer ") + key);
    require(rec.contains("e") && (rec.at("e").is_null() || is_exact(rec.at("e"))),
            "equation record needs e exact or null");
    return;
  }
  if (rec.contains("probe")) {
    require(rec.at("probe") == "forced_k", "unknown probe name");
    require(rec.contains("realized") && rec.at("realized").is_array(),
            "probe record needs a realized array");
    for (const json& k : rec.at("realized"))
      require(k.is_number_integer(), "realized k values are integers");
    require(rec.contains("claimed") && rec.at("claimed").is_number_integer(),
            "probe record needs the claimed k");
    return;
  }
  if (rec.contains("a0")) {
    require(rec.contains("tail") && rec.at("tail").is_string(),
            "density record needs the tail rational string");
    require(rec.contains("magnitudes") && rec.at("magnitudes").is_array(),
            "density record needs magnitudes");
    require(rec.contains("rates") && rec.at("rates").is_array(),
            "density record needs rates");
    for (const json& r : rec.at("rates"))
      require(r.is_string() && r.get<std::string>().find('/') != std::string::npos,
              "rates are exact rational strings");
    require(rec.contains("slope") && rec.at("slope").is_number(),
            "density record needs the fitted slope");
    return;
  }
  if (rec.contains("s")) {
    for (const char* key : {"s", "t", "even_leg", "odd_leg", "hyp"})
      require(rec.contains(key) && rec.at(key).is_number_integer(),
              std::string("triple record needs integer ") + key);
    require(rec.contains("primitive") && rec.at("primitive").is_boolean(),
            "triple record needs the primitive flag");
    return;
  }
  throw std::runtime_error("schema: record matches no published shape");
}

}  // namespace sqrd::report
