#pragma once

// File formats and report serialization. All documents carry format_version;
// exact grid coordinates are written as fraction strings ("3/40320",
// "5/8 pi") so lattice grids survive round trips without float drift.
// Outputs embed a run manifest; payloads are byte-identical across reruns
// with identical inputs (timestamp excluded from that contract).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "approxvar/approx.hpp"
#include "approxvar/closed_forms.hpp"
#include "approxvar/core.hpp"
#include "approxvar/sampled.hpp"
#include "approxvar/selection.hpp"
#include "approxvar/space.hpp"
#include "approxvar/variations.hpp"

namespace approxvar {

using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

// 12 significant digits, '.' decimal, locale-free.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::parse, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::parse, "cannot write " + path);
  out << content;
}

// ---------------------------------------------------------------------------
// Spaces

inline json space_to_json(const MetricSpace& s) {
  json j;
  j["kind"] = to_string(s.kind);
  switch (s.kind) {
    case SpaceKind::real_line:
      break;
    case SpaceKind::punctured_line:
      j["hole"] = {s.hole_lo, s.hole_hi};
      j["hole_closed_removed"] = s.hole_closed_removed;
      break;
    case SpaceKind::euclidean:
      j["dim"] = s.dimension;
      break;
    case SpaceKind::finite_metric:
      j["labels"] = s.labels;
      j["dist"] = s.dist;
      break;
  }
  return j;
}

inline MetricSpace space_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "real") return MetricSpace::real();
  if (kind == "punctured") {
    auto hole = j.at("hole");
    require(hole.is_array() && hole.size() == 2, ErrorKind::parse,
            "space.hole must be [lo,hi]");
    return MetricSpace::punctured(hole[0].get<double>(), hole[1].get<double>(),
                                  j.value("hole_closed_removed", false));
  }
  if (kind == "euclidean") return MetricSpace::euclidean_space(j.at("dim").get<int>());
  if (kind == "finite")
    return MetricSpace::finite(j.at("labels").get<std::vector<std::string>>(),
                               j.at("dist").get<std::vector<std::vector<double>>>());
  fail(ErrorKind::parse, "unknown space kind: " + kind);
}

// ---------------------------------------------------------------------------
// Grids and points

inline json coord_to_json(double v, const std::optional<ExactCoord>& e) {
  if (!e) return json(v);
  std::ostringstream os;
  os << e->num << "/" << e->den;
  if (e->pi_multiple) os << " pi";
  return json(os.str());
}

inline std::pair<double, std::optional<ExactCoord>> coord_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), std::nullopt};
  require(j.is_string(), ErrorKind::parse, "grid entry must be number or string");
  std::string s = j.get<std::string>();
  bool pi = false;
  if (auto pos = s.find(" pi"); pos != std::string::npos) {
    pi = true;
    s = s.substr(0, pos);
  }
  auto slash = s.find('/');
  require(slash != std::string::npos, ErrorKind::parse,
          "exact coordinate must look like p/q or 'p/q pi'");
  long long num = std::stoll(s.substr(0, slash));
  long long den = std::stoll(s.substr(slash + 1));
  ExactCoord e = pi ? ExactCoord::pi_rational(num, den)
                    : ExactCoord::rational(num, den);
  return {e.to_double(), e};
}

inline json domain_to_json(const GridDomain& d) {
  json arr = json::array();
  for (size_t i = 0; i < d.size(); ++i)
    arr.push_back(coord_to_json(
        d.points[i], d.exact.empty() ? std::nullopt : d.exact[i]));
  return arr;
}

inline json tags_to_json(const GridDomain& d) {
  json arr = json::array();
  for (size_t i = 0; i < d.size(); ++i)
    arr.push_back(d.tag(i) == DenseTag::rational
                      ? "rational"
                      : (d.tag(i) == DenseTag::irrational ? "irrational" : "none"));
  return arr;
}

inline GridDomain domain_from_json(const json& pts, const json* tags) {
  GridDomain d;
  bool any_exact = false;
  for (const json& e : pts) {
    auto [v, ex] = coord_from_json(e);
    d.points.push_back(v);
    d.exact.push_back(ex);
    any_exact = any_exact || ex.has_value();
  }
  if (!any_exact) d.exact.clear();
  if (tags) {
    for (const json& t : *tags) {
      std::string s = t.get<std::string>();
      d.tags.push_back(s == "rational"
                           ? DenseTag::rational
                           : (s == "irrational" ? DenseTag::irrational
                                                : DenseTag::none));
    }
  }
  d.validate();
  return d;
}

inline json point_to_json(const MetricSpace& s, const Point& p) {
  switch (s.kind) {
    case SpaceKind::real_line:
    case SpaceKind::punctured_line:
      return json(p.coords[0]);
    case SpaceKind::euclidean:
      return json(p.coords);
    case SpaceKind::finite_metric:
      return json(s.labels[p.label]);
  }
  return json();
}

inline Point point_from_json(const MetricSpace& s, const json& j) {
  switch (s.kind) {
    case SpaceKind::real_line:
    case SpaceKind::punctured_line:
      return Point::real(j.get<double>());
    case SpaceKind::euclidean:
      return Point::vec(j.get<std::vector<double>>());
    case SpaceKind::finite_metric: {
      if (j.is_number_integer()) return Point::finite(j.get<int>());
      std::string lbl = j.get<std::string>();
      for (int i = 0; i < static_cast<int>(s.labels.size()); ++i)
        if (s.labels[i] == lbl) return Point::finite(i);
      fail(ErrorKind::parse, "unknown label: " + lbl);
    }
  }
  fail(ErrorKind::parse, "bad point");
}

// ---------------------------------------------------------------------------
// Functions and families

inline json function_to_json(const SampledFunction& f) {
  json j;
  j["format_version"] = kFormatVersion;
  j["space"] = space_to_json(f.space);
  j["domain"] = domain_to_json(f.domain);
  if (!f.domain.tags.empty()) j["domain_tags"] = tags_to_json(f.domain);
  json vals = json::array();
  for (const Point& p : f.values) vals.push_back(point_to_json(f.space, p));
  j["values"] = vals;
  return j;
}

inline SampledFunction function_from_json(const json& j) {
  SampledFunction f;
  f.space = space_from_json(j.at("space"));
  const json* tags = j.contains("domain_tags") ? &j.at("domain_tags") : nullptr;
  f.domain = domain_from_json(j.at("domain"), tags);
  for (const json& v : j.at("values"))
    f.values.push_back(point_from_json(f.space, v));
  f.validate();
  return f;
}

inline json generator_to_json(const GeneratorSpec& g) {
  json j;
  j["name"] = g.name;
  j["space"] = space_to_json(g.space);
  j["x"] = point_to_json(g.space, g.x);
  j["y"] = point_to_json(g.space, g.y);
  j["alpha"] = g.alpha;
  j["tau"] = g.tau;
  j["alternations"] = g.alternations;
  j["resolution"] = g.resolution;
  j["rule"] = g.rule;
  j["rate"] = g.rate;
  return j;
}

inline GeneratorSpec generator_from_json(const json& j) {
  GeneratorSpec g;
  g.name = j.at("name").get<std::string>();
  if (j.contains("space")) g.space = space_from_json(j.at("space"));
  if (j.contains("x")) g.x = point_from_json(g.space, j.at("x"));
  if (j.contains("y")) g.y = point_from_json(g.space, j.at("y"));
  g.alpha = j.value("alpha", 0.0);
  g.tau = j.value("tau", 0.5);
  g.alternations = j.value("alternations", 8);
  g.resolution = j.value("resolution", 10);
  g.rule = j.value("rule", std::string{});
  g.rate = j.value("rate", 0.25);
  return g;
}

inline json family_to_json(const FunctionFamily& fam) {
  json j;
  j["format_version"] = kFormatVersion;
  if (fam.generator) {
    j["generator"] = generator_to_json(*fam.generator);
    j["j_range"] = {fam.j_begin,
                    fam.j_begin + static_cast<int>(fam.size()) - 1};
    j["space"] = space_to_json(fam.space);
    j["domain"] = domain_to_json(fam.domain);
    if (!fam.domain.tags.empty()) j["domain_tags"] = tags_to_json(fam.domain);
  } else {
    json members = json::array();
    for (const SampledFunction& f : fam.members)
      members.push_back(function_to_json(f));
    j["members"] = members;
  }
  return j;
}

inline FunctionFamily family_from_json(const json& j) {
  FunctionFamily fam;
  if (j.contains("generator")) {
    GeneratorSpec g = generator_from_json(j.at("generator"));
    auto range = j.at("j_range");
    int j0 = range[0].get<int>(), j1 = range[1].get<int>();
    std::optional<GridDomain> dom;
    if (j.contains("domain")) {
      const json* tags = j.contains("domain_tags") ? &j.at("domain_tags") : nullptr;
      dom = domain_from_json(j.at("domain"), tags);
    }
    return make_family(g, j0, j1, dom);
  }
  require(j.contains("members"), ErrorKind::parse,
          "family file needs a generator or members");
  for (const json& m : j.at("members"))
    fam.members.push_back(function_from_json(m));
  require(!fam.members.empty(), ErrorKind::parse, "family has no members");
  fam.space = fam.members[0].space;
  fam.domain = fam.members[0].domain;
  fam.validate();
  return fam;
}

// ---------------------------------------------------------------------------
// Reports

inline json result_to_json(const EpsilonVariationResult& r) {
  json j;
  j["value"] = r.value;
  j["attained"] = r.attained;
  j["method"] = to_string(r.method);
  j["lower"] = r.lower_bound;
  j["upper"] = r.upper_bound;
  return j;
}

inline json profile_to_json(const VariationProfile& p) {
  json rows = json::array();
  for (const ProfileRow& r : p.rows) {
    json row = result_to_json(r.res);
    row["eps"] = r.eps;
    row["slope_after"] = r.slope_after;
    row["breakpoint"] = r.breakpoint;
    rows.push_back(row);
  }
  json j;
  j["rows"] = rows;
  j["monotone_ok"] = p.monotone_ok;
  return j;
}

inline std::string profile_to_csv(const VariationProfile& p) {
  std::ostringstream os;
  os << "eps,value,attained,method,lower,upper\n";
  for (const ProfileRow& r : p.rows)
    os << format_number(r.eps) << ',' << format_number(r.res.value) << ','
       << (r.res.attained ? "true" : "false") << ',' << to_string(r.res.method)
       << ',' << format_number(r.res.lower_bound) << ','
       << format_number(r.res.upper_bound) << '\n';
  return os.str();
}

inline json classical_to_json(const ClassicalVariationReport& r) {
  json j;
  j["jordan"] = r.jordan;
  j["oscillation"] = r.osc;
  j["nu"] = r.nu;
  json ne = json::array();
  for (auto [e, c] : r.n_eps) ne.push_back({{"eps", e}, {"count", c}});
  j["n_eps"] = ne;
  if (r.lambda_var) j["lambda_variation"] = *r.lambda_var;
  if (r.phi_var) j["phi_variation"] = *r.phi_var;
  if (r.schrader) j["alternating_oscillation"] = *r.schrader;
  return j;
}

inline std::string classical_to_csv(const ClassicalVariationReport& r) {
  std::ostringstream os;
  os << "functional,parameter,value\n";
  os << "jordan,," << format_number(r.jordan) << '\n';
  os << "oscillation,," << format_number(r.osc) << '\n';
  for (size_t i = 0; i < r.nu.size(); ++i)
    os << "nu," << (i + 1) << ',' << format_number(r.nu[i]) << '\n';
  for (auto [e, c] : r.n_eps)
    os << "n_eps," << format_number(e) << ',' << c << '\n';
  if (r.lambda_var) os << "lambda,," << format_number(*r.lambda_var) << '\n';
  if (r.phi_var) os << "phi,," << format_number(*r.phi_var) << '\n';
  if (r.schrader)
    os << "alternating_oscillation,," << format_number(*r.schrader) << '\n';
  return os.str();
}

inline json condition_to_json(const ConditionReport& r) {
  json j;
  j["condition"] = r.condition;
  j["overall"] = to_string(r.overall);
  j["tail_fraction"] = r.tail_fraction;
  j["hold_ratio"] = r.hold_ratio;
  j["growth_threshold"] = r.growth_threshold;
  j["tail_sup_overall"] = r.tail_sup_overall;
  json curves = json::array();
  for (const ConditionCurve& c : r.curves) {
    json cj;
    cj["label"] = c.label;
    cj["param"] = c.param;
    cj["values"] = c.values;
    cj["tail_sup"] = c.tail_sup;
    cj["early_ref"] = c.early_ref;
    cj["growth"] = c.growth;
    cj["verdict"] = to_string(c.verdict);
    curves.push_back(cj);
  }
  j["curves"] = curves;
  return j;
}

inline json selection_to_json(const SelectionReport& r) {
  json j;
  j["mode"] = r.mode;
  j["family_size"] = r.family_size;
  j["indices"] = r.indices;
  j["verdict"] = to_string(r.verdict);
  j["max_residual"] = r.max_residual;
  j["cauchy_ok"] = r.cauchy_ok;
  j["cauchy_residuals"] = r.cauchy_residuals;
  j["sup_variation"] = r.sup_variation;
  j["limit_bound_ok"] = r.limit_bound_ok;
  if (!r.phi_eps.empty()) j["ladder"] = r.phi_eps;
  if (!r.phi_profiles.empty()) j["profiles"] = r.phi_profiles;
  if (!r.level_bounds.empty()) j["level_bounds"] = r.level_bounds;
  if (!r.intervals.empty()) {
    json lv = json::array();
    for (const auto& level : r.intervals) {
      json row = json::array();
      for (auto [a, b] : level) row.push_back({a, b});
      lv.push_back(row);
    }
    j["intervals"] = lv;
  }
  if (r.no_pair_pointwise_close)
    j["no_pair_pointwise_close"] = *r.no_pair_pointwise_close;
  if (r.limit) j["limit"] = function_to_json(*r.limit);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline json comparison_to_json(const ComparisonRecord& rec) {
  json j;
  j["case"] = rec.c.id;
  j["kind"] = rec.expected.kind == CaseKind::exact
                  ? "exact"
                  : (rec.expected.kind == CaseKind::interval ? "interval" : "rate");
  j["formula"] = rec.expected.formula;
  if (rec.expected.kind == CaseKind::interval) {
    j["expected_lo"] = rec.expected.lo;
    j["expected_hi"] = rec.expected.hi;
  } else {
    j["expected"] = rec.expected.value;
  }
  j["engine"] = rec.engine_value;
  j["attained"] = rec.engine_attained;
  j["delta"] = rec.delta;
  if (rec.expected.kind == CaseKind::rate)
    j["endpoint_correction"] = rec.endpoint_correction;
  j["verdict"] = rec.pass ? "PASS" : "FAIL";
  return j;
}

// ---------------------------------------------------------------------------
// Run manifest

struct RunManifest {
  std::string subcommand;
  json parameters = json::object();
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  std::uint64_t seed = 0;
  std::string timestamp;

  void add_input(const std::string& path) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(read_file(path))));
    inputs.push_back({path, buf});
  }

  void stamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    timestamp = buf;
  }

  json to_json() const {
    json j;
    j["tool"] = "approxvar";
    j["version"] = kToolVersion;
    j["format_version"] = kFormatVersion;
    j["subcommand"] = subcommand;
    j["parameters"] = parameters;
    json ins = json::array();
    for (const auto& [p, d] : inputs) ins.push_back({{"path", p}, {"digest", d}});
    j["inputs"] = ins;
    j["seed"] = seed;
    j["timestamp"] = timestamp;
    return j;
  }
};

inline json with_manifest(const RunManifest& m, json payload) {
  json j;
  j["manifest"] = m.to_json();
  j["result"] = std::move(payload);
  return j;
}

// Load a JSON document, unwrapping the manifest envelope when an earlier run
// produced the file.
inline json load_document(const std::string& path) {
  json j = json::parse(read_file(path));
  if (j.is_object() && j.contains("manifest") && j.contains("result"))
    return j.at("result");
  return j;
}

// Parse "a:b:step" (inclusive) or a comma list.
inline std::vector<double> parse_eps_grid(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    double a, b, step;
    char c1, c2;
    std::istringstream is(s);
    require(static_cast<bool>(is >> a >> c1 >> b >> c2 >> step) && c1 == ':' &&
                c2 == ':' && step > 0,
            ErrorKind::parse, "grid must look like a:b:step");
    for (double v = a; v <= b + 1e-12; v += step) out.push_back(v);
  } else {
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) if (!tok.empty()) out.push_back(std::stod(tok));
  }
  require(!out.empty(), ErrorKind::parse, "empty eps grid");
  return out;
}

}  // namespace approxvar
