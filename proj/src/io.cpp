#include "cesaro/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "cesaro/errors.hpp"

namespace cesaro::io {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw MalformedSpec(what);
}

std::int64_t int_field(const Json& j, const char* key) {
  require(j.contains(key), std::string("missing field \"") + key + "\"");
  require(j[key].is_number_integer(),
          std::string("field \"") + key + "\" must be an integer");
  return j[key].get<std::int64_t>();
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* membership_name(DomainReport::Membership m) {
  switch (m) {
    case DomainReport::Membership::member: return "member";
    case DomainReport::Membership::non_member: return "non-member";
    default: return "inconclusive";
  }
}

const char* point_kind_name(SpectrumPoint::Kind k) {
  switch (k) {
    case SpectrumPoint::Kind::inside_disc: return "inside-disc";
    case SpectrumPoint::Kind::outside_disc: return "outside-disc";
    default: return "boundary-ring";
  }
}

}  // namespace

TreeGenSpec parse_tree_spec(const Json& j) {
  require(j.is_object(), "tree spec must be a JSON object");
  require(j.contains("kind") && j["kind"].is_string(),
          "tree spec needs a string field \"kind\"");
  const std::string kind = j["kind"].get<std::string>();

  TreeGenSpec spec;
  if (kind == "path") {
    spec.kind = TreeKind::path;
  } else if (kind == "kary_root") {
    spec.kind = TreeKind::kary_root;
  } else if (kind == "comb") {
    spec.kind = TreeKind::comb;
  } else if (kind == "widening") {
    spec.kind = TreeKind::widening;
  } else if (kind == "explicit") {
    spec.kind = TreeKind::explicit_edges;
  } else {
    throw MalformedSpec("unknown tree kind \"" + kind + "\"");
  }

  if (spec.kind == TreeKind::explicit_edges) {
    require(j.contains("edges") && j["edges"].is_array(),
            "explicit trees need an \"edges\" array");
    for (const Json& e : j["edges"]) {
      require(e.is_array() && e.size() == 2 && e[0].is_number_integer() &&
                  e[1].is_number_integer(),
              "each edge must be an integer pair [parent, child]");
      spec.edges.emplace_back(e[0].get<std::int64_t>(),
                              e[1].get<std::int64_t>());
    }
    require(!spec.edges.empty(), "explicit trees need at least one edge");
    return spec;  // depth is determined by the edges themselves
  }

  spec.truncate_depth = int_field(j, "truncate_depth");
  require(spec.truncate_depth >= 0, "truncate_depth must be >= 0");
  if (spec.kind == TreeKind::kary_root) {
    spec.k = int_field(j, "k");
    require(spec.k >= 1, "kary_root needs k >= 1");
  }
  return spec;
}

TreeGenSpec load_tree_spec(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw MalformedSpec(path + ": " + e.what());
  }
  return parse_tree_spec(j);
}

std::vector<Complex> parse_vector(const Json& j) {
  require(j.is_array(), "vector file must be a JSON array");
  std::vector<Complex> v;
  v.reserve(j.size());
  for (const Json& e : j) {
    if (e.is_number()) {
      v.emplace_back(e.get<double>(), 0.0);
    } else {
      require(e.is_array() && e.size() == 2 && e[0].is_number() &&
                  e[1].is_number(),
              "vector entries must be numbers or [re, im] pairs");
      v.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
  }
  return v;
}

std::vector<Complex> load_vector(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw MalformedSpec(path + ": " + e.what());
  }
  return parse_vector(j);
}

std::vector<Complex> parse_lambda_grid(std::istream& in) {
  std::vector<Complex> grid;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    double re = 0.0, im = 0.0;
    std::istringstream ss(line.substr(start));
    char comma = 0;
    if (!(ss >> re))
      throw MalformedSpec("lambda grid line " + std::to_string(lineno) +
                          ": expected \"re,im\"");
    if (ss >> comma) {
      if (comma != ',' || !(ss >> im))
        throw MalformedSpec("lambda grid line " + std::to_string(lineno) +
                            ": expected \"re,im\"");
    }
    grid.emplace_back(re, im);
  }
  return grid;
}

std::vector<Complex> load_lambda_grid(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  return parse_lambda_grid(f);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  if (!f.good() && !f.eof()) throw IoError("read failed on " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << content;
  if (!f.good()) throw IoError("write failed on " + path);
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json vector_to_json(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (Complex z : v) a.push_back(complex_to_json(z));
  return a;
}

Json interval_to_json(const Interval& iv) {
  return Json{{"lo", iv.lo}, {"hi", iv.hi}, {"mid", iv.mid()}};
}

Json spec_to_json(const TreeGenSpec& spec) {
  Json j;
  j["kind"] = tree_kind_name(spec.kind);
  if (spec.kind == TreeKind::kary_root) j["k"] = spec.k;
  if (spec.kind == TreeKind::explicit_edges) {
    Json edges = Json::array();
    for (const auto& [p, c] : spec.edges) edges.push_back(Json::array({p, c}));
    j["edges"] = edges;
  } else {
    j["truncate_depth"] = spec.truncate_depth;
  }
  return j;
}

Json metrics_to_json(const TreeMetrics& m) {
  Json j;
  j["level_sizes"] = m.level_sizes;
  if (m.width)
    j["width"] = *m.width;
  else
    j["width"] = "exceeds-truncation";
  if (m.branching_index)
    j["branching_index"] = *m.branching_index;
  else
    j["branching_index"] = "unbounded-at-truncation";
  j["is_leafless"] = m.is_leafless;
  j["branching_vertices"] = m.branching_vertices;
  j["leaf_count"] = m.leaf_count;
  return j;
}

Json m_alpha_to_json(const MAlphaResult& r) {
  return Json{{"alpha", r.alpha}, {"values", r.values}, {"sup", r.sup}};
}

namespace {
Json certs_to_json(const std::vector<Certificate>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back(Json{{"label", c.label}, {"value", c.value}});
  return a;
}
}  // namespace

Json norm_report_to_json(const NormReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["N"] = r.N;
  j["section_norm"] = r.section_norm;
  j["iterations"] = r.iterations;
  j["tolerance"] = r.tolerance;
  j["lower_certificates"] = certs_to_json(r.lower_certificates);
  double lower_max = 0.0;
  for (const auto& c : r.lower_certificates)
    lower_max = std::max(lower_max, c.value);
  Json env;
  env["lower_max"] = lower_max;
  if (r.upper_bound)
    env["upper"] = *r.upper_bound;
  else
    env["upper"] = nullptr;
  env["ok"] = lower_max <= r.section_norm + 1e-9 &&
              (!r.upper_bound || r.section_norm <= *r.upper_bound + 1e-9);
  j["envelope"] = env;
  j["uncertified_branching_values"] =
      certs_to_json(r.uncertified_branching_values);
  return j;
}

Json eigen_certificate_to_json(const EigenCertificate& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["lambda"] = complex_to_json(c.lambda);
  j["path_vertices"] = c.path_vertices;
  j["coefficients"] = vector_to_json(c.coefficients);
  j["window"] = c.window;
  j["residual"] = c.residual;
  j["residual_full"] = c.residual_full;
  j["excluded_tail_mass"] = c.excluded_tail_mass;
  j["norm_sq_partial"] = c.norm_sq_partial;
  return j;
}

Json forward_solve_to_json(const ForwardSolveResult& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["seed"] = r.seed;
  j["lambda"] = r.lambda;
  j["verdict"] = r.verdict;
  if (r.leaf_encountered)
    j["leaf"] = Json{{"vertex", r.leaf_vertex}, {"lambda", r.leaf_lambda}};
  else
    j["leaf"] = nullptr;
  j["overflowed"] = r.overflowed;
  j["binomials_match"] = r.binomials_match;
  if (r.sum_crossing_index)
    j["sum_crossing_index"] = *r.sum_crossing_index;
  else
    j["sum_crossing_index"] = nullptr;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"n", row.n},
                        {"vertex", row.vertex},
                        {"coefficient", row.coefficient},
                        {"matches_binomial", row.matches_binomial},
                        {"partial_sum_sq", row.partial_sum_sq}});
  }
  j["rows"] = rows;
  return j;
}

Json hypo_report_to_json(const HypoReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["test_vector"] = r.test_vector_label;
  if (r.k_T >= 0)
    j["k_T"] = r.k_T;
  else
    j["k_T"] = nullptr;
  j["gap"] = interval_to_json(r.gap);
  if (r.closed_form)
    j["closed_form"] = *r.closed_form;
  else
    j["closed_form"] = nullptr;
  j["section_gap"] = r.section_gap;
  return j;
}

Json domain_report_to_json(const DomainReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["vertex"] = r.vertex;
  j["J"] = r.J;
  j["partial_sum"] = r.partial_sum;
  if (r.tail)
    j["tail"] = interval_to_json(*r.tail);
  else
    j["tail"] = nullptr;
  j["membership"] = membership_name(r.membership);
  return j;
}

Json decomposition_to_json(const DecompositionReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["k_T"] = r.k_T;
  j["branch_count"] = r.d;
  j["trunk_dim"] = r.trunk_dim;
  j["trunk_vertices"] = r.trunk_vertices;
  j["branch_heads"] = r.branch_heads;
  j["branch_chains"] = r.branch_chains;
  j["block_pattern_exact"] = r.block_pattern_exact;
  j["max_offblock_abs"] = r.max_offblock_abs;
  j["perturbation"] =
      Json{{"M", r.perturbation_M}, {"max_dev", r.perturbation_max_dev}};
  return j;
}

Json spectrum_points_to_json(const std::vector<SpectrumPoint>& pts) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json arr = Json::array();
  for (const auto& p : pts) {
    Json e;
    e["lambda"] = complex_to_json(p.lambda);
    e["kind"] = point_kind_name(p.kind);
    if (p.value)
      e["value"] = *p.value;
    else
      e["value"] = nullptr;
    e["iterations"] = p.iterations;
    arr.push_back(e);
  }
  j["points"] = arr;
  return j;
}

std::string dense_to_csv(const DenseMatrix& m) {
  std::ostringstream out;
  out << "row";
  for (std::int64_t c = 0; c < m.n; ++c) out << ",v" << c;
  out << "\n";
  for (std::int64_t r = 0; r < m.n; ++r) {
    out << r;
    for (std::int64_t c = 0; c < m.n; ++c) out << "," << fmt(m.at(r, c));
    out << "\n";
  }
  return out.str();
}

std::string perturbation_to_csv(const PerturbationMatrix& p) {
  std::ostringstream out;
  out << "m";
  for (std::int64_t n = 0; n < p.M; ++n) out << ",n" << n;
  out << "\n";
  for (std::int64_t m = 0; m < p.M; ++m) {
    out << m;
    for (std::int64_t n = 0; n < p.M; ++n) out << "," << fmt(p.at(m, n));
    out << "\n";
  }
  return out.str();
}

std::string diagnostics_to_csv(const CompactnessDiagnostics& d) {
  std::ostringstream out;
  out << "index,row_sum_delta,column_sum_gamma\n";
  for (std::size_t i = 0; i < d.delta.size(); ++i)
    out << i << "," << fmt(d.delta[i]) << "," << fmt(d.gamma[i]) << "\n";
  return out.str();
}

std::string spectrum_points_to_csv(const std::vector<SpectrumPoint>& pts) {
  std::ostringstream out;
  out << "re,im,kind,value,iterations\n";
  for (const auto& p : pts) {
    out << fmt(p.lambda.real()) << "," << fmt(p.lambda.imag()) << ","
        << point_kind_name(p.kind) << ",";
    if (p.value) out << fmt(*p.value);
    out << "," << p.iterations << "\n";
  }
  return out.str();
}

std::string growth_rows_to_csv(const std::vector<GrowthRow>& rows) {
  std::ostringstream out;
  out << "N,S\n";
  for (const auto& r : rows) out << r.N << "," << fmt(r.S) << "\n";
  return out.str();
}

}  // namespace cesaro::io
