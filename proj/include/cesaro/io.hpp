#pragma once

// Serialization boundary: tree specs and vectors in from JSON, reports out as
// JSON (ordered keys, so reruns are byte-identical), tables out as CSV.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cesaro/decomp.hpp"
#include "cesaro/operator.hpp"
#include "cesaro/spectral.hpp"
#include "cesaro/tree.hpp"

namespace cesaro::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// ---- ingestion ------------------------------------------------------------

// {"kind": "path"|"kary_root"|"comb"|"widening"|"explicit",
//  "k": int?, "truncate_depth": int, "edges": [[p,c],...]?}
TreeGenSpec parse_tree_spec(const Json& j);
TreeGenSpec load_tree_spec(const std::string& path);

// JSON array of [re, im] pairs in id order.
std::vector<Complex> parse_vector(const Json& j);
std::vector<Complex> load_vector(const std::string& path);

// CSV lines "re,im"; blank lines and '#' comments skipped.
std::vector<Complex> parse_lambda_grid(std::istream& in);
std::vector<Complex> load_lambda_grid(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// ---- emission -------------------------------------------------------------

Json vector_to_json(const std::vector<Complex>& v);
Json complex_to_json(Complex z);
Json interval_to_json(const Interval& iv);

Json spec_to_json(const TreeGenSpec& spec);
Json metrics_to_json(const TreeMetrics& m);
Json m_alpha_to_json(const MAlphaResult& r);
Json norm_report_to_json(const NormReport& r);
Json eigen_certificate_to_json(const EigenCertificate& c);
Json forward_solve_to_json(const ForwardSolveResult& r);
Json hypo_report_to_json(const HypoReport& r);
Json domain_report_to_json(const DomainReport& r);
Json decomposition_to_json(const DecompositionReport& r);
Json spectrum_points_to_json(const std::vector<SpectrumPoint>& pts);

std::string dense_to_csv(const DenseMatrix& m);
std::string perturbation_to_csv(const PerturbationMatrix& p);
std::string diagnostics_to_csv(const CompactnessDiagnostics& d);
std::string spectrum_points_to_csv(const std::vector<SpectrumPoint>& pts);
std::string growth_rows_to_csv(const std::vector<GrowthRow>& rows);

}  // namespace cesaro::io
